"""Univariate polynomials and binary forms over F_p.

A polynomial is a list of residues, lowest degree first, without trailing
zeros (the zero polynomial is ``[]``).

A binary form of degree d is a tuple ``(c_0, ..., c_d)`` where ``c_i`` is the
coefficient of ``X^i Z^(d-i)``.  Read as a polynomial it is the
dehomogenisation ``F(x, 1)``; a root at infinity ``(1:0)`` shows up as a
vanishing top coefficient.  The point at infinity is therefore the factor
``Z = (1, 0)`` and never needs separate treatment.
"""

from __future__ import annotations

import random
from typing import Sequence

Poly = list
Form = tuple


class ZeroFormError(ValueError):
    pass


# -- polynomials -----------------------------------------------------------


def ptrim(a: Sequence[int]) -> Poly:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def pdeg(a: Sequence[int]) -> int:
    """Degree of a trimmed polynomial; -1 for zero."""
    return len(a) - 1


def padd(a, b, p) -> Poly:
    n = max(len(a), len(b))
    return ptrim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)])


def psub(a, b, p) -> Poly:
    n = max(len(a), len(b))
    return ptrim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def pneg(a, p) -> Poly:
    return [(-c) % p for c in a]


def pscale(a, c, p) -> Poly:
    c %= p
    if c == 0:
        return []
    return [x * c % p for x in a]


def pmul(a, b, p) -> Poly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return ptrim([c % p for c in out])


def pdivmod(a, b, p) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    if len(a) - 1 < db:
        return [], ptrim(a)
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] * inv % p
        if c:
            q[i - db] = c
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % p
    return ptrim(q), ptrim(a[:db])


def pmod(a, b, p) -> Poly:
    return pdivmod(a, b, p)[1]


def pmonic(a, p) -> Poly:
    if not a:
        return []
    inv = pow(a[-1], -1, p)
    return [x * inv % p for x in a]


def pgcd(a, b, p) -> Poly:
    a, b = ptrim(a), ptrim(b)
    while b:
        a, b = b, pmod(a, b, p)
    return pmonic(a, p)


def pxgcd(a, b, p) -> tuple[Poly, Poly, Poly]:
    """Return (g, s, t) with s*a + t*b = g and g monic (g = [] iff a = b = 0)."""
    r0, r1 = ptrim(a), ptrim(b)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = pdivmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, psub(s0, pmul(q, s1, p), p)
        t0, t1 = t1, psub(t0, pmul(q, t1, p), p)
    if not r0:
        return [], [], []
    inv = pow(r0[-1], -1, p)
    return pscale(r0, inv, p), pscale(s0, inv, p), pscale(t0, inv, p)


def peval(a, x, p) -> int:
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def pderiv(a, p) -> Poly:
    return ptrim([(i * a[i]) % p for i in range(1, len(a))])


def ppowmod(base, e, m, p) -> Poly:
    result = [1]
    base = pmod(base, m, p)
    while e:
        if e & 1:
            result = pmod(pmul(result, base, p), m, p)
        base = pmod(pmul(base, base, p), m, p)
        e >>= 1
    return result


# -- binary forms ----------------------------------------------------------


def as_form(poly: Sequence[int], degree: int) -> Form:
    """Homogenise a polynomial to a form of the given formal degree."""
    if len(poly) > degree + 1:
        raise ValueError("polynomial degree exceeds form degree")
    return tuple(list(poly) + [0] * (degree + 1 - len(poly)))


def form_degree(f: Form) -> int:
    return len(f) - 1


def is_zero_form(f: Form) -> bool:
    return not any(f)


def form_reduce(f, p) -> Form:
    return tuple(c % p for c in f)


def form_add(f, g, p) -> Form:
    if len(f) != len(g):
        raise ValueError("forms of different degree")
    return tuple((x + y) % p for x, y in zip(f, g))


def form_sub(f, g, p) -> Form:
    if len(f) != len(g):
        raise ValueError("forms of different degree")
    return tuple((x - y) % p for x, y in zip(f, g))


def form_scale(f, c, p) -> Form:
    return tuple(x * c % p for x in f)


def form_mul(f, g, p) -> Form:
    out = [0] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        if x:
            for j, y in enumerate(g):
                out[i + j] += x * y
    return tuple(c % p for c in out)


def form_eval(f, x, z, p) -> int:
    d = len(f) - 1
    xs = [1] * (d + 1)
    zs = [1] * (d + 1)
    for i in range(1, d + 1):
        xs[i] = xs[i - 1] * x % p
        zs[i] = zs[i - 1] * z % p
    return sum(c * xs[i] * zs[d - i] for i, c in enumerate(f)) % p


def z_valuation(f: Form) -> int:
    """Multiplicity of the root at infinity (number of vanishing top coefficients)."""
    k = 0
    for c in reversed(f):
        if c:
            break
        k += 1
    return k


def leading_coefficient(f: Form) -> int:
    for c in reversed(f):
        if c:
            return c
    return 0


def form_normalize(f: Form, p: int) -> tuple[int, Form]:
    """Split f into (unit, form with leading nonzero coefficient 1)."""
    lc = leading_coefficient(f)
    if lc == 0:
        raise ZeroFormError("zero form")
    inv = pow(lc, -1, p)
    return lc, tuple(c * inv % p for c in f)


def form_divexact(g: Form, a: Form, p: int) -> Form | None:
    """Return q with g = a*q, or None when a does not divide g."""
    if is_zero_form(a):
        raise ZeroFormError("division by the zero form")
    dq = len(g) - len(a)
    if dq < 0:
        return None
    ka = z_valuation(a)
    if z_valuation(g) < ka and not is_zero_form(g):
        return None
    ap = ptrim(a)
    gp = ptrim(g)
    q, r = pdivmod(gp, ap, p)
    if r:
        return None
    return as_form(q, dq)


def form_divides(a: Form, g: Form, p: int) -> bool:
    return form_divexact(g, a, p) is not None


def form_substitute(f: Form, m: tuple[int, int, int, int], p: int) -> Form:
    """f(alpha X + beta Z, gamma X + delta Z) for m = (alpha, beta, gamma, delta)."""
    al, be, ga, de = m
    d = len(f) - 1
    lin_x = (be % p, al % p)  # alpha X + beta Z as a degree-1 form
    lin_z = (de % p, ga % p)
    out = (0,) * (d + 1)
    powers_x = [(1,)]
    powers_z = [(1,)]
    for _ in range(d):
        powers_x.append(form_mul(powers_x[-1], lin_x, p))
        powers_z.append(form_mul(powers_z[-1], lin_z, p))
    for i, c in enumerate(f):
        if c:
            term = form_scale(form_mul(powers_x[i], powers_z[d - i], p), c, p)
            out = form_add(out, term, p)
    return out


def form_gcd(f: Form, g: Form, p: int) -> Form:
    """Normalised gcd of two nonzero forms, as a form."""
    k = min(z_valuation(f), z_valuation(g))
    pg = pgcd(ptrim(f), ptrim(g), p)
    return as_form(pg, len(pg) - 1 + k)


def form_roots(f: Form, p: int) -> list[tuple[int, int]]:
    """Distinct roots of f in P^1(F_p) as normalised pairs (x, 1) or (1, 0)."""
    roots = []
    if z_valuation(f) > 0:
        roots.append((1, 0))
    poly = ptrim(f)
    for x in poly_roots(poly, p):
        roots.append((x, 1))
    return roots


def poly_roots(poly: Sequence[int], p: int) -> list[int]:
    """Distinct roots in F_p of a nonzero polynomial."""
    poly = ptrim(poly)
    if len(poly) <= 1:
        return []
    # isolate the product of distinct linear factors: gcd(x^p - x, f)
    xp = ppowmod([0, 1], p, poly, p)
    lin = pgcd(psub(xp, [0, 1], p), poly, p)
    return sorted(_split_roots(lin, p))


def _split_roots(lin: Poly, p: int) -> list[int]:
    d = len(lin) - 1
    if d <= 0:
        return []
    if d == 1:
        return [(-lin[0]) % p]
    if p <= 64:
        return [x for x in range(p) if peval(lin, x, p) == 0]
    out = []
    for piece in _edf(lin, 1, p):
        out.append((-piece[0]) % p)
    return out


def _edf(h: Poly, k: int, p: int) -> list[Poly]:
    """Split h, a product of distinct monic irreducibles of degree k (Cantor-Zassenhaus)."""
    n = len(h) - 1
    if n == k:
        return [h]
    e = (p ** k - 1) // 2
    rng = random.Random(p * 1000003 + n)
    tries = 0
    while True:
        if tries < p:
            t = [tries % p, 1]
        else:
            t = ptrim([rng.randrange(p) for _ in range(n)]) or [1, 1]
        tries += 1
        g = pgcd(psub(ppowmod(t, e, h, p), [1], p), h, p)
        if 0 < len(g) - 1 < n:
            q, _ = pdivmod(h, g, p)
            return _edf(g, k, p) + _edf(pmonic(q, p), k, p)


def factor_profile(f: Form, p: int) -> tuple[int, list[tuple[Form, int]]]:
    """Factor a nonzero binary form over F_p.

    Returns ``(unit, [(factor, multiplicity), ...])`` with every factor a
    normalised irreducible form (leading nonzero coefficient 1); the root at
    infinity appears as the factor ``Z = (1, 0)``.  Factors are sorted by
    (degree, coefficients).
    """
    f = form_reduce(f, p)
    if is_zero_form(f):
        raise ZeroFormError("cannot factor the zero form")
    unit = leading_coefficient(f)
    factors: list[tuple[Form, int]] = []
    k = z_valuation(f)
    if k:
        factors.append(((1, 0), k))
    g = pmonic(ptrim(f), p)
    for irr in _irreducible_factors(g, p):
        m = 0
        while len(g) > 1:
            q, r = pdivmod(g, irr, p)
            if r:
                break
            g = q
            m += 1
        factors.append((as_form(irr, len(irr) - 1), m))
    factors.sort(key=lambda fm: (len(fm[0]), fm[0]))
    return unit, factors


def _irreducible_factors(g: Poly, p: int) -> list[Poly]:
    """Distinct monic irreducible factors of a monic polynomial."""
    if len(g) <= 1:
        return []
    # radical of g via distinct-degree factorisation of each x^(p^k) - x gcd
    out: list[Poly] = []
    rest = list(g)
    xpk = [0, 1]
    k = 0
    while len(rest) > 1:
        k += 1
        if 2 * k > len(rest) - 1:
            # every factor left has degree >= k and deg(rest) < 2k
            out.append(rest)
            break
        xpk = ppowmod(xpk, p, rest, p)
        h = pgcd(psub(xpk, [0, 1], p), rest, p)
        if len(h) > 1:
            pieces = _edf(h, k, p)
            out.extend(pieces)
            for piece in pieces:
                while True:
                    q, r = pdivmod(rest, piece, p)
                    if r:
                        break
                    rest = q
            rest = pmonic(rest, p)
            xpk = pmod(xpk, rest, p) if len(rest) > 1 else [0, 1]
    return out


def form_is_square(f: Form, p: int) -> bool:
    """True iff f = H^2 for a form H over F_p (the zero form counts as a square)."""
    if is_zero_form(f):
        return True
    unit, facs = factor_profile(f, p)
    from .fields import legendre

    return all(m % 2 == 0 for _, m in facs) and legendre(unit, p) == 1


def form_from_factors(unit: int, factors, p: int) -> Form:
    out: Form = (unit % p,)
    for fac, m in factors:
        for _ in range(m):
            out = form_mul(out, fac, p)
    return out
