"""Mumford-pair arithmetic on J(F_p) and on J^0 of a singular reduction.

An element is ``MumfordElement(A, B)`` with A a binary quadratic form and B a
binary cubic form such that A divides F - B^2; zero is ``ZERO``.  Everything
is done on binary forms, so roots of A at (1:0) need no special treatment.
For Cantor composition we move a point that is not a root of either A to
infinity by a linear substitution, compose affinely, and substitute back.
"""

from __future__ import annotations

import random
from typing import NamedTuple, Sequence

from ..algebra.fields import Fp2Elem, smallest_nonresidue, sqrt_mod
from ..algebra.forms import (
    as_form,
    factor_profile,
    form_divexact,
    form_mul,
    form_reduce,
    form_sub,
    form_substitute,
    pdivmod,
    peval,
    pmod,
    pmul,
    padd,
    psub,
    pscale,
    ptrim,
    pxgcd,
)


class NotOnJacobian(ValueError):
    pass


class MumfordElement(NamedTuple):
    A: tuple = ()
    B: tuple = ()

    @property
    def is_zero(self) -> bool:
        return not self.A

    def __repr__(self):
        if not self.A:
            return "Zero"
        return f"(A={list(self.A)}, B={list(self.B)})"


ZERO = MumfordElement((), ())

_IDENTITY = (1, 0, 0, 1)


def _chart_maps(t, p):
    """Substitution sending (1:0) to the point t = (x : z), and its inverse."""
    x, z = t
    if z == 0:
        return None, None
    # X = x X' + Z', Z = X'   (inverse: X' = Z, Z' = X - x Z)
    return (x % p, 1, 1, 0), (0, 1, 1, (-x) % p)


def _form_roots_mask(a: tuple, t: tuple, p: int) -> bool:
    x, z = t
    return (a[0] * z * z + a[1] * x * z + a[2] * x * x) % p == 0


class JacobianFp:
    """Group law on J(F_p), or on J^0 when F mod p has multiple factors."""

    def __init__(self, f: Sequence[int], p: int):
        self.p = p
        self.f = form_reduce(tuple(f), p)
        if not any(self.f):
            raise ValueError("F vanishes mod p")
        unit, facs = factor_profile(self.f, p)
        self.multiple_factors = tuple(g for g, m in facs if m > 1)
        # rational singular points (x : z), normalised
        self.singular_points = tuple(
            (1, 0) if g == (1, 0) else ((-g[0]) % p, 1) for g in self.multiple_factors if len(g) == 2
        )
        self.singular = bool(self.multiple_factors)
        self._chart_cache: dict = {}

    # -- canonical forms ---------------------------------------------------

    def canonicalize(self, A: Sequence[int], B: Sequence[int]) -> MumfordElement:
        A = form_reduce(tuple(A), self.p)
        B = form_reduce(tuple(B), self.p)
        if len(A) != 3 or len(B) != 4 or not any(A):
            raise NotOnJacobian("need a nonzero quadratic A and a cubic B")
        el = self._canon(A, B)
        if not self.is_valid(el):
            raise NotOnJacobian("A does not divide F - B^2")
        return el

    def _canon(self, A, B) -> MumfordElement:
        p = self.p
        a0, a1, a2 = A
        b0, b1, b2, b3 = B
        if a2:
            inv = pow(a2, -1, p)
            a0, a1 = a0 * inv % p, a1 * inv % p
            # subtract b3*X*A then b2*Z*A
            b1, b2 = (b1 - b3 * a0) % p, (b2 - b3 * a1) % p
            b0, b1 = (b0 - b2 * a0) % p, (b1 - b2 * a1) % p
            return MumfordElement((a0, a1, 1), (b0, b1, 0, 0))
        if a1:
            inv = pow(a1, -1, p)
            a0 = a0 * inv % p
            # X*A = (0, a0, 1, 0), Z*A = (a0, 1, 0, 0)
            b1 = (b1 - b2 * a0) % p
            b0 = (b0 - b1 * a0) % p
            return MumfordElement((a0, 1, 0), (b0, 0, 0, b3))
        return MumfordElement((1, 0, 0), (0, 0, b2, b3))

    def is_valid(self, el: MumfordElement) -> bool:
        if el.is_zero:
            return True
        rest = form_sub(self.f, form_mul(el.B, el.B, self.p), self.p)
        return form_divexact(rest, el.A, self.p) is not None

    def negate(self, el: MumfordElement) -> MumfordElement:
        if el.is_zero:
            return el
        return self._canon(el.A, tuple((-b) % self.p for b in el.B))

    # -- smoothness -----------------------------------------------------------

    def _double_at(self, A) -> tuple | None:
        """If A = c*L^2 with L through a rational singular point, return that point."""
        for pt in self.singular_points:
            x, z = pt
            if z == 0:
                if A[2] == 0 and A[1] == 0:
                    return pt
            elif A[2] and (A[1] * pow(A[2], -1, self.p) + 2 * x) % self.p == 0 and (
                A[0] * pow(A[2], -1, self.p) - x * x
            ) % self.p == 0:
                return pt
        return None

    def is_smooth(self, el: MumfordElement) -> bool:
        if el.is_zero or not self.singular:
            return True
        p = self.p
        A = el.A
        for g in self.multiple_factors:
            if len(g) == 3:
                if form_divexact(A, g, p) is not None:
                    return False  # simple roots at a conjugate pair of singular points
                continue
            if len(g) > 3:
                continue
            if form_divexact(A, g, p) is None:
                continue
            if form_divexact(A, form_mul(g, g, p), p) is None:
                return False  # condition (1): simple root at a singular point
            rest = form_sub(self.f, form_mul(el.B, el.B, p), p)
            if form_divexact(rest, form_mul(form_mul(g, g, p), g, p), p) is not None:
                return False  # condition (2): tangency of order three
        return True

    # -- group law ------------------------------------------------------------

    def _chart(self, t):
        if t not in self._chart_cache:
            m, minv = _chart_maps(t, self.p)
            self._chart_cache[t] = (m, minv, form_substitute(self.f, m, self.p))
        return self._chart_cache[t]

    def _pick_chart(self, A1, A2):
        p = self.p
        if A1[2] and A2[2]:
            return (1, 0)
        for x in range(p):
            t = (x, 1)
            if not _form_roots_mask(A1, t, p) and not _form_roots_mask(A2, t, p):
                return t
        return None

    def add(self, P: MumfordElement, Q: MumfordElement) -> MumfordElement:
        if P.is_zero:
            return Q
        if Q.is_zero:
            return P
        if self.singular:
            s1 = self._double_at(P.A)
            if s1 is not None and s1 == self._double_at(Q.A):
                return self._add_singular(P, Q, s1)
        if P.A[2] and Q.A[2]:
            r = self._fast_add(P, Q)
            if r is not None:
                return r
        t = self._pick_chart(P.A, Q.A)
        if t is None:
            return self._add_interpolate(P, Q)
        if t == (1, 0):
            return self._compose_reduce(P.A, P.B, Q.A, Q.B, self.f)
        m, minv, fc = self._chart(t)
        p = self.p
        A1, B1 = form_substitute(P.A, m, p), form_substitute(P.B, m, p)
        A2, B2 = form_substitute(Q.A, m, p), form_substitute(Q.B, m, p)
        r = self._compose_reduce(A1, B1, A2, B2, fc)
        if r.is_zero:
            return r
        return self._canon(form_substitute(r.A, minv, p), form_substitute(r.B, minv, p))

    def _fast_add(self, P, Q):
        """Monic A1, A2 with A1, A2 coprime, or P = Q with 2B invertible mod A.

        Same composition and reduction as the general path, written out on
        coefficients.  Returns None when neither case applies.
        """
        p = self.p
        p0, p1 = P.A[0], P.A[1]
        r0, r1 = P.B[0], P.B[1]
        if P == Q:
            # w = (F - B^2)/A mod A, then k = w / (2B) mod A
            w = self._quot_mod(P.A, (r0, r1), p0, p1)
            al, be = 2 * r1 % p, 2 * r0 % p
            res = (be * be - al * be * p1 + al * al * p0) % p
            if not res:
                return None
            ri = pow(res, -1, p)
            i1, i0 = -al * ri % p, (be - al * p1) * ri % p
            k1, k0 = _linmul(w[1], w[0], i1, i0, p0, p1, p)
            q0, q1 = p0, p1
        else:
            q0, q1 = Q.A[0], Q.A[1]
            al, be = (p1 - q1) % p, (p0 - q0) % p
            res = (be * be - al * be * q1 + al * al * q0) % p
            if not res:
                return None
            ri = pow(res, -1, p)
            i1, i0 = -al * ri % p, (be - al * q1) * ri % p
            k1, k0 = _linmul((Q.B[1] - r1) % p, (Q.B[0] - r0) % p, i1, i0, q0, q1, p)
        # v = B1 + A1*k (cubic), u = A1*A2 (monic quartic)
        v = ((r0 + p0 * k0) % p, (r1 + p0 * k1 + p1 * k0) % p, (k0 + p1 * k1) % p, k1)
        u = (p0 * q0 % p, (p0 * q1 + p1 * q0) % p, (p0 + q0 + p1 * q1) % p, (p1 + q1) % p, 1)
        f = self.f
        v0, v1, v2, v3 = v
        # top three coefficients of F - v^2 determine the quotient by the monic quartic u
        g6 = (f[6] - v3 * v3) % p
        g5 = f[5] - 2 * v2 * v3
        g4 = f[4] - 2 * v1 * v3 - v2 * v2
        c2 = g6
        c1 = (g5 - c2 * u[3]) % p
        c0 = (g4 - c1 * u[3] - c2 * u[2]) % p
        if not (c0 or c1 or c2):
            raise ArithmeticError("reduction step failed")
        return self._canon((c0, c1, c2), tuple((-x) % p for x in v))

    def _quot_mod(self, A, b, p0, p1):
        """((F - B^2) / A) mod A for monic A, B linear; returns (w0, w1)."""
        p = self.p
        r0, r1 = b
        g = list(self.f)
        g[0] = (g[0] - r0 * r0) % p
        g[1] = (g[1] - 2 * r0 * r1) % p
        g[2] = (g[2] - r1 * r1) % p
        # synthetic division by x^2 + p1 x + p0
        q = [0] * 5
        for i in range(6, 1, -1):
            c = g[i] % p
            q[i - 2] = c
            g[i - 1] -= c * p1
            g[i - 2] -= c * p0
        # quotient q (degree 4) mod A
        for i in range(4, 1, -1):
            c = q[i] % p
            q[i - 1] -= c * p1
            q[i - 2] -= c * p0
        return (q[0] % p, q[1] % p)

    def _compose_reduce(self, A1, B1, A2, B2, fc) -> MumfordElement:
        """Cantor composition and one reduction step; both A have a2 != 0."""
        p = self.p
        a1 = ptrim(A1)
        a2 = ptrim(A2)
        b1 = pmod(ptrim(B1), a1, p)
        b2 = pmod(ptrim(B2), a2, p)
        fpoly = ptrim(fc)
        d0, e1, e2 = pxgcd(a1, a2, p)
        if len(d0) == 1:
            d, c1, c2 = d0, [1], []
        else:
            d, c1, c2 = pxgcd(d0, padd(b1, b2, p), p)
        s1, s2, s3 = pmul(c1, e1, p), pmul(c1, e2, p), c2
        u, _ = pdivmod(pmul(a1, a2, p), pmul(d, d, p), p)
        v = padd(pmul(pmul(s1, a1, p), b2, p), pmul(pmul(s2, a2, p), b1, p), p)
        v = padd(v, pmul(s3, padd(pmul(b1, b2, p), fpoly, p), p), p)
        v, _ = pdivmod(v, d, p)
        v = pmod(v, u, p)
        du = len(u) - 1
        if du == 0:
            return ZERO
        if du == 2:
            return self._canon(as_form(u, 2), as_form(v, 3))
        A4 = as_form(u, 4)
        B = as_form(v, 3)
        rest = form_sub(fc, form_mul(B, B, p), p)
        C = form_divexact(rest, A4, p)
        if C is None or not any(C):
            raise ArithmeticError("reduction step failed")
        return self._canon(C, tuple((-b) % p for b in B))

    def _add_interpolate(self, P, Q) -> MumfordElement:
        # A1, A2 coprime and together vanish on all of P^1(F_p): interpolate B
        p = self.p
        A4 = form_mul(P.A, Q.A, p)
        pts = [(1, 0)] + [(x, 1) for x in range(p)]
        rows, rhs = [], []
        for x, z in pts:
            src = P if _form_roots_mask(P.A, (x, z), p) else Q
            val = sum(c * pow(x, i, p) * pow(z, 3 - i, p) for i, c in enumerate(src.B)) % p
            rows.append([pow(x, i, p) * pow(z, 3 - i, p) % p for i in range(4)])
            rhs.append(val)
        B = tuple(_solve_mod(rows, rhs, p))
        rest = form_sub(self.f, form_mul(B, B, p), p)
        C = form_divexact(rest, A4, p)
        if C is None or not any(C):
            raise ArithmeticError("reduction step failed")
        return self._canon(C, tuple((-b) % p for b in B))

    def _add_singular(self, P, Q, pt) -> MumfordElement:
        """Both A vanish doubly at the same singular point: closed formula."""
        p = self.p
        x, z = pt
        if z == 0:
            m = minv = (0, 1, 1, 0)
        else:
            m, minv = (1, x, 0, 1), (1, (-x) % p, 0, 1)
        fl = form_substitute(self.f, m, p)
        lam = self._canon(form_substitute(P.A, m, p), form_substitute(P.B, m, p)).B[1]
        mu = self._canon(form_substitute(Q.A, m, p), form_substitute(Q.B, m, p)).B[1]
        if (lam + mu) % p == 0:
            return ZERO
        nu = (fl[2] + lam * mu) * pow(lam + mu, -1, p) % p
        A = form_substitute((0, 0, 1), minv, p)
        B = form_substitute((0, nu, 0, 0), minv, p)
        return self._canon(A, B)

    def double(self, P):
        return self.add(P, P)

    def sub(self, P, Q):
        return self.add(P, self.negate(Q))

    def mul(self, k: int, P: MumfordElement) -> MumfordElement:
        if k < 0:
            return self.mul(-k, self.negate(P))
        result = ZERO
        base = P
        while k:
            if k & 1:
                result = self.add(result, base)
            k >>= 1
            if k:
                base = self.add(base, base)
        return result

    # -- constructing elements -----------------------------------------------

    def b_solutions(self, A: Sequence[int]) -> list[MumfordElement]:
        """All elements with the given A (smooth or not), canonical."""
        p = self.p
        A = form_reduce(tuple(A), p)
        t = self._pick_chart(A, A)
        if t is None:  # cannot happen for a single quadratic form
            raise ArithmeticError("no chart")
        if t == (1, 0):
            m = minv = None
            fc, Ac = self.f, A
        else:
            m, minv, fc = self._chart(t)
            Ac = form_substitute(A, m, p)
        a = ptrim(Ac)
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
        fpoly = ptrim(fc)
        out = []
        for b in _affine_b(a, fpoly, p):
            B = as_form(b, 3)
            if m is None:
                el = self._canon(A, B)
            else:
                el = self._canon(A, form_substitute(B, minv, p))
            out.append(el)
        return sorted(set(out))

    def random_element(self, rng: random.Random, smooth_only: bool = True) -> MumfordElement:
        p = self.p
        while True:
            r = rng.randrange(p * p + p + 1)
            if r < p * p:
                A = (r % p, r // p, 1)
            elif r < p * p + p:
                A = (r - p * p, 1, 0)
            else:
                A = (1, 0, 0)
            sols = self.b_solutions(A)
            if smooth_only:
                sols = [s for s in sols if self.is_smooth(s)]
            if sols:
                return rng.choice(sols)


def _linmul(a, b, c, d, q0, q1, p):
    """(a x + b)(c x + d) mod x^2 + q1 x + q0, as (x coefficient, constant)."""
    ac = a * c
    return (a * d + b * c - ac * q1) % p, (b * d - ac * q0) % p


def _affine_b(a: list, f: list, p: int) -> list[list[int]]:
    """All b of degree < 2 with a | f - b^2, for monic quadratic a."""
    disc = (a[1] * a[1] - 4 * a[0]) % p
    if disc == 0:
        x0 = (-a[1]) * pow(2, -1, p) % p
        f0 = peval(f, x0, p)
        f1 = peval(_deriv(f, p), x0, p)
        if f0:
            y0 = sqrt_mod(f0, p)
            if y0 is None:
                return []
            out = []
            for y in {y0, (-y0) % p}:
                y1 = f1 * pow(2 * y, -1, p) % p
                # b = y + y1 (x - x0)
                out.append(ptrim([(y - y1 * x0) % p, y1]))
            return out
        if f1:
            return []
        return [ptrim([(-lam * x0) % p, lam]) for lam in range(p)]
    r = sqrt_mod(disc, p)
    if r is not None:
        inv2 = pow(2, -1, p)
        x1 = (-a[1] + r) * inv2 % p
        x2 = (-a[1] - r) * inv2 % p
        ys1 = _ys(peval(f, x1, p), p)
        ys2 = _ys(peval(f, x2, p), p)
        out = []
        dx = pow(x1 - x2, -1, p)
        for y1 in ys1:
            for y2 in ys2:
                slope = (y1 - y2) * dx % p
                out.append(ptrim([(y1 - slope * x1) % p, slope]))
        return out
    # irreducible: root alpha = (-a1 + sqrt(disc)) / 2 in F_{p^2}
    s = smallest_nonresidue(p)
    k = sqrt_mod(disc * pow(s, -1, p), p)  # disc = s k^2
    inv2 = pow(2, -1, p)
    alpha = Fp2Elem((-a[1]) * inv2, k * inv2, p)
    val = Fp2Elem(0, 0, p)
    for c in reversed(f):
        val = val * alpha + c
    y = val.sqrt()
    if y is None:
        return []
    if y.is_zero():
        return [[]]
    out = []
    for yy in (y, -y):
        b1 = yy.v * pow(alpha.v, -1, p) % p
        b0 = (yy.u - b1 * alpha.u) % p
        out.append(ptrim([b0, b1]))
    return out


def _ys(v, p):
    r = sqrt_mod(v, p)
    if r is None:
        return []
    return [0] if r == 0 else [r, p - r]


def _deriv(f, p):
    return ptrim([(i * f[i]) % p for i in range(1, len(f))])


def _solve_mod(rows, rhs, p):
    n = len(rows[0])
    m = [list(r) + [v] for r, v in zip(rows, rhs)]
    piv_row = 0
    where = [-1] * n
    for col in range(n):
        sel = next((i for i in range(piv_row, len(m)) if m[i][col] % p), None)
        if sel is None:
            continue
        m[piv_row], m[sel] = m[sel], m[piv_row]
        inv = pow(m[piv_row][col], -1, p)
        m[piv_row] = [x * inv % p for x in m[piv_row]]
        for i in range(len(m)):
            if i != piv_row and m[i][col] % p:
                c = m[i][col]
                m[i] = [(x - c * y) % p for x, y in zip(m[i], m[piv_row])]
        where[col] = piv_row
        piv_row += 1
    return [m[where[c]][n] if where[c] >= 0 else 0 for c in range(n)]
