"""Exact Cantor arithmetic on J(Q) for small inputs.

A rational x0 with F(x0) a non-square is moved to infinity, so the model
has no rational points at infinity and every class is [D - W] with D affine
of degree 0 or 2.  Composition and one reduction step are then the usual
polynomial formulas over Fractions.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Sequence

from ..jacobian.mumford import ZERO, MumfordElement
from ..jacobian.rational import canonicalize_q


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _add(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def _neg(a):
    return [-x for x in a]


def _divmod(a, b):
    a, b = _trim(a), _trim(b)
    if not b:
        raise ZeroDivisionError
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    r = list(a)
    while len(r) >= len(b) and r:
        c = r[-1] / b[-1]
        k = len(r) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            r[i + k] -= c * y
        r = _trim(r)
    return _trim(q), r


def _xgcd(a, b):
    """(g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = _trim(a), _trim(b)
    s0, s1, t0, t1 = [Fraction(1)], [], [], [Fraction(1)]
    while r1:
        q, r = _divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _add(s0, _neg(_mul(q, s1)))
        t0, t1 = t1, _add(t0, _neg(_mul(q, t1)))
    if not r0:
        return [], [], []
    lc = r0[-1]
    return [x / lc for x in r0], [x / lc for x in s0], [x / lc for x in t0]


def _is_rational_square(x: Fraction) -> bool:
    if x < 0:
        return False
    n, d = x.numerator, x.denominator
    return isqrt(n) ** 2 == n and isqrt(d) ** 2 == d


def _subst(form, m):
    """form(a X + b Z, c X + d Z) for m = (a, b, c, d), over Q."""
    a, b, c, d = m
    deg = len(form) - 1
    out = [Fraction(0)] * (deg + 1)
    for i, coef in enumerate(form):
        if not coef:
            continue
        term = [Fraction(coef)]
        for _ in range(i):
            term = _mul_pad(term, [b, a])
        for _ in range(deg - i):
            term = _mul_pad(term, [d, c])
        for k, v in enumerate(term):
            out[k] += v
    return out


def _mul_pad(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


class RationalJacobian:
    """J(Q) for y^2 = F(X, Z) with exact arithmetic; meant for small coefficients."""

    def __init__(self, f: Sequence[int], search: int = 200):
        self.f = tuple(Fraction(c) for c in f)
        x0 = None
        for k in range(search):
            for cand in (k, -k):
                val = sum(c * Fraction(cand) ** i for i, c in enumerate(self.f))
                if val != 0 and not _is_rational_square(val):
                    x0 = Fraction(cand)
                    break
            if x0 is not None:
                break
        if x0 is None:
            raise ValueError("no small x0 with F(x0) a non-square")
        self.x0 = x0
        # (X, Z) = (x0 X' + Z', X') and back (X', Z') = (Z, X - x0 Z)
        self.fwd = (x0, Fraction(1), Fraction(1), Fraction(0))
        self.back = (Fraction(0), Fraction(1), Fraction(1), -x0)
        self.g = _trim(_subst(self.f, self.fwd))  # affine sextic in x = X'/Z'
        if len(self.g) != 7:
            raise ValueError("moved model is not a sextic")

    def _to_affine(self, P: MumfordElement):
        A = _subst(P.A, self.fwd)
        B = _subst(P.B, self.fwd)
        u = _trim(A)
        if len(u) != 3:
            raise ValueError("A vanishes at the moved point")
        lc = u[-1]
        u = [x / lc for x in u]
        _, v = _divmod(_trim(B), u)
        return u, v

    def _from_affine(self, u, v) -> MumfordElement:
        A = list(u) + [Fraction(0)] * (3 - len(u))
        B = list(v) + [Fraction(0)] * (4 - len(v))
        return canonicalize_q(self.f, _subst(A, self.back), _subst(B, self.back))

    def add(self, P: MumfordElement, Q: MumfordElement) -> MumfordElement:
        if P.is_zero:
            return Q
        if Q.is_zero:
            return P
        u1, v1 = self._to_affine(P)
        u2, v2 = self._to_affine(Q)
        d0, e1, e2 = _xgcd(u1, u2)
        d, c1, c2 = _xgcd(d0, _add(v1, v2))
        s1, s2, s3 = _mul(c1, e1), _mul(c1, e2), c2
        d2 = _mul(d, d)
        u, _ = _divmod(_mul(u1, u2), d2)
        num = _add(_add(_mul(_mul(s1, u1), v2), _mul(_mul(s2, u2), v1)), _mul(s3, _add(_mul(v1, v2), self.g)))
        v, rem = _divmod(num, d)
        if rem:
            raise ArithmeticError("composition is not exact")
        _, v = _divmod(v, u)
        while len(u) - 1 > 2:
            u, rem = _divmod(_add(self.g, _neg(_mul(v, v))), u)
            if rem:
                raise ArithmeticError("reduction is not exact")
            _, v = _divmod(_neg(v), u)
        if len(u) - 1 == 0:
            return ZERO
        lc = u[-1]
        u = [x / lc for x in u]
        return self._from_affine(u, v)

    def neg(self, P: MumfordElement) -> MumfordElement:
        if P.is_zero:
            return P
        return canonicalize_q(self.f, P.A, [-x for x in P.B])

    def mul(self, k: int, P: MumfordElement) -> MumfordElement:
        if k < 0:
            return self.mul(-k, self.neg(P))
        acc, base = ZERO, P
        while k:
            if k & 1:
                acc = self.add(acc, base)
            base = self.add(base, base)
            k >>= 1
        return acc

    def order_divides(self, P: MumfordElement, t: int) -> bool:
        return self.mul(t, P).is_zero
