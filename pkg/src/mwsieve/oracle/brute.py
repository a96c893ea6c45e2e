"""Brute-force divisor-class arithmetic at tiny primes.

Elements are kept as multisets of points over F_{p^2}.  The sum of two
classes is found by interpolating the cubic Y = B(X, Z) through all four
points, taking the two residual roots of F - B^2 and reflecting them.  None of
this shares code with the Cantor implementation in ``jacobian``.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field
from math import comb
from typing import Callable

from ..algebra.fields import Fp2Elem


class AxiomFailure(AssertionError):
    pass


class OutsidePointModel(Exception):
    """The sum passes through a singular point; the point model cannot express it."""


def _e(a, p) -> Fp2Elem:
    return a if isinstance(a, Fp2Elem) else Fp2Elem(a, 0, p)


class _Curve:
    def __init__(self, f, p):
        self.p = p
        self.f = [c % p for c in f]
        self.zero = Fp2Elem(0, 0, p)
        self.one = Fp2Elem(1, 0, p)
        self.field = [Fp2Elem(u, v, p) for v in range(p) for u in range(p)]
        # points of P^1(F_{p^2}) as (x, z) with z in {0, 1}
        self.p1 = [(x, self.one) for x in self.field] + [(self.one, self.zero)]

    def chart_poly(self, form, pt):
        """Dehomogenised coefficients (low to high) and the local parameter value."""
        x, z = pt
        d = len(form) - 1
        if z == self.one:
            return [_e(c, self.p) for c in form], x
        return [_e(form[d - j], self.p) for j in range(d + 1)], self.zero

    def taylor(self, coeffs, t0, m):
        """First m Taylor coefficients of the polynomial at t0."""
        out = []
        for k in range(m):
            s = self.zero
            pw = self.one
            # sum_i c_i C(i,k) t0^(i-k)
            for i in range(k, len(coeffs)):
                s = s + coeffs[i] * (comb(i, k) % self.p) * pw
                pw = pw * t0
            out.append(s)
        return out

    def order_at(self, form, pt) -> int:
        if not self.eval_b(form, pt).is_zero():
            return 0
        coeffs, t0 = self.chart_poly(form, pt)
        n = len(coeffs)
        tay = self.taylor(coeffs, t0, n)
        for k, c in enumerate(tay):
            if not c.is_zero():
                return k
        return n + 100

    def sqrt_series(self, pt, y0, m):
        coeffs, t0 = self.chart_poly(self.f, pt)
        c = self.taylor(coeffs, t0, m)
        s = [y0]
        inv = (y0 * 2).inverse() if m > 1 else None
        for k in range(1, m):
            acc = c[k]
            for i in range(1, k):
                acc = acc - s[i] * s[k - i]
            s.append(acc * inv)
        return s

    def eval_b(self, B, pt):
        coeffs, t0 = self.chart_poly(B, pt)
        val = self.zero
        for cc in reversed(coeffs):
            val = val * t0 + cc
        return val

    def f_value(self, pt):
        return self.eval_b(tuple(self.f), pt)


def _solve(rows, rhs, p):
    n = len(rows[0])
    m = [list(r) + [v] for r, v in zip(rows, rhs)]
    where = [-1] * n
    r = 0
    for col in range(n):
        sel = next((i for i in range(r, len(m)) if not m[i][col].is_zero()), None)
        if sel is None:
            continue
        m[r], m[sel] = m[sel], m[r]
        inv = m[r][col].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and not m[i][col].is_zero():
                c = m[i][col]
                m[i] = [x - c * y for x, y in zip(m[i], m[r])]
        where[col] = r
        r += 1
    for i in range(r, len(m)):
        if not m[i][n].is_zero():
            raise AxiomFailure("inconsistent interpolation conditions")
    return [m[where[c]][n] if where[c] >= 0 else Fp2Elem(0, 0, p) for c in range(n)]


def _cancel_pairs(pts: Counter) -> Counter:
    pts = Counter(pts)
    changed = True
    while changed:
        changed = False
        for (x, z, y), k in list(pts.items()):
            if k <= 0:
                continue
            opp = (x, z, -y)
            if opp == (x, z, y):
                if k >= 2:
                    pts[(x, z, y)] -= 2
                    changed = True
                    break
            elif pts.get(opp, 0) > 0:
                pts[(x, z, y)] -= 1
                pts[opp] -= 1
                changed = True
                break
    return +pts


class PointArithmetic:
    """Class arithmetic on point multisets (degree <= 2 after reduction)."""

    def __init__(self, f, p):
        self.c = _Curve(f, p)
        self.p = p
        fo = tuple(x % p for x in f)
        self.singular = {pt for pt in self.c.p1 if self.c.order_at(fo, pt) >= 2}

    def add(self, d1: Counter, d2: Counter) -> Counter:
        c = self.c
        total = _cancel_pairs(Counter(d1) + Counter(d2))
        deg = sum(total.values())
        if deg <= 2:
            return total
        # interpolate B through the four points with multiplicity
        rows, rhs = [], []
        for (x, z, y), m in total.items():
            pt = (x, z)
            series = c.sqrt_series(pt, y, m)
            for k in range(m):
                row = []
                for i in range(4):
                    # k-th Taylor coefficient of the chart monomial attached to b_i
                    form = [0] * 4
                    form[i] = 1
                    coeffs, t0 = c.chart_poly(tuple(form), pt)
                    row.append(c.taylor(coeffs, t0, k + 1)[k])
                rows.append(row)
                rhs.append(series[k])
        B = _solve(rows, rhs, self.p)
        G = _form_sub_sq(c, B)
        resid = Counter()
        for pt in c.p1:
            o = c.order_at(G, pt)
            if o > 6:
                raise AxiomFailure("F - B^2 vanishes identically")
            used = sum(m for (x, z, y), m in total.items() if (x, z) == pt)
            if o - used > 0:
                y = c.eval_b(tuple(B), pt)
                resid[(pt[0], pt[1], -y)] += o - used
        if sum(resid.values()) != 2:
            raise AxiomFailure(f"residual divisor has degree {sum(resid.values())}")
        if any((x, z) in self.singular for (x, z, _y) in resid):
            raise OutsidePointModel
        return _cancel_pairs(resid)

    def neg(self, d: Counter) -> Counter:
        return Counter({(x, z, -y): k for (x, z, y), k in d.items()})

    def from_mumford(self, A, B) -> Counter:
        """Point multiset of a Mumford pair (A, B) with F_p coefficients."""
        c = self.c
        out = Counter()
        for pt in c.p1:
            o = c.order_at(A, pt)
            if 0 < o <= 2:
                out[(pt[0], pt[1], c.eval_b(tuple(B), pt))] += o
        if sum(out.values()) != 2:
            raise AxiomFailure("A does not have two roots")
        return out


def _form_sub_sq(c: _Curve, B):
    sq = [c.zero] * 7
    for i in range(4):
        for j in range(4):
            sq[i + j] = sq[i + j] + B[i] * B[j]
    return tuple(_e(fc, c.p) - s for fc, s in zip(c.f, sq))


# -- enumeration --------------------------------------------------------------


def _normalised_quadratics(p):
    for a0 in range(p):
        for a1 in range(p):
            yield (a0, a1, 1)
    for a0 in range(p):
        yield (a0, 1, 0)
    yield (1, 0, 0)


def _b_shapes(A, p):
    if A[2]:
        return [(b0, b1, 0, 0) for b0 in range(p) for b1 in range(p)]
    if A[1]:
        return [(b0, 0, 0, b3) for b0 in range(p) for b3 in range(p)]
    return [(0, 0, b2, b3) for b2 in range(p) for b3 in range(p)]


@dataclass
class BruteJacobian:
    f: tuple
    p: int
    elements: list  # list of (A, B) pairs plus None for zero
    singular_x: list = field(default_factory=list)

    @property
    def order(self) -> int:
        return len(self.elements)


def brute_elements(f, p):
    """All (A, B) with A | F - B^2 in canonical shape, checked point by point; smooth only."""
    arith = PointArithmetic(f, p)
    c = arith.c
    fo = tuple(x % p for x in f)
    sing = [pt for pt in c.p1 if c.order_at(fo, pt) >= 2]
    out = [None]
    for A in _normalised_quadratics(p):
        roots = [(pt, c.order_at(A, pt)) for pt in c.p1 if 0 < c.order_at(A, pt) <= 2]
        for B in _b_shapes(A, p):
            G = _form_sub_sq(c, [_e(b, p) for b in B])
            if all(c.order_at(G, pt) >= m for pt, m in roots):
                ok = True
                for pt, m in roots:
                    if pt in sing:
                        if m == 1 or c.order_at(G, pt) >= 3:
                            ok = False
                if ok:
                    out.append((A, B))
    return BruteJacobian(fo, p, out, sing)


def brute_jacobian(f, p, add_fallback: Callable | None = None, rng_seed: int = 0, exhaustive_limit: int = 50):
    """Enumerate, then check closure, identity, inverses, commutativity and associativity.

    Addition is the point-interpolation law; when a divisor meets the
    singular locus the caller-supplied ``add_fallback`` (on (A, B) pairs) is
    used instead.
    """
    bj = brute_elements(f, p)
    arith = PointArithmetic(f, p)
    sing = arith.singular
    fallbacks = 0
    key_of = {}
    pts_of = {None: Counter()}
    for el in bj.elements:
        if el is None:
            key_of[frozenset()] = el
        else:
            pts_of[el] = arith.from_mumford(*el)
            key_of[frozenset(pts_of[el].items())] = el

    def to_pts(el):
        return pts_of[el]

    def touches(el):
        if el is None:
            return False
        return any((x, z) in sing for (x, z, _y) in to_pts(el))

    def add(a, b):
        nonlocal fallbacks
        if add_fallback is not None and (touches(a) or touches(b)):
            fallbacks += 1
            return add_fallback(a, b)
        try:
            r = arith.add(to_pts(a), to_pts(b))
        except OutsidePointModel:
            if add_fallback is None:
                raise AxiomFailure("sum meets the singular locus and no fallback was given") from None
            fallbacks += 1
            return add_fallback(a, b)
        k = frozenset(r.items())
        if k not in key_of:
            raise AxiomFailure(f"sum of {a} and {b} is not an enumerated element")
        return key_of[k]

    els = bj.elements
    table = {}
    for a in els:
        for b in els:
            table[(a, b)] = add(a, b)
    for a in els:
        if table[(None, a)] != a:
            raise AxiomFailure(f"zero is not an identity for {a}")
        if not any(table[(a, b)] is None for b in els):
            raise AxiomFailure(f"{a} has no inverse")
        for b in els:
            if table[(a, b)] != table[(b, a)]:
                raise AxiomFailure(f"not commutative at {a}, {b}")
    if len(els) <= exhaustive_limit:
        triples = itertools.product(els, repeat=3)
    else:
        rng = random.Random(rng_seed)
        triples = ((rng.choice(els), rng.choice(els), rng.choice(els)) for _ in range(10_000))
    for a, b, cc in triples:
        if table[(table[(a, b)], cc)] != table[(a, table[(b, cc)])]:
            raise AxiomFailure(f"associativity fails at {(a, b, cc)}")
    bj.table = table
    bj.fallback_count = fallbacks
    return bj
