"""The map iota: C -> J, either P -> [P - P0] or P -> [P - D3 + W]."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence, Union

from ..algebra.forms import form_eval, form_mul, form_sub, form_divexact
from ..curve import CurvePoint
from .mumford import ZERO, JacobianFp, MumfordElement
from .rational import primitive_integral, qform_divexact, qform_mul


class BadEmbeddingReduction(ArithmeticError):
    pass


@dataclass(frozen=True)
class BasePoint:
    X: Fraction
    Y: Fraction
    Z: Fraction


@dataclass(frozen=True)
class Divisor3:
    A3: tuple
    B3: tuple


EmbeddingData = Union[BasePoint, Divisor3]


def check_embedding(f: Sequence[int], emb: EmbeddingData) -> None:
    """Raise ValueError unless the base point lies on C or A3 | F - B3^2."""
    if isinstance(emb, BasePoint):
        X, Y, Z = emb.X, emb.Y, emb.Z
        if X == 0 and Z == 0:
            raise ValueError("base point has X = Z = 0")
        val = sum(Fraction(c) * X**i * Z ** (6 - i) for i, c in enumerate(f))
        if Y * Y != val:
            raise ValueError("base point is not on the curve")
        return
    A3 = [Fraction(x) for x in emb.A3]
    B3 = [Fraction(x) for x in emb.B3]
    if len(A3) != 4 or len(B3) != 4 or not any(A3):
        raise ValueError("divisor needs a nonzero cubic A3 and a cubic B3")
    rest = [Fraction(c) - b for c, b in zip(f, qform_mul(B3, B3))]
    if qform_divexact(rest, A3) is None:
        raise ValueError("A3 does not divide F - B3^2")


def reduce_base_point(emb: BasePoint, p: int) -> CurvePoint:
    # scale to coprime integers X, Z; then Y is integral (weights 1, 3, 1)
    X, Y, Z = emb.X, emb.Y, emb.Z
    den = X.denominator * Z.denominator // gcd(X.denominator, Z.denominator)
    xi, zi = int(X * den), int(Z * den)
    g = gcd(xi, zi)
    xi, zi = xi // g, zi // g
    lam = Fraction(den, g)
    yi = Y * lam**3
    if yi.denominator != 1:
        raise BadEmbeddingReduction("base point does not scale to an integral point")
    yi = int(yi)
    return _normalise_point(xi, yi, zi, p)


def _normalise_point(x, y, z, p) -> CurvePoint:
    x, y, z = x % p, y % p, z % p
    if z:
        inv = pow(z, -1, p)
        return CurvePoint(x * inv % p, y * pow(inv, 3, p) % p, 1)
    if x == 0:
        raise BadEmbeddingReduction("point reduces to X = Z = 0")
    inv = pow(x, -1, p)
    return CurvePoint(1, y * pow(inv, 3, p) % p, 0)


def _lin(pt: CurvePoint, p: int) -> tuple:
    """Linear form vanishing at (x : z)."""
    return (1, 0) if pt.z == 0 else ((-pt.x) % p, 1)


def is_singular_point(J: JacobianFp, pt: CurvePoint) -> bool:
    return pt.y == 0 and (pt.x, pt.z) in J.singular_points


def pair_class(J: JacobianFp, P: CurvePoint, R: CurvePoint) -> MumfordElement:
    """The class [P + iota(R) - W] for smooth points P, R of C(F_p)."""
    p = J.p
    Rn = R.involute(p)
    if (P.x, P.z) == (R.x, R.z):
        if P.y == R.y:
            return ZERO
        # P = involute(R): the pair is 2P
        L = _lin(P, p)
        A = form_mul(L, L, p)
        want = [(P, P.y)]
    else:
        A = form_mul(_lin(P, p), _lin(Rn, p), p)
        want = [(P, P.y), (Rn, Rn.y)]
    for el in J.b_solutions(A):
        if all(form_eval(el.B, q.x, q.z, p) == y for q, y in want):
            return el
    raise ArithmeticError("no Mumford pair through the given points")


class Embedder:
    """iota over F_p for one prime, prepared once."""

    def __init__(self, J: JacobianFp, emb: EmbeddingData, points: Sequence[CurvePoint]):
        self.J = J
        p = J.p
        self.points = [pt for pt in points if not is_singular_point(J, pt)]
        if isinstance(emb, BasePoint):
            self.base = reduce_base_point(emb, p)
            if is_singular_point(J, self.base):
                raise BadEmbeddingReduction("base point reduces to a singular point")
            self.offset = ZERO
            return
        A3, _ = primitive_integral(emb.A3)
        B3 = [Fraction(x) for x in emb.B3]
        # make B3 integral by adding c*A3
        k = next(i for i, a in enumerate(A3) if a % p)
        c = -B3[k] / A3[k]
        B3 = [b + c * a for a, b in zip(A3, B3)]
        if any(b.denominator % p == 0 for b in B3):
            raise BadEmbeddingReduction("B3 is not p-integral modulo A3")
        a3 = tuple(a % p for a in A3)
        b3 = tuple(b.numerator * pow(b.denominator, -1, p) % p for b in B3)
        for g in J.multiple_factors:
            if _shares_factor(a3, g, p):
                raise BadEmbeddingReduction("divisor meets the singular locus")
        # pick R in C(F_p), preferably off the support of D3
        R = next((pt for pt in self.points if form_eval(a3, pt.x, pt.z, p)), None)
        if R is None:
            if not self.points:
                self.base = None
                self.offset = ZERO
                return
            R = self.points[0]
            if form_eval(b3, R.x, R.z, p) != R.y:
                R = R.involute(p)
            # D3 = R + D2, so [R - D3 + W] = -[D2 - W]
            d2 = form_divexact(a3, _lin(R, p), p)
            el = J._canon(d2, b3)
            if not J.is_valid(el) or not J.is_smooth(el):
                raise BadEmbeddingReduction("residual divisor of D3 is not a valid pair")
            self.base = R
            self.offset = J.negate(el)
            return
        self.base = R
        self.offset = self._iota_divisor(R, a3, b3)

    def _iota_divisor(self, R, a3, b3) -> MumfordElement:
        J, p = self.J, self.J.p
        # B4 = -B3 + c*A3 with B4(R) = y_R
        c = (R.y + form_eval(b3, R.x, R.z, p)) * pow(form_eval(a3, R.x, R.z, p), -1, p) % p
        B4 = tuple((-b + c * a) % p for a, b in zip(a3, b3))
        A4 = form_mul(_lin(R, p), a3, p)
        rest = form_sub(J.f, form_mul(B4, B4, p), p)
        C = form_divexact(rest, A4, p)
        if C is None or not any(C):
            raise BadEmbeddingReduction("degree-4 reduction failed")
        el = J._canon(C, tuple((-b) % p for b in B4))
        if not J.is_smooth(el):
            raise BadEmbeddingReduction("embedded divisor class is not smooth")
        return el

    def embed(self, P: CurvePoint) -> MumfordElement:
        if self.base is None:
            raise BadEmbeddingReduction("no base point available")
        return self.J.add(pair_class(self.J, P, self.base), self.offset)


def _shares_factor(a, g, p) -> bool:
    from ..algebra.forms import form_gcd

    return len(form_gcd(a, g, p)) > 1
