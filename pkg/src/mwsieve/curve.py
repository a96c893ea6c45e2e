"""Genus-2 models y^2 = F(X, Z), their reduction type at a prime, and point counts."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra.fields import legendre, smallest_nonresidue, sqrt_mod
from .algebra.forms import factor_profile, form_is_square, form_reduce
from .algebra.intlinalg import determinant


class ModelError(ValueError):
    pass


class SingularModel(ModelError):
    pass


class DegreeTooLow(ModelError):
    pass


def _sylvester(f: Sequence[int], g: Sequence[int]) -> list[list[int]]:
    # f, g given highest coefficient first
    m, n = len(f) - 1, len(g) - 1
    rows = []
    for i in range(n):
        rows.append([0] * i + list(f) + [0] * (n - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(g) + [0] * (m - 1 - i))
    return rows


def form_discriminant(coeffs: Sequence[int]) -> int:
    """Discriminant of the binary sextic sum c_i X^i Z^(6-i).

    A vanishing top coefficient (root at infinity) is accounted for by the
    factor c_5^2, which is the binary-form convention.
    """
    c = [int(x) for x in coeffs]
    d = len(c) - 1
    while d > 0 and c[d] == 0:
        d -= 1
    top = c[: d + 1][::-1]
    deriv = [top[i] * (d - i) for i in range(d)]
    n = d
    if n < 1:
        return 0
    res = determinant(_sylvester(top, deriv))
    disc = (-1) ** (n * (n - 1) // 2) * res // top[0]
    drop = len(c) - 1 - d
    if drop == 0:
        return disc
    if drop == 1:
        return top[0] ** 2 * disc
    return 0  # double root at infinity


@dataclass(frozen=True)
class CurveModel:
    """y^2 = F(X, Z) with F = sum f_i X^i Z^(6-i); f6 = 0 encodes a quintic model."""

    f: tuple[int, ...]
    disc: int

    @property
    def degree(self) -> int:
        return max(i for i, c in enumerate(self.f) if c)

    def reduce(self, p: int) -> tuple[int, ...]:
        return form_reduce(self.f, p)

    def __repr__(self):
        return f"CurveModel(f={list(self.f)})"


def validate_model(coeffs: Sequence[int]) -> CurveModel:
    f = tuple(int(c) for c in coeffs)
    if len(f) != 7:
        raise ModelError("need 7 coefficients f0..f6")
    if not any(f):
        raise ModelError("F is the zero form")
    deg = max(i for i, c in enumerate(f) if c)
    if deg < 5:
        raise DegreeTooLow(f"degree {deg} < 5 does not give genus 2")
    disc = form_discriminant(f)
    if disc == 0:
        raise SingularModel("F has a repeated factor")
    return CurveModel(f, disc)


# -- reduction types ----------------------------------------------------------

GOOD = "Good"
BAD_USABLE = "BadUsable"
UNUSABLE = "Unusable"


@dataclass(frozen=True)
class ReductionClass:
    kind: str
    reason: str | None = None
    profile: tuple = field(default=())  # (unit, factors) from factor_profile
    singular_points: tuple = field(default=())  # multiple roots (x, z) in P^1(F_p)

    @property
    def usable(self) -> bool:
        return self.kind in (GOOD, BAD_USABLE)


def _valuation(n: int, p: int) -> int:
    if n == 0:
        return 10**9
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_regular_at(f: Sequence[int], root: tuple[int, int], p: int) -> bool:
    """v_p(F(lift of root)) == 1; the value mod p^2 does not depend on the lift."""
    x, z = root
    if z == 0:
        # swap X and Z, root moves to 0
        rev = list(f)[::-1]
        val = rev[0]
    else:
        val = sum(int(c) * x**i for i, c in enumerate(f))
    return _valuation(val, p) == 1


def classify_reduction(curve: CurveModel, p: int) -> ReductionClass:
    if p == 2:
        return ReductionClass(UNUSABLE, "EvenPrime")
    fbar = curve.reduce(p)
    if not any(fbar):
        return ReductionClass(UNUSABLE, "ZeroReduction")
    unit, facs = factor_profile(fbar, p)
    profile = (unit, tuple(facs))
    multiple = [(g, m) for g, m in facs if m > 1]
    if not multiple:
        return ReductionClass(GOOD, profile=profile)
    if any(len(g) > 2 for g, _ in multiple):
        return ReductionClass(UNUSABLE, "NonRationalSingularity", profile)
    points = []
    for g, _ in multiple:
        # g = (g0, g1) means g1 X + g0 Z; normalised so the root is (-g0 : 1) or (1 : 0)
        pt = (1, 0) if g == (1, 0) else ((-g[0]) % p, 1)
        if not is_regular_at(curve.f, pt, p):
            return ReductionClass(UNUSABLE, "NotRegular", profile, tuple(points))
        points.append(pt)
    if form_is_square(fbar, p):
        return ReductionClass(UNUSABLE, "Square", profile, tuple(points))
    return ReductionClass(BAD_USABLE, profile=profile, singular_points=tuple(points))


# -- points ------------------------------------------------------------------


@dataclass(frozen=True)
class CurvePoint:
    """(x : y : z) on Y^2 = F(X, Z) in weights (1, 3, 1); (x : z) normalised."""

    x: int
    y: int
    z: int

    def involute(self, p: int) -> CurvePoint:
        return CurvePoint(self.x, (-self.y) % p, self.z)


def _chi_array(vals: np.ndarray, p: int) -> np.ndarray:
    """Quadratic character of an int64 array of residues."""
    squares = np.zeros(p, dtype=np.int64)
    squares[(np.arange(1, p, dtype=np.int64) ** 2) % p] = 1
    chi = np.where(squares == 1, 1, -1)
    chi[0] = 0
    return chi[vals % p]


def _horner(f: Sequence[int], xs: np.ndarray, p: int) -> np.ndarray:
    out = np.zeros_like(xs)
    for c in reversed(f):
        out = (out * xs + c) % p
    return out


def count_points(curve: CurveModel | Sequence[int], p: int, ext_degree: int = 1) -> int:
    f = curve.reduce(p) if isinstance(curve, CurveModel) else form_reduce(curve, p)
    if ext_degree == 1:
        xs = np.arange(p, dtype=np.int64)
        total = int(np.sum(1 + _chi_array(_horner(f, xs, p), p)))
        return total + 1 + legendre(f[6], p)
    if ext_degree == 2:
        u, v = fp2_grid(p)
        fu, fv = fp2_horner(f, u, v, p)
        norm = (fu * fu - smallest_nonresidue(p) * fv * fv) % p
        chi = _chi_array(norm, p)
        # chi over F_{p^2} is chi_p of the norm; F(alpha) = 0 iff norm = 0
        total = int(np.sum(1 + chi))
        inf = 1 if f[6] % p == 0 else 2  # every element of F_p is a square in F_{p^2}
        return total + inf
    raise ValueError("ext_degree must be 1 or 2")


def fp2_grid(p: int) -> tuple[np.ndarray, np.ndarray]:
    u, v = np.meshgrid(np.arange(p, dtype=np.int64), np.arange(p, dtype=np.int64), indexing="ij")
    return u.ravel(), v.ravel()


def fp2_horner(f: Sequence[int], u: np.ndarray, v: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate a polynomial (low to high) at u + v*alpha, alpha^2 = s."""
    s = smallest_nonresidue(p)
    ru = np.zeros_like(u)
    rv = np.zeros_like(v)
    for c in reversed(list(f)):
        ru, rv = (ru * u + s * (rv * v % p) + c) % p, (ru * v + rv * u) % p
    return ru, rv


def enumerate_points(curve, p: int) -> list[CurvePoint]:
    f = curve.reduce(p) if isinstance(curve, CurveModel) else form_reduce(tuple(curve), p)
    pts = []
    for x in range(p):
        val = sum(c * pow(x, i, p) for i, c in enumerate(f)) % p
        r = sqrt_mod(val, p)
        if r is None:
            continue
        pts.append(CurvePoint(x, r, 1))
        if r:
            pts.append(CurvePoint(x, p - r, 1))
    r = sqrt_mod(f[6], p)
    if r is not None:
        pts.append(CurvePoint(1, r, 0))
        if r:
            pts.append(CurvePoint(1, p - r, 0))
    return pts


def weil_ok(n1: int, p: int) -> bool:
    return (n1 - p - 1) ** 2 <= 16 * p


__all__ = [
    "BAD_USABLE",
    "GOOD",
    "UNUSABLE",
    "CurveModel",
    "CurvePoint",
    "DegreeTooLow",
    "ModelError",
    "ReductionClass",
    "SingularModel",
    "classify_reduction",
    "count_points",
    "enumerate_points",
    "form_discriminant",
    "validate_model",
]
