"""Prime fields F_p and their quadratic extensions.

Internally the rest of the package works on plain integers reduced mod p;
the element classes here are the user-facing wrappers and the home of the
square-root machinery.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def sqrt_mod(a: int, p: int) -> int | None:
    """Square root of ``a`` mod the odd prime ``p`` (the smaller one), or None."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
    else:
        # Tonelli-Shanks
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = smallest_nonresidue(p)
        m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, r = t * c % p, r * b % p
    return min(r, p - r)


@lru_cache(maxsize=None)
def smallest_nonresidue(p: int) -> int:
    for s in range(2, p):
        if pow(s, (p - 1) // 2, p) == p - 1:
            return s
    raise ValueError(f"no quadratic non-residue mod {p}")


@dataclass(frozen=True)
class FpElem:
    residue: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "residue", self.residue % self.p)

    def _coerce(self, other):
        if isinstance(other, FpElem):
            if other.p != self.p:
                raise ValueError("mixed moduli")
            return other.residue
        return other % self.p

    def __add__(self, other):
        return FpElem(self.residue + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FpElem(self.residue - self._coerce(other), self.p)

    def __rsub__(self, other):
        return FpElem(self._coerce(other) - self.residue, self.p)

    def __neg__(self):
        return FpElem(-self.residue, self.p)

    def __mul__(self, other):
        return FpElem(self.residue * self._coerce(other), self.p)

    __rmul__ = __mul__

    def inverse(self) -> FpElem:
        if self.residue == 0:
            raise ZeroDivisionError("0 has no inverse mod p")
        return FpElem(pow(self.residue, -1, self.p), self.p)

    def __truediv__(self, other):
        return self * FpElem(self._coerce(other), self.p).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FpElem(pow(self.residue, e, self.p), self.p)

    def __int__(self):
        return self.residue

    def __repr__(self):
        return f"{self.residue} (mod {self.p})"


# Tags returned by legendre_and_sqrt.
ZERO = "Zero"
NON_RESIDUE = "NonResidue"
ROOT = "Root"


def legendre_and_sqrt(a: FpElem) -> tuple[str, FpElem | None]:
    """Classify ``a`` as (ZERO, 0), (NON_RESIDUE, None) or (ROOT, r) with r*r == a.

    The root returned is the smaller of the two representatives.
    """
    if a.residue == 0:
        return ZERO, FpElem(0, a.p)
    r = sqrt_mod(a.residue, a.p)
    if r is None:
        return NON_RESIDUE, None
    return ROOT, FpElem(r, a.p)


@dataclass(frozen=True)
class Fp2Elem:
    """u + v*alpha in F_p[alpha]/(alpha^2 - s), s the smallest non-residue mod p."""

    u: int
    v: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "u", self.u % self.p)
        object.__setattr__(self, "v", self.v % self.p)

    @property
    def s(self) -> int:
        return smallest_nonresidue(self.p)

    @classmethod
    def from_int(cls, a: int, p: int) -> Fp2Elem:
        return cls(a, 0, p)

    def _coerce(self, other) -> Fp2Elem:
        if isinstance(other, Fp2Elem):
            return other
        if isinstance(other, FpElem):
            return Fp2Elem(other.residue, 0, self.p)
        return Fp2Elem(other, 0, self.p)

    def __add__(self, other):
        o = self._coerce(other)
        return Fp2Elem(self.u + o.u, self.v + o.v, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return Fp2Elem(self.u - o.u, self.v - o.v, self.p)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return Fp2Elem(-self.u, -self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        p = self.p
        return Fp2Elem(self.u * o.u + self.s * self.v * o.v, self.u * o.v + self.v * o.u, p)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.u == 0 and self.v == 0

    def in_base_field(self) -> bool:
        return self.v == 0

    def norm(self) -> int:
        return (self.u * self.u - self.s * self.v * self.v) % self.p

    def frobenius(self) -> Fp2Elem:
        return Fp2Elem(self.u, -self.v, self.p)

    def inverse(self) -> Fp2Elem:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("0 has no inverse")
        ni = pow(n, -1, self.p)
        return Fp2Elem(self.u * ni, -self.v * ni, self.p)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = Fp2Elem(1, 0, self.p)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_square(self) -> bool:
        # x is a square in F_{p^2} iff its norm is a square in F_p
        return self.is_zero() or legendre(self.norm(), self.p) == 1

    def sqrt(self) -> Fp2Elem | None:
        """A square root, or None for non-squares (Tonelli-Shanks in F_{p^2}*)."""
        p = self.p
        if self.is_zero():
            return self
        if not self.is_square():
            return None
        if self.v == 0:
            r = sqrt_mod(self.u, p)
            if r is not None:
                return Fp2Elem(r, 0, p)
            # u is a non-residue in F_p: u = s * k^2 so sqrt(u) = k * alpha
            k = sqrt_mod(self.u * pow(self.s, -1, p), p)
            return Fp2Elem(0, k, p)
        order = p * p - 1
        q, e = order, 0
        while q % 2 == 0:
            q //= 2
            e += 1
        z = _fp2_nonsquare(p)
        m, c, t, r = e, z ** q, self ** q, self ** ((q + 1) // 2)
        one = Fp2Elem(1, 0, p)
        while t != one:
            i, t2 = 0, t
            while t2 != one:
                t2 = t2 * t2
                i += 1
            b = c ** (1 << (m - i - 1))
            m, c = i, b * b
            t, r = t * c, r * b
        return r

    def __repr__(self):
        return f"({self.u} + {self.v}*a mod {self.p})"


@lru_cache(maxsize=None)
def _fp2_nonsquare(p: int) -> Fp2Elem:
    for v in range(1, p):
        for u in range(p):
            x = Fp2Elem(u, v, p)
            if not x.is_square():
                return x
    raise ValueError("no non-square found")
