"""Integers kept in factored form."""

from __future__ import annotations

from typing import Iterable, Mapping


def trial_factor(n: int, bound: int | None = None) -> tuple[dict[int, int], int]:
    """Factor |n| by trial division up to ``bound``; returns (factors, cofactor)."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n and (bound is None or d <= bound):
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1 and (bound is None or n <= bound or d * d > n):
        out[n] = out.get(n, 0) + 1
        n = 1
    return out, n


class FactoredInt:
    """A positive integer stored as {prime: exponent}.

    Arithmetic (product, gcd, lcm, divisibility, valuations) never expands the
    value; ``int()`` does.
    """

    __slots__ = ("_f", "_hash")

    def __init__(self, factors: Mapping[int, int] | None = None):
        f = {q: e for q, e in (factors or {}).items() if e > 0}
        self._f = dict(sorted(f.items()))
        self._hash = None

    @classmethod
    def from_int(cls, n: int) -> FactoredInt:
        if n <= 0:
            raise ValueError("FactoredInt holds positive integers")
        f, rest = trial_factor(n)
        assert rest == 1
        return cls(f)

    @property
    def factors(self) -> dict[int, int]:
        return dict(self._f)

    def primes(self) -> list[int]:
        return list(self._f)

    def valuation(self, q: int) -> int:
        return self._f.get(q, 0)

    @property
    def value(self) -> int:
        out = 1
        for q, e in self._f.items():
            out *= q ** e
        return out

    def __int__(self):
        return self.value

    def __mul__(self, other) -> FactoredInt:
        o = _coerce(other)
        f = dict(self._f)
        for q, e in o._f.items():
            f[q] = f.get(q, 0) + e
        return FactoredInt(f)

    __rmul__ = __mul__

    def gcd(self, other) -> FactoredInt:
        o = _coerce(other)
        return FactoredInt({q: min(e, o._f[q]) for q, e in self._f.items() if q in o._f})

    def lcm(self, other) -> FactoredInt:
        o = _coerce(other)
        f = dict(self._f)
        for q, e in o._f.items():
            f[q] = max(f.get(q, 0), e)
        return FactoredInt(f)

    def divides(self, other) -> bool:
        o = _coerce(other)
        return all(o._f.get(q, 0) >= e for q, e in self._f.items())

    def __floordiv__(self, other) -> FactoredInt:
        o = _coerce(other)
        if not o.divides(self):
            raise ValueError("inexact division")
        f = dict(self._f)
        for q, e in o._f.items():
            f[q] -= e
        return FactoredInt(f)

    def is_smooth(self, bound: int) -> bool:
        return all(q <= bound for q in self._f)

    def divisors(self) -> Iterable[FactoredInt]:
        items = list(self._f.items())

        def rec(i, acc):
            if i == len(items):
                yield FactoredInt(acc)
                return
            q, e = items[i]
            for k in range(e + 1):
                nxt = dict(acc)
                if k:
                    nxt[q] = k
                yield from rec(i + 1, nxt)

        return rec(0, {})

    def __eq__(self, other):
        if isinstance(other, FactoredInt):
            return self._f == other._f
        if isinstance(other, int):
            return other > 0 and self.value == other
        return NotImplemented

    def __lt__(self, other):
        return self.value < int(other)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._f.items()))
        return self._hash

    def __repr__(self):
        if not self._f:
            return "FactoredInt(1)"
        return "FactoredInt(" + " * ".join(f"{q}^{e}" if e > 1 else str(q) for q, e in self._f.items()) + ")"


def _coerce(x) -> FactoredInt:
    if isinstance(x, FactoredInt):
        return x
    return FactoredInt.from_int(int(x))
