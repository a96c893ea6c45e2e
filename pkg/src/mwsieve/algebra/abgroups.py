"""Finite abelian groups in invariant-factor form and homomorphisms between them."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .factored import FactoredInt
from .intlinalg import kernel_lattice, smith_normal_form, solve_mod_group, vecmat


@dataclass(frozen=True)
class FiniteAbGroup:
    """Z/d_1 x ... x Z/d_k with d_1 | d_2 | ... and every d_i > 1."""

    invariants: tuple[int, ...] = ()

    def __post_init__(self):
        inv = tuple(int(d) for d in self.invariants)
        object.__setattr__(self, "invariants", inv)
        for d in inv:
            if d <= 1:
                raise ValueError(f"invariant factor {d} must exceed 1")
        for a, b in zip(inv, inv[1:]):
            if b % a:
                raise ValueError(f"{a} does not divide {b}")

    @property
    def rank(self) -> int:
        return len(self.invariants)

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariants:
            out *= d
        return out

    @property
    def exponent(self) -> int:
        return self.invariants[-1] if self.invariants else 1

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def reduce(self, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(int(x) % d for x, d in zip(v, self.invariants))

    def add(self, a, b) -> tuple[int, ...]:
        return tuple((x + y) % d for x, y, d in zip(a, b, self.invariants))

    def neg(self, a) -> tuple[int, ...]:
        return tuple(-x % d for x, d in zip(a, self.invariants))

    def scale(self, k: int, a) -> tuple[int, ...]:
        return tuple(k * x % d for x, d in zip(a, self.invariants))

    def elements(self) -> Iterable[tuple[int, ...]]:
        return itertools.product(*(range(d) for d in self.invariants))

    def element_order(self, a) -> int:
        from math import gcd

        out = 1
        for x, d in zip(a, self.invariants):
            o = d // gcd(x, d)
            out = out * o // gcd(out, o)
        return out

    def __repr__(self):
        if not self.invariants:
            return "FiniteAbGroup(trivial)"
        return "FiniteAbGroup(" + " x ".join(f"Z/{d}" for d in self.invariants) + ")"


@dataclass(frozen=True)
class AbHom:
    """Homomorphism from a group on m generators to ``target``; images[i] is the image of e_i."""

    target: FiniteAbGroup
    images: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.target.reduce(v) for v in self.images))

    @property
    def source_count(self) -> int:
        return len(self.images)

    def __call__(self, coeffs: Sequence[int]) -> tuple[int, ...]:
        return self.target.reduce(vecmat(coeffs, self.images, self.target.rank))

    def kernel(self) -> list[list[int]]:
        """HNF basis of the kernel lattice in Z^m."""
        return kernel_lattice(self.images, self.target.invariants)

    def preimage(self, y: Sequence[int]) -> list[int] | None:
        return solve_mod_group(self.images, self.target.invariants, y)


def group_from_relations(relations: Sequence[Sequence[int]], ngens: int) -> tuple[FiniteAbGroup, list[tuple[int, ...]]]:
    """Present Z^ngens / rowspan(relations) in invariant form.

    Returns (Q, proj) where proj[j] is the image of e_j in Q. The relation
    lattice must have full rank.
    """
    if ngens == 0:
        return FiniteAbGroup(()), []
    rel = [list(r) for r in relations]
    diag, _, v = smith_normal_form(rel)
    diag = diag + [0] * (ngens - len(diag))
    if any(d == 0 for d in diag):
        raise ValueError("relation lattice is not of full rank")
    keep = [i for i, d in enumerate(diag) if d > 1]
    inv = tuple(diag[i] for i in keep)
    proj = [tuple(v[j][i] % diag[i] for i in keep) for j in range(ngens)]
    return FiniteAbGroup(inv), proj


def quotient_by_subgroup(g: FiniteAbGroup, gens: Sequence[Sequence[int]]) -> tuple[FiniteAbGroup, AbHom]:
    """G / <gens> together with the projection (images of G's standard generators)."""
    k = g.rank
    rel = [[d * int(i == j) for j in range(k)] for i, d in enumerate(g.invariants)]
    rel += [list(g.reduce(x)) for x in gens]
    q, proj = group_from_relations(rel, k)
    return q, AbHom(q, tuple(proj))


@dataclass(frozen=True)
class SubgroupImage:
    """The image H = phi(Z^m) inside a finite group, as an abstract group.

    ``phi`` maps Z^m onto ``group``; ``to_ambient`` embeds H back; ``coords``
    converts an ambient element into H-coordinates (None if outside H).
    """

    group: FiniteAbGroup
    phi: AbHom
    ambient_map: AbHom
    _v: tuple[tuple[int, ...], ...]
    _diag: tuple[int, ...]
    _keep: tuple[int, ...]

    def coords(self, y: Sequence[int]) -> tuple[int, ...] | None:
        x = self.ambient_map.preimage(y)
        if x is None:
            return None
        return tuple(sum(x[j] * self._v[j][i] for j in range(len(x))) % self._diag[i] for i in self._keep)


def image_subgroup(hom: AbHom) -> SubgroupImage:
    """Abstract presentation of hom(Z^m) with hom rewritten as a surjection onto it."""
    m = hom.source_count
    ker = hom.kernel()
    if m == 0:
        return SubgroupImage(FiniteAbGroup(()), AbHom(FiniteAbGroup(()), ()), hom, (), (), ())
    diag, _, v = smith_normal_form(ker)
    diag = diag + [0] * (m - len(diag))
    keep = tuple(i for i, d in enumerate(diag) if d > 1)
    grp = FiniteAbGroup(tuple(diag[i] for i in keep))
    phi = AbHom(grp, tuple(tuple(v[j][i] % diag[i] for i in keep) for j in range(m)))
    return SubgroupImage(grp, phi, hom, tuple(tuple(r) for r in v), tuple(diag), keep)


def merge_invariant_factors(groups: Iterable[FiniteAbGroup]) -> tuple[FactoredInt, ...]:
    """Invariant factors of the direct product, assembled prime by prime."""
    per_prime: dict[int, list[int]] = {}
    for g in groups:
        for d in g.invariants:
            for q, e in FactoredInt.from_int(d).factors.items():
                per_prime.setdefault(q, []).append(e)
    if not per_prime:
        return ()
    length = max(len(v) for v in per_prime.values())
    out = [dict() for _ in range(length)]
    for q, exps in per_prime.items():
        exps = sorted(exps)
        pad = [0] * (length - len(exps)) + exps
        for i, e in enumerate(pad):
            if e:
                out[i][q] = e
    return tuple(FactoredInt(f) for f in out)
