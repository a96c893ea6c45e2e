"""The sieve engine: choosing the modulus, lifting coset sets, GetSubgroup.

Everything happens inside finite quotients Gamma/N Gamma.  A subgroup L of
Gamma containing N Gamma is stored as the HNF basis of its preimage lattice
in Z^(r+s), where the last s coordinates carry the torsion relations.
"""

from __future__ import annotations

import heapq
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, prod
from typing import Callable, Iterable, Protocol, Sequence

from .algebra.abgroups import AbHom, FiniteAbGroup, quotient_by_subgroup
from .algebra.factored import FactoredInt
from .algebra.intlinalg import hnf, inverse_unimodular, kernel_lattice, lattice_intersection, smith_normal_form


class SetSizeExceeded(RuntimeError):
    pass


class NoBound(RuntimeError):
    pass


class Constraint(Protocol):
    """What the sieve needs from a local constraint."""

    p: int
    G: FiniteAbGroup
    phi: AbHom
    X: frozenset


@dataclass(frozen=True)
class FGGroup:
    """Z^rank x Z/t_1 x ... x Z/t_s, t_1 | ... | t_s."""

    rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        t = tuple(int(x) for x in self.torsion)
        object.__setattr__(self, "torsion", t)
        if self.rank < 0 or any(x < 2 for x in t):
            raise ValueError("bad FGGroup data")
        for a, b in zip(t, t[1:]):
            if b % a:
                raise ValueError("torsion orders must form a divisibility chain")

    @property
    def ngens(self) -> int:
        return self.rank + len(self.torsion)

    def moduli(self, n: int) -> tuple[int, ...]:
        """Coordinate moduli of Gamma/N Gamma."""
        return (n,) * self.rank + tuple(gcd(t, n) for t in self.torsion)

    def quotient_size(self, n: int) -> int:
        return prod(self.moduli(n))

    def lattice(self, n: int) -> tuple[tuple[int, ...], ...]:
        """HNF of the preimage of N Gamma in Z^(r+s)."""
        k = self.ngens
        rows = [[m * int(i == j) for j in range(k)] for i, m in enumerate(self.moduli(n))]
        return _canon(rows, k)


def _canon(rows, k) -> tuple[tuple[int, ...], ...]:
    if k == 0:
        return ()
    return tuple(tuple(r) for r in hnf(rows, k))


def _index(lat) -> int:
    # HNF of a full-rank lattice is triangular
    return prod(abs(r[i]) for i, r in enumerate(lat)) if lat else 1


# -- expected sizes -----------------------------------------------------------


class _RatioCache:
    """#X_{N,i} / #(G_i/N G_i), cached by (constraint index, gcd(N, exponent))."""

    def __init__(self, constraints: Sequence[Constraint]):
        self.constraints = list(constraints)
        self._cache: dict[tuple[int, int], Fraction] = {}

    def ratio(self, i: int, n: int) -> Fraction:
        c = self.constraints[i]
        key = (i, gcd(n, c.G.exponent))
        hit = self._cache.get(key)
        if hit is None:
            mods = tuple(gcd(d, key[1]) for d in c.G.invariants)
            img = {tuple(x % m for x, m in zip(v, mods)) for v in c.X}
            hit = Fraction(len(img), prod(mods))
            self._cache[key] = hit
        return hit


def expected_size_n(gamma: FGGroup, constraints: Sequence[Constraint], n: int, cache: _RatioCache | None = None) -> Fraction:
    """n(N Gamma) = #(Gamma/N Gamma) * prod_i #X_{N,i} / #(G_i / N G_i)."""
    cache = cache or _RatioCache(constraints)
    out = Fraction(gamma.quotient_size(n))
    for i in range(len(constraints)):
        out *= cache.ratio(i, n)
    return out


# -- FindQSequence ------------------------------------------------------------


@dataclass(frozen=True)
class QPlan:
    qs: tuple[int, ...]
    moduli: tuple[int, ...]  # N_0 = 1, N_1, ..., N_m
    predicted: tuple[Fraction, ...]

    @property
    def modulus(self) -> int:
        return self.moduli[-1]

    @property
    def max_n(self) -> Fraction:
        return max(self.predicted)


@dataclass(frozen=True)
class Failure:
    reason: str


def find_q_sequence(gamma: FGGroup, constraints: Sequence[Constraint], M, eps1, cache: _RatioCache | None = None):
    """Best-first search for an ordered factorization of a divisor of M.

    The frontier is ordered by (n, N, sequence).  Moduli already seen are not
    added again, since the path found first is at least as good.
    """
    mf = M if isinstance(M, FactoredInt) else FactoredInt.from_int(int(M))
    eps1 = Fraction(eps1)
    cache = cache or _RatioCache(constraints)
    primes = mf.primes()
    start = expected_size_n(gamma, constraints, 1, cache)
    frontier = [(start, 1, ())]
    seen = {1}
    n_of = {1: start}
    while frontier:
        n, big_n, seq = heapq.heappop(frontier)
        if n < eps1:
            mods = [1]
            for q in seq:
                mods.append(mods[-1] * q)
            return QPlan(seq, tuple(mods), tuple(n_of[m] for m in mods))
        for q in primes:
            nq = big_n * q
            if mf.value % nq or nq in seen:
                continue
            seen.add(nq)
            val = expected_size_n(gamma, constraints, nq, cache)
            n_of[nq] = val
            heapq.heappush(frontier, (val, nq, seq + (q,)))
    return Failure("no divisor of M reaches the target")


# -- quotients of Gamma -------------------------------------------------------


class _Quotient:
    """Gamma/L for a lattice L in Z^k, with projection and a section."""

    def __init__(self, lat, k: int):
        self.lat = lat
        self.k = k
        if k == 0:
            self.group = FiniteAbGroup(())
            self.proj = []
            self.lift_rows = []
            return
        diag, _, v = smith_normal_form([list(r) for r in lat])
        diag = diag + [0] * (k - len(diag))
        keep = [i for i, d in enumerate(diag) if d > 1]
        self.group = FiniteAbGroup(tuple(diag[i] for i in keep))
        self.proj = [tuple(v[j][i] % diag[i] for i in keep) for j in range(k)]
        vinv = inverse_unimodular(v)
        self.lift_rows = [vinv[i] for i in keep]

    def to_q(self, vec) -> tuple[int, ...]:
        g = self.group
        out = [0] * g.rank
        for c, row in zip(vec, self.proj):
            if c:
                for t, x in enumerate(row):
                    out[t] += c * x
        return g.reduce(out)

    def lift(self, q) -> list[int]:
        out = [0] * self.k
        for c, row in zip(q, self.lift_rows):
            if c:
                for t, x in enumerate(row):
                    out[t] += c * x
        return out


@dataclass
class _ConstraintAt:
    """phi_{L,i}: Gamma/L -> G_{L,i} and the image X_{L,i}."""

    group: FiniteAbGroup
    hom: AbHom
    X: frozenset


class SieveContext:
    """Constraint data at subgroups, computed once and cached."""

    def __init__(self, gamma: FGGroup, constraints: Sequence[Constraint]):
        self.gamma = gamma
        self.constraints = list(constraints)
        self._quot: dict = {}
        self._at: dict = {}
        self._ker: dict = {}

    def quotient(self, lat) -> _Quotient:
        q = self._quot.get(lat)
        if q is None:
            q = _Quotient(lat, self.gamma.ngens)
            self._quot[lat] = q
        return q

    def at(self, i: int, lat) -> _ConstraintAt:
        key = (i, lat)
        hit = self._at.get(key)
        if hit is None:
            c = self.constraints[i]
            img = [c.phi(r) for r in lat]
            gl, pi = quotient_by_subgroup(c.G, img)
            quo = self.quotient(lat)
            hom = AbHom(gl, tuple(pi(c.phi(quo.lift(e))) for e in _unit_vectors(quo.group.rank)))
            hit = _ConstraintAt(gl, hom, frozenset(pi(x) for x in c.X))
            self._at[key] = hit
        return hit

    def kernel(self, i: int, n: int):
        """Preimage lattice of N G_i under phi_i."""
        c = self.constraints[i]
        key = (i, gcd(n, c.G.exponent))
        hit = self._ker.get(key)
        if hit is None:
            mods = [gcd(d, key[1]) for d in c.G.invariants]
            k = self.gamma.ngens
            base = [list(r) for r in self.gamma.lattice(n)] if k else []
            if mods:
                ker = kernel_lattice(list(c.phi.images), mods)
                hit = _canon(ker + base, k)
            else:
                hit = _canon([[int(a == b) for b in range(k)] for a in range(k)], k)
            self._ker[key] = hit
        return hit


def _unit_vectors(n):
    return [tuple(int(i == j) for j in range(n)) for i in range(n)]


def _contains(big, small, k) -> bool:
    return _canon([list(r) for r in big] + [list(r) for r in small], k) == big


@dataclass
class LiftChain:
    q: int
    n_prev: int
    n_next: int
    lattices: list  # L_0, ..., L_t
    contributing: list  # I_1, ..., I_t
    measures: list = field(default_factory=list)

    @property
    def steps(self) -> int:
        return len(self.lattices) - 1


@dataclass
class SieveState:
    ctx: SieveContext
    n: int
    lat: tuple
    A: set

    @classmethod
    def initial(cls, ctx: SieveContext) -> SieveState:
        k = ctx.gamma.ngens
        lat = _canon([[int(i == j) for j in range(k)] for i in range(k)], k)
        a = {()}
        for i in range(len(ctx.constraints)):
            if not ctx.at(i, lat).X:
                a = set()
        return cls(ctx, 1, lat, a)


def prepare_lift(state: SieveState, q: int) -> LiftChain:
    ctx = state.ctx
    k = ctx.gamma.ngens
    nk = state.n * q
    vq = FactoredInt.from_int(nk).valuation(q)
    target = ctx.gamma.lattice(nk)
    relevant = [i for i, c in enumerate(ctx.constraints) if FactoredInt.from_int(c.G.exponent).valuation(q) >= vq]
    lats = [state.lat]
    contributing, measures = [], []
    cur = state.lat
    while relevant:
        best = None
        for i in relevant:
            cand = _canon(lattice_intersection(cur, ctx.kernel(i, nk), k), k)
            meas = Fraction(_index(cand), _index(cur))
            for i2 in relevant:
                old, new = ctx.at(i2, cur), ctx.at(i2, cand)
                meas *= Fraction(len(new.X), len(old.X)) if old.X else Fraction(0)
                meas /= Fraction(new.group.order, old.group.order)
            key = (meas, ctx.constraints[i].p, i)
            if best is None or key < best[0]:
                best = (key, cand)
        nxt = best[1]
        contributing.append([i for i in relevant if ctx.at(i, nxt).group.order != ctx.at(i, cur).group.order])
        measures.append(best[0][0])
        lats.append(nxt)
        cur = nxt
        relevant = [i for i in relevant if not _contains(ctx.kernel(i, nk), cur, k)]
    if cur != target:
        lats.append(target)
        contributing.append([])
    return LiftChain(q, state.n, nk, lats, contributing, measures)


def _subgroup_elements(group: FiniteAbGroup, gens) -> list[tuple[int, ...]]:
    elems = {group.zero()}
    frontier = [group.zero()]
    gens = [group.reduce(g) for g in gens]
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                s = group.add(e, g)
                if s not in elems:
                    elems.add(s)
                    nxt.append(s)
        frontier = nxt
    return sorted(elems)


def lift_step(state: SieveState, chain: LiftChain, max_set_size: int = 10**7, threads: int = 1) -> SieveState:
    ctx = state.ctx
    A = state.A
    for j in range(1, len(chain.lattices)):
        prev, new = chain.lattices[j - 1], chain.lattices[j]
        qp, qn = ctx.quotient(prev), ctx.quotient(new)
        offsets = _subgroup_elements(qn.group, [qn.to_q(r) for r in prev])
        tests = [ctx.at(i, new) for i in chain.contributing[j - 1]]
        g = qn.group

        def offspring(chunk, qp=qp, qn=qn, offsets=offsets, tests=tests, g=g):
            out = set()
            for a in chunk:
                base = qn.to_q(qp.lift(a))
                for l in offsets:
                    cand = g.add(base, l)
                    if all(t.hom(cand) in t.X for t in tests):
                        out.add(cand)
            return out

        items = sorted(A)
        if threads > 1 and len(items) > 256:
            size = -(-len(items) // threads)
            chunks = [items[s : s + size] for s in range(0, len(items), size)]
            with ThreadPoolExecutor(threads) as ex:
                parts = list(ex.map(offspring, chunks))
            A = set().union(*parts)
        else:
            A = offspring(items)
        if len(A) > max_set_size:
            raise SetSizeExceeded(f"{len(A)} cosets at modulus {chain.n_next}")
        if not A:
            break
    return SieveState(ctx, chain.n_next, chain.lattices[-1], A)


# -- driver -------------------------------------------------------------------

PROVEN_EMPTY = "PROVEN_EMPTY"
SURVIVORS = "SURVIVORS"
INCONCLUSIVE = "INCONCLUSIVE"


@dataclass
class StageRecord:
    stage: int
    q: int | None
    modulus: int
    size: int
    chain_shape: tuple[int, ...]


@dataclass
class SieveResult:
    kind: str
    modulus: int
    survivors: list  # coset vectors in generator coordinates mod Gamma.moduli(N)
    history: list
    reason: str = ""


def coset_vectors(state: SieveState) -> list[tuple[int, ...]]:
    """Elements of A(N Gamma) as generator-coordinate vectors."""
    gamma = state.ctx.gamma
    mods = gamma.moduli(state.n)
    quo = state.ctx.quotient(state.lat)
    return sorted(tuple(x % m for x, m in zip(quo.lift(a), mods)) for a in state.A)


def run_sieve(gamma: FGGroup, constraints: Sequence[Constraint], plan: QPlan | Sequence[int], max_set_size: int = 10**7, threads: int = 1) -> SieveResult:
    qs = plan.qs if isinstance(plan, QPlan) else tuple(plan)
    ctx = SieveContext(gamma, constraints)
    state = SieveState.initial(ctx)
    history = [StageRecord(0, None, 1, len(state.A), ())]
    if not state.A:
        return SieveResult(PROVEN_EMPTY, 1, [], history)
    for k, q in enumerate(qs, 1):
        chain = prepare_lift(state, q)
        try:
            state = lift_step(state, chain, max_set_size, threads)
        except SetSizeExceeded as exc:
            return SieveResult(INCONCLUSIVE, state.n, [], history, f"SetSizeExceeded: {exc}")
        shape = tuple(_index(b) // _index(a) for a, b in zip(chain.lattices[:-1], chain.lattices[1:]))
        history.append(StageRecord(k, q, state.n, len(state.A), shape))
        if not state.A:
            return SieveResult(PROVEN_EMPTY, state.n, [], history)
    return SieveResult(SURVIVORS, state.n, coset_vectors(state), history)


# -- GetSubgroup ---------------------------------------------------------------


def get_subgroup(ngens: int, test: Callable[[tuple[int, ...]], bool], max_multiple: int = 10**4) -> list[tuple[int, ...]]:
    """Generators of {a in Z^ngens : test(a)} for a finite-index subgroup."""
    gens = []
    reps = [(0,) * ngens]
    for idx in range(ngens):
        b = tuple(int(i == idx) for i in range(ngens))
        j = 1
        while True:
            bj = tuple(j * x for x in b)
            hit = next((a for a in reps if test(tuple(x + y for x, y in zip(bj, a)))), None)
            if hit is not None:
                break
            j += 1
            if j > max_multiple:
                raise NoBound(f"no multiple of generator {idx} up to {max_multiple} meets the subgroup")
        gens.append(tuple(x + y for x, y in zip(bj, hit)))
        reps = [tuple(a[t] + i * b[t] for t in range(ngens)) for a in reps for i in range(j)]
    return gens


def subgroup_hnf(gens: Iterable[Sequence[int]], ngens: int):
    return _canon([list(g) for g in gens], ngens)


__all__ = [
    "FGGroup",
    "Failure",
    "INCONCLUSIVE",
    "LiftChain",
    "NoBound",
    "PROVEN_EMPTY",
    "QPlan",
    "SURVIVORS",
    "SetSizeExceeded",
    "SieveContext",
    "SieveResult",
    "SieveState",
    "coset_vectors",
    "expected_size_n",
    "find_q_sequence",
    "get_subgroup",
    "lift_step",
    "prepare_lift",
    "run_sieve",
    "subgroup_hnf",
]
