"""Cross-checks of the main code paths against the brute-force oracles."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from math import gcd

from ..algebra.abgroups import AbHom, FiniteAbGroup, image_subgroup
from ..jacobian.mumford import ZERO, JacobianFp, MumfordElement
from .brute import brute_jacobian
from .enumerate import brute_A

_INVARIANTS = [(2,), (4,), (3,), (2, 6), (6,), (5,), (2, 2), (12,), (3, 9), (8,), (2, 10)]
_TORSION = [(), (2,), (3,), (2, 4), (2, 6)]
_MODULI = [6, 8, 9, 12, 24, 30, 36, 60, 72, 120, 360, 720]


@dataclass(frozen=True)
class ToyConstraint:
    p: int
    G: FiniteAbGroup
    phi: AbHom
    X: frozenset


def random_instance(rng: random.Random, max_rank: int = 3, max_constraints: int = 5):
    """Random Gamma and surjective constraints with random X (possibly empty)."""
    from ..sieve import FGGroup

    r = rng.randint(0, max_rank)
    tors = rng.choice(_TORSION)
    if r + len(tors) == 0:
        r = 1
    gamma = FGGroup(r, tors)
    cons = []
    for ci in range(rng.randint(0, max_constraints)):
        inv = rng.choice(_INVARIANTS)
        G = FiniteAbGroup(inv)
        imgs = []
        for j in range(gamma.ngens):
            v = [rng.randrange(d) for d in inv]
            if j >= r:
                t = tors[j - r]
                v = [x * (d // gcd(d, t)) % d for x, d in zip(v, inv)]
            imgs.append(tuple(v))
        els = list(G.elements())
        picked = rng.sample(els, rng.randint(0, max(1, len(els) // 2)))
        im = image_subgroup(AbHom(G, tuple(imgs)))
        xs = frozenset(c for c in (im.coords(x) for x in picked) if c is not None)
        cons.append(ToyConstraint(3 + 2 * ci, im.group, im.phi, xs))
    return gamma, cons


def _factor_small(n: int) -> list[int]:
    out, q = [], 2
    while n > 1:
        while n % q == 0:
            out.append(q)
            n //= q
        q += 1
    return out


def sieve_crosscheck(instances: int = 100, seed: int = 0, limit: int = 200_000) -> list[dict]:
    """run_sieve against brute_A on random instances; one record per instance."""
    from ..sieve import SURVIVORS, run_sieve

    rng = random.Random(seed)
    out = []
    while len(out) < instances:
        gamma, cons = random_instance(rng)
        N = rng.choice(_MODULI)
        if gamma.quotient_size(N) > limit:
            continue
        qs = _factor_small(N)
        rng.shuffle(qs)
        res = run_sieve(gamma, cons, qs)
        got = set(res.survivors) if res.kind == SURVIVORS else set()
        want = brute_A(gamma, cons, N, limit=limit)
        out.append({"rank": gamma.rank, "torsion": list(gamma.torsion), "constraints": len(cons), "N": N, "qs": qs, "sieve": len(got), "brute": len(want), "equal": got == want})
    return out


def _as_pair(el: MumfordElement):
    return None if el.is_zero else (tuple(el.A), tuple(el.B))


def jacobian_crosscheck(f, p: int, expected_order: int | None = None) -> dict:
    """Compare JacobianFp.add with the brute addition table over all pairs.

    Sums whose construction passes through a singular point are delegated
    to JacobianFp.add by the oracle; their number is reported as ``fallback``.
    """
    J = JacobianFp(f, p)

    def main_add(a, b):
        A = ZERO if a is None else MumfordElement(*a)
        B = ZERO if b is None else MumfordElement(*b)
        return _as_pair(J.add(A, B))

    t0 = time.perf_counter()
    bj = brute_jacobian(f, p, add_fallback=main_add if J.singular_points else None)
    mism = sum(1 for (a, b), r in bj.table.items() if main_add(a, b) != r)
    rec = {
        "f": list(f),
        "p": p,
        "order": bj.order,
        "pairs": len(bj.table),
        "mismatches": mism,
        "fallback": bj.fallback_count,
        "seconds": round(time.perf_counter() - t0, 3),
    }
    if expected_order is not None:
        rec["expected_order"] = expected_order
    return rec
