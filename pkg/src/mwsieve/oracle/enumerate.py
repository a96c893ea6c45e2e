"""Direct enumeration of A(N Gamma) and the random model for a single prime."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from math import gcd, prod

import numpy as np


class TooLarge(ValueError):
    pass


def brute_A(gamma, constraints, n: int, limit: int = 10**6) -> set[tuple[int, ...]]:
    """All gamma in Gamma/N Gamma (generator coordinates) passing every constraint."""
    mods = (n,) * gamma.rank + tuple(gcd(t, n) for t in gamma.torsion)
    if prod(mods) > limit:
        raise TooLarge(f"#(Gamma/N Gamma) = {prod(mods)} exceeds {limit}")
    tests = []
    for c in constraints:
        red = tuple(gcd(d, n) for d in c.G.invariants)
        imgs = [tuple(x % m for x, m in zip(v, red)) for v in c.phi.images]
        xs = {tuple(x % m for x, m in zip(v, red)) for v in c.X}
        tests.append((red, imgs, xs))
    out = set()
    for vec in itertools.product(*(range(m) for m in mods)):
        ok = True
        for red, imgs, xs in tests:
            val = [0] * len(red)
            for c, img in zip(vec, imgs):
                if c:
                    for t, x in enumerate(img):
                        val[t] += c * x
            if tuple(v % m for v, m in zip(val, red)) not in xs:
                ok = False
                break
        if ok:
            out.add(vec)
    return out


@dataclass(frozen=True)
class ModelSample:
    p: int
    trials: int
    seed: int
    misses: int

    @property
    def frequency(self) -> float:
        return self.misses / self.trials

    @property
    def scaled(self) -> float:
        return self.p * self.frequency


def monte_carlo_miss_rate(
    p: int,
    trials: int,
    seed: int = 0,
    c: float = 2.0,
    point_set: str = "random",
    generator: int | None = None,
) -> ModelSample:
    """Cyclic model: J = Z/n, Gamma's image = <k>, C(F_p) a random subset of size m.

    A trial misses when the random m-subset avoids the subgroup <k>, which
    has n/gcd(n, k) elements; the count of hits is hypergeometric.
    ``point_set="all"`` takes the whole group as the point set; a fixed
    ``generator`` replaces the uniform draw of k.
    """
    rng = np.random.default_rng([p, trials, seed])
    lo = math.ceil(p * p - c * p**1.5)
    hi = math.floor(p * p + c * p**1.5)
    n = rng.integers(lo, hi + 1, size=trials)
    k = rng.integers(0, n) if generator is None else np.full(trials, generator) % n
    sub = n // np.gcd(n, k)
    if point_set == "all":
        m = n.copy()
    else:
        sd = math.sqrt(p)
        m = np.rint(p + rng.normal(0.0, sd, size=trials))
        m = np.clip(m, math.ceil(p - 4 * sd), math.floor(p + 4 * sd)).astype(np.int64)
        m = np.minimum(m, n)
    hits = rng.hypergeometric(sub, n - sub, m)
    misses = int(np.count_nonzero(hits == 0))
    return ModelSample(p, trials, seed, misses)
