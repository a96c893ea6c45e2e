"""Collecting local information prime by prime.

For each usable prime we build G_p = phi_p(Gamma) inside J(F_p), the map
phi_p onto it, and X_p, the part of the curve image lying in G_p.  The scan
stops once the expected number of surviving cosets is small enough.
"""

from __future__ import annotations

import csv
import io
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra.abgroups import AbHom, FiniteAbGroup, image_subgroup, merge_invariant_factors
from .algebra.factored import FactoredInt
from .curve import UNUSABLE, CurveModel, classify_reduction, enumerate_points
from .jacobian.embedding import BadEmbeddingReduction, EmbeddingData, Embedder
from .jacobian.mumford import ZERO, JacobianFp, MumfordElement
from .jacobian.orders import TableMismatch, group_order
from .jacobian.rational import KERNEL_OF_REDUCTION, ReductionFailed, reduce_rational
from .jacobian.structure import JacobianGroup
from .sieve import FGGroup, _RatioCache, expected_size_n

log = logging.getLogger(__name__)

THRESHOLD = "Threshold"
EARLY_CONTRADICTION = "EarlyContradiction"
EXHAUSTED = "Exhausted"


@dataclass(frozen=True)
class MWInput:
    rank: int
    free: tuple  # MumfordElements over Q
    torsion: tuple  # (MumfordElement, order) pairs
    embedding: EmbeddingData

    @property
    def gamma(self) -> FGGroup:
        return FGGroup(self.rank, tuple(t for _, t in self.torsion))

    @property
    def generators(self) -> list[MumfordElement]:
        return list(self.free) + [g for g, _ in self.torsion]


@dataclass(frozen=True)
class LocalConstraint:
    p: int
    kind: str
    G: FiniteAbGroup
    phi: AbHom
    X: frozenset
    exponent: FactoredInt
    order: int = 0  # #J(F_p) or #J^0(F_p)
    full_group: FiniteAbGroup | None = None  # G'_p
    full_phi: AbHom | None = None  # Gamma -> G'_p
    full_X: frozenset = frozenset()  # X'_p
    n_points: int = 0


@dataclass(frozen=True)
class Skip:
    p: int
    reason: str


def restrict_to_image(full_phi: AbHom, full_x) -> tuple[FiniteAbGroup, AbHom, frozenset]:
    """Replace G'_p by G_p = phi_p(Gamma); X_p is X'_p cut down to G_p, in G_p coordinates."""
    sub = image_subgroup(full_phi)
    xs = (sub.coords(y) for y in full_x)
    return sub.group, sub.phi, frozenset(c for c in xs if c is not None)


def make_constraint(curve: CurveModel, mw: MWInput, p: int, smooth_bound: int = 200, seed: int | None = None):
    cls = classify_reduction(curve, p)
    if cls.kind == UNUSABLE:
        return Skip(p, cls.reason)
    f = curve.reduce(p)
    try:
        order = group_order(f, p, cls)
    except TableMismatch as exc:
        return Skip(p, f"TableMismatch: {exc}")
    if not order.is_smooth(smooth_bound):
        return Skip(p, "NotSmooth")
    J = JacobianFp(f, p)
    grp = JacobianGroup(J, order, seed)
    images = []
    for P in mw.generators:
        try:
            red = reduce_rational(P, J)
        except ReductionFailed as exc:
            return Skip(p, f"ReductionFailed: {exc}")
        if red is KERNEL_OF_REDUCTION:
            red = ZERO
        images.append(grp.dlog(red, verify=False))
    full_phi = AbHom(grp.structure, tuple(images))
    try:
        emb = Embedder(J, mw.embedding, enumerate_points(curve, p))
    except BadEmbeddingReduction as exc:
        return Skip(p, f"BadEmbeddingReduction: {exc}")
    full_x = set()
    if emb.base is not None:
        full_x = {grp.dlog(emb.embed(P), verify=False) for P in emb.points}
    G, phi, x = restrict_to_image(full_phi, full_x)
    return LocalConstraint(
        p=p,
        kind=cls.kind,
        G=G,
        phi=phi,
        X=x,
        exponent=FactoredInt.from_int(G.exponent),
        order=order.value,
        full_group=grp.structure,
        full_phi=full_phi,
        full_X=frozenset(full_x),
        n_points=len(emb.points),
    )


def expected_size(gamma: FGGroup, constraints: Sequence, n, cache: _RatioCache | None = None) -> Fraction:
    """n(S, N) = #(Gamma/N Gamma) * prod #C_{N,p} / #(G_p/N G_p), exactly."""
    return expected_size_n(gamma, constraints, int(n), cache)


def candidate_moduli(groups: Sequence[FiniteAbGroup], rank: int) -> list[FactoredInt | None]:
    """N_{l-r-1-j} for j = 0..3 (1-based invariant factors of the product), None if undefined."""
    inv = merge_invariant_factors(groups)
    l = len(inv)
    out = []
    for j in range(4):
        idx = l - rank - 1 - j
        out.append(inv[idx - 1] if idx >= 1 else None)
    return out


@dataclass
class ScanStep:
    prime: int
    kind: str
    order: int
    group_order: int
    image_size: int
    moduli: list  # FactoredInt or None, j = 0..3
    n_values: list  # Fraction or None


@dataclass
class ScanReport:
    gamma: FGGroup
    constraints: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    steps: list = field(default_factory=list)
    modulus: FactoredInt | None = None
    stop_reason: str = EXHAUSTED
    last_prime: int = 2
    cache: _RatioCache | None = None

    def csv_rows(self) -> list[dict]:
        rows = []
        for s in self.steps:
            row = {"prime": s.prime, "kind": s.kind, "order": s.order, "image_size": s.image_size}
            for j, v in enumerate(s.n_values):
                row[f"n_{j}"] = "" if v is None else f"{float(v):.6g}"
            rows.append(row)
        return rows

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["prime", "kind", "order", "image_size", "n_0", "n_1", "n_2", "n_3"], lineterminator="\n")
        w.writeheader()
        w.writerows(self.csv_rows())
        return buf.getvalue()


def _odd_primes(start: int, stop: int):
    n = max(3, start + 1)
    while n <= stop:
        if n % 2 and all(n % d for d in range(3, int(n**0.5) + 1, 2)):
            yield n
        n += 1


def _evaluate(report: ScanReport, rank: int):
    groups = [c.G for c in report.constraints]
    moduli = candidate_moduli(groups, rank)
    nvals = [None if m is None else expected_size(report.gamma, report.constraints, m.value, report.cache) for m in moduli]
    return moduli, nvals


def scan(
    curve: CurveModel,
    mw: MWInput,
    smooth_bound: int = 200,
    eps=Fraction(1, 100),
    max_prime: int = 10**5,
    max_constraints: int = 400,
    threads: int = 1,
    resume: ScanReport | None = None,
    seed: int | None = None,
) -> ScanReport:
    eps = Fraction(eps)
    rep = resume or ScanReport(mw.gamma)
    if rep.cache is None:
        rep.cache = _RatioCache(rep.constraints)
    rank = mw.rank
    if resume is not None and rep.steps:
        moduli, nvals = _evaluate(rep, rank)
        if _pick(moduli, nvals, eps, rep):
            return rep
    primes = _odd_primes(rep.last_prime, max_prime)
    window = max(1, threads)
    with ThreadPoolExecutor(window) as ex:
        while True:
            batch = [q for _, q in zip(range(window), primes)]
            if not batch:
                rep.stop_reason = EXHAUSTED
                if rep.constraints:
                    _pick(*_evaluate(rep, rank), None, rep)
                return rep
            results = list(ex.map(lambda q: make_constraint(curve, mw, q, smooth_bound, seed), batch))
            for q, res in zip(batch, results):
                rep.last_prime = q
                if isinstance(res, Skip):
                    rep.skipped.append(res)
                    continue
                rep.constraints.append(res)
                rep.cache.constraints.append(res)
                moduli, nvals = _evaluate(rep, rank)
                rep.steps.append(ScanStep(q, res.kind, res.order, res.G.order, len(res.X), moduli, nvals))
                log.info("p=%d kind=%s #J=%d #G=%d #X=%d", q, res.kind, res.order, res.G.order, len(res.X))
                if not res.X:
                    rep.stop_reason = EARLY_CONTRADICTION
                    rep.modulus = None
                    return rep
                if _pick(moduli, nvals, eps, rep):
                    return rep
                if len(rep.constraints) >= max_constraints:
                    rep.stop_reason = EXHAUSTED
                    _pick(moduli, nvals, None, rep)
                    return rep


def _pick(moduli, nvals, eps, rep: ScanReport) -> bool:
    """Record the best candidate modulus; True if it meets eps."""
    best = None
    for j, (m, v) in enumerate(zip(moduli, nvals)):
        if v is not None and (best is None or v < best[0]):
            best = (v, m)
    if best is None:
        return False
    rep.modulus = best[1]
    if eps is not None and best[0] < eps:
        rep.stop_reason = THRESHOLD
        return True
    return False
