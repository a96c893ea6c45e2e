"""Group structure of J(F_p) with a basis, and discrete logarithms.

Each Sylow subgroup is built from random elements projected into it; the
relations among the generators found so far are put in Smith form to get a
basis.  Discrete logs go level by level (Pohlig-Hellman), each level being a
baby-step giant-step search in the l-torsion.
"""

from __future__ import annotations

import math
import random
import zlib
from dataclasses import dataclass, field

from ..algebra.abgroups import FiniteAbGroup
from ..algebra.factored import FactoredInt
from ..algebra.intlinalg import inverse_unimodular, smith_normal_form
from .mumford import ZERO, JacobianFp, MumfordElement


class NotInGroup(ArithmeticError):
    pass


# full tables for the l-torsion up to this size, BSGS above
_TABLE_LIMIT = 4096


class _TorsionSolver:
    """Solve z = sum d_i g_i, 0 <= d_i < l, for independent g_i of order l."""

    def __init__(self, J: JacobianFp, gens: list[MumfordElement], ell: int):
        self.J = J
        self.ell = ell
        self.k = len(gens)
        self.gens = gens
        size = ell ** self.k
        if self.k == 0:
            self.table = {ZERO: ()}
            self.m = 0
            return
        if size <= _TABLE_LIMIT:
            self.m = 0
            self.table = self._span(gens, [ell] * self.k)
        else:
            # baby steps: all combos of the first k-1 generators plus j*g_last, j < m
            self.m = math.isqrt(ell - 1) + 1
            self.table = self._span(gens, [ell] * (self.k - 1) + [self.m])
            self.giant = J.negate(J.mul(self.m, gens[-1]))

    def _span(self, gens, bounds):
        J = self.J
        table = {ZERO: (0,) * len(gens)}
        for i, (g, b) in enumerate(zip(gens, bounds)):
            new = {}
            for el, vec in table.items():
                cur = el
                for j in range(1, b):
                    cur = J.add(cur, g)
                    v = list(vec)
                    v[i] = j
                    new[cur] = tuple(v)
            table.update(new)
        return table

    def solve(self, z: MumfordElement) -> tuple[int, ...]:
        if self.m == 0:
            try:
                return self.table[z]
            except KeyError:
                raise NotInGroup("element outside the l-torsion span") from None
        cur = z
        for i in range(self.m + 1):
            hit = self.table.get(cur)
            if hit is not None:
                v = list(hit)
                v[-1] = (v[-1] + i * self.m) % self.ell
                return tuple(v)
            cur = self.J.add(cur, self.giant)
        raise NotInGroup("element outside the l-torsion span")


@dataclass
class _Sylow:
    ell: int
    exps: list[int]  # ascending exponents a_i, basis element i has order ell^a_i
    basis: list[MumfordElement]
    # powers[i][s] = ell^s * basis[i]
    powers: list[list[MumfordElement]] = field(default_factory=list)
    solver: _TorsionSolver | None = None


class JacobianGroup:
    """Certified group structure of J(F_p) (or J^0) with discrete logs."""

    def __init__(self, J: JacobianFp, order: FactoredInt, seed: int | None = None):
        self.J = J
        self.order = order
        self.n = order.value
        if seed is None:
            seed = zlib.crc32(repr((J.f, J.p)).encode())
        self.rng = random.Random(seed)
        self.sylow: list[_Sylow] = []
        for ell, e in order.factors.items():
            self.sylow.append(self._build_sylow(ell, e))
        self._assemble()

    # -- construction ---------------------------------------------------------

    def _random_in_sylow(self, ell, e):
        cof = self.n // ell**e
        return self.J.mul(cof, self.J.random_element(self.rng))

    def _build_sylow(self, ell: int, e: int) -> _Sylow:
        J = self.J
        syl = _Sylow(ell, [], [])
        self._prepare(syl)
        target = e
        tries = 0
        while sum(syl.exps) < target:
            tries += 1
            if tries > 200 * (e + 2):
                raise ArithmeticError(f"could not build the {ell}-Sylow subgroup at p={J.p}")
            y = self._random_in_sylow(ell, e)
            # order of y modulo the current subgroup
            j, coords = 0, None
            cur = y
            while True:
                coords = self._try_dlog_sylow(syl, cur)
                if coords is not None:
                    break
                cur = J.mul(ell, cur)
                j += 1
                if j > e:
                    raise ArithmeticError("element order exceeds the Sylow exponent")
            if j == 0:
                continue
            # relations: ell^a_i * b_i = 0 and ell^j * y - sum coords_i b_i = 0
            k = len(syl.basis)
            rel = []
            for i, a in enumerate(syl.exps):
                row = [0] * (k + 1)
                row[i] = ell**a
                rel.append(row)
            rel.append([-c for c in coords] + [ell**j])
            gens = syl.basis + [y]
            diag, _, v = smith_normal_form(rel)
            vinv = inverse_unimodular(v)
            new_basis, new_exps = [], []
            for i, d in enumerate(diag):
                if d == 1:
                    continue
                el = ZERO
                for c, g in zip(vinv[i], gens):
                    if c:
                        el = J.add(el, J.mul(c, g))
                new_basis.append(el)
                new_exps.append(round(math.log(d, ell)))
                if ell ** new_exps[-1] != d:
                    raise ArithmeticError("non-prime-power invariant in a Sylow subgroup")
            syl.basis, syl.exps = new_basis, new_exps
            self._prepare(syl)
        return syl

    def _prepare(self, syl: _Sylow):
        J = self.J
        syl.powers = []
        for b, a in zip(syl.basis, syl.exps):
            row = [b]
            for _ in range(a - 1):
                row.append(J.mul(syl.ell, row[-1]))
            syl.powers.append(row)
            if not J.mul(syl.ell, row[-1]).is_zero or (a and row[-1].is_zero):
                raise ArithmeticError("basis element has the wrong order")
        syl.solver = _TorsionSolver(J, [row[-1] for row in syl.powers], syl.ell)

    def _try_dlog_sylow(self, syl: _Sylow, x: MumfordElement):
        try:
            return self._dlog_sylow(syl, x)
        except NotInGroup:
            return None

    def _dlog_sylow(self, syl: _Sylow, x: MumfordElement) -> list[int]:
        """Coordinates of x in the ell-group spanned by syl.basis."""
        J = self.J
        ell = syl.ell
        k = len(syl.basis)
        if k == 0:
            if x.is_zero:
                return []
            raise NotInGroup("nonzero element in trivial group")
        a = max(syl.exps)
        coords = [0] * k
        known = ZERO
        for t in range(a):
            z = J.mul(ell ** (a - 1 - t), J.sub(x, known))
            digits = syl.solver.solve(z)
            for i, d in enumerate(digits):
                if not d:
                    continue
                level = t - (a - syl.exps[i])
                if level < 0:
                    raise NotInGroup("digit on an invisible component")
                coords[i] += d * ell**level
                known = J.add(known, J.mul(d, syl.powers[i][level]))
        if known != x:
            raise NotInGroup("recombination failed")
        return coords

    def _assemble(self):
        """Merge the Sylow bases into invariant factors d_1 | ... | d_k."""
        width = max((len(s.exps) for s in self.sylow), default=0)
        self._slots = []  # for each invariant factor: list of (sylow index, basis index)
        inv, basis = [], []
        for j in range(width):
            d = 1
            el = ZERO
            slots = []
            for si, s in enumerate(self.sylow):
                idx = len(s.exps) - width + j
                if idx >= 0:
                    d *= s.ell ** s.exps[idx]
                    el = self.J.add(el, s.basis[idx])
                    slots.append((si, idx))
            inv.append(d)
            basis.append(el)
            self._slots.append(slots)
        self.structure = FiniteAbGroup(tuple(inv))
        self.basis = basis
        if self.structure.order != self.n:
            raise ArithmeticError("structure does not match the group order")
        self._cofactor_inv = []
        for s in self.sylow:
            pe = s.ell ** sum(s.exps)
            cof = self.n // pe
            self._cofactor_inv.append((cof, pow(cof, -1, pe) if pe > 1 else 0))

    # -- queries -------------------------------------------------------------

    def dlog(self, P: MumfordElement, verify: bool = True) -> tuple[int, ...]:
        J = self.J
        if P.is_zero:
            return self.structure.zero()
        local = []
        for s, (cof, cinv) in zip(self.sylow, self._cofactor_inv):
            c = self._dlog_sylow(s, J.mul(cof, P))
            local.append([ci * cinv for ci in c])
        out = []
        for d, slots in zip(self.structure.invariants, self._slots):
            # CRT across the primes of this invariant factor
            val, mod = 0, 1
            for si, idx in slots:
                s = self.sylow[si]
                m = s.ell ** s.exps[idx]
                r = local[si][idx] % m
                val = val + mod * ((r - val) * pow(mod, -1, m) % m)
                mod *= m
            out.append(val % d)
        coords = tuple(out)
        if verify and self.element(coords) != P:
            raise NotInGroup("dlog recombination failed")
        return coords

    def element(self, coords) -> MumfordElement:
        el = ZERO
        for c, b in zip(coords, self.basis):
            if c:
                el = self.J.add(el, self.J.mul(c, b))
        return el


def group_structure(J: JacobianFp, order: FactoredInt, seed: int | None = None) -> JacobianGroup:
    return JacobianGroup(J, order, seed)
