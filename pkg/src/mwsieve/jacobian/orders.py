"""Orders of J(F_p) and J^0(F_p).

Good reduction uses the point counts N1, N2.  For a singular reduction the
order is counted directly, A-form by A-form, and compared against the closed
formula for the factorization type.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..algebra.factored import FactoredInt
from ..algebra.fields import Fp2Elem, legendre, smallest_nonresidue
from ..algebra.forms import factor_profile, form_divexact, form_eval, form_is_square, form_reduce
from ..curve import BAD_USABLE, GOOD, ReductionClass, _chi_array, count_points, fp2_grid, fp2_horner
from .mumford import JacobianFp


class TableMismatch(ArithmeticError):
    pass


def good_order(f: Sequence[int], p: int) -> int:
    n1 = count_points(f, p, 1)
    n2 = count_points(f, p, 2)
    return (n1 * n1 + n2) // 2 - p


def _p1_points(p):
    return [(x, 1) for x in range(p)] + [(1, 0)]


def counted_order(J: JacobianFp) -> int:
    """#J^0(F_p) by summing the number of smooth B over every A.

    A with two rational roots contributes the product of the local counts,
    A = L^2 the tangent count, irreducible A the count over F_{p^2}.  Points
    on the singular locus are excluded except for A = L^2 at a rational
    singularity, which is counted through b_solutions and is_smooth.
    """
    p = J.p
    f = J.f
    sing = set(J.singular_points)
    local = {}
    for pt in _p1_points(p):
        if pt in sing:
            continue
        v = form_eval(f, pt[0], pt[1], p)
        local[pt] = (v, 1 + legendre(v, p) if v else 1)
    s_sum = sum(s for _, s in local.values())
    s_sq = sum(s * s for _, s in local.values())
    total = (s_sum * s_sum - s_sq) // 2  # unordered pairs of distinct points
    # A = L^2 at a smooth point: 2 tangents if F(x) is a nonzero square
    total += sum(s for v, s in local.values() if v)
    for x, z in sing:
        A = (x * x % p, (-2 * x) % p, 1) if z else (1, 0, 0)
        total += sum(1 for el in J.b_solutions(A) if J.is_smooth(el))
    # irreducible A: pairs of conjugate roots alpha in F_{p^2} \ F_p
    u, v = fp2_grid(p)
    mask = v != 0
    u, v = u[mask], v[mask]
    fu, fv = fp2_horner(list(f), u, v, p)
    s = smallest_nonresidue(p)
    norm = (fu * fu - s * (fv * fv % p)) % p
    w = np.where(norm == 0, 1, 1 + _chi_array(norm, p))
    for g in J.multiple_factors:
        if len(g) == 3:
            gu, gv = fp2_horner(list(g), u, v, p)
            w = np.where((gu == 0) & (gv == 0), 0, w)
    total += int(np.sum(w)) // 2
    return total + 1


def _resultant_linear(lin, h, p) -> int:
    """Value of h at the root of the normalised linear form lin (h of even degree)."""
    if lin == (1, 0):
        return h[-1] % p
    x = (-lin[0]) % p
    return form_eval(h, x, 1, p)


def _divide_power(f, g, m, p):
    for _ in range(m):
        f = form_divexact(f, g, p)
    return f


def _count_genus1(q, p) -> int:
    """#E for E: y^2 = Q(X, Z), Q a quartic form (points over P^1)."""
    return sum(1 + legendre(form_eval(q, x, z, p), p) for x, z in _p1_points(p))


def table_order(f: Sequence[int], p: int) -> int | None:
    """Closed-form #J^0_F(F_p) from the factorization type; None if F = 0 or type unknown."""
    f = form_reduce(tuple(f), p)
    if not any(f):
        return p * p
    unit, facs = factor_profile(f, p)
    mult = sorted(((len(g) - 1, m), g) for g, m in facs if m > 1)
    pattern = tuple(k for k, _ in mult)
    q = p
    sq = lambda c: legendre(c, p) == 1  # noqa: E731
    if pattern == ():
        return None
    if pattern == ((1, 2),):
        ell = mult[0][1]
        h4 = _divide_power(f, ell, 2, p)
        n_e = _count_genus1(h4, p)
        return (q - 1) * n_e if sq(_resultant_linear(ell, h4, p)) else (q + 1) * n_e
    if pattern == ((1, 3),):
        ell = mult[0][1]
        h3 = _divide_power(f, ell, 3, p)
        from ..algebra.forms import form_mul

        return q * _count_genus1(form_mul(ell, h3, p), p)
    if pattern == ((1, 2), (1, 2)):
        ell, m1 = mult[0][1], mult[1][1]
        c = _resultant_linear(ell, _divide_power(f, ell, 2, p), p)
        c2 = _resultant_linear(m1, _divide_power(f, m1, 2, p), p)
        good = sq(c) + sq(c2)
        return {2: (q - 1) ** 2, 1: q * q - 1, 0: (q + 1) ** 2}[good]
    if pattern == ((2, 2),):
        g = mult[0][1]
        h2 = _divide_power(f, g, 2, p)
        c = _norm_at_root(g, h2, p)
        return q * q - 1 if sq(c) else q * q + 1
    if pattern == ((1, 2), (1, 2), (1, 2)):
        return (q - 1) ** 2 if sq(unit) else (q + 1) ** 2
    if pattern == ((1, 2), (2, 2)):
        return q * q - 1
    if pattern == ((3, 2),):
        return q * q + q + 1 if sq(unit) else q * q - q + 1
    if pattern == ((1, 2), (1, 3)):
        ell = next(g for (d, m), g in mult if m == 2)
        c = _resultant_linear(ell, _divide_power(f, ell, 2, p), p)
        return q * (q - 1) if sq(c) else q * (q + 1)
    if pattern == ((1, 4),):
        ell = mult[0][1]
        c = _resultant_linear(ell, _divide_power(f, ell, 4, p), p)
        return q * (q - 1) if sq(c) else q * (q + 1)
    if pattern in (((1, 3), (1, 3)), ((2, 3),), ((1, 5),)):
        return q * q
    if pattern == ((1, 2), (1, 4)):
        return q * (q - 1) if sq(unit) else q * (q + 1)
    if pattern == ((1, 6),):
        return q * q
    return None


def _norm_at_root(g, h, p) -> int:
    """Res(g, h) for monic irreducible quadratic g: the norm of h(alpha)."""
    a0, a1 = g[0], g[1]
    disc = (a1 * a1 - 4 * a0) % p
    from ..algebra.fields import sqrt_mod

    s = smallest_nonresidue(p)
    k = sqrt_mod(disc * pow(s, -1, p), p)
    inv2 = pow(2, -1, p)
    alpha = Fp2Elem((-a1) * inv2, k * inv2, p)
    val = Fp2Elem(0, 0, p)
    for c in reversed(h):
        val = val * alpha + c
    return val.norm()


def j0_order(f: Sequence[int], p: int, check_table: bool = True) -> int:
    """#J^0_F(F_p) for a singular reduction; smooth points split in three when F is a square."""
    J = JacobianFp(f, p)
    n = counted_order(J)
    if form_is_square(J.f, p):
        if n % 3:
            raise TableMismatch(f"smooth count {n} not divisible by 3")
        n //= 3
    if check_table:
        t = table_order(J.f, p)
        if t is not None and t != n:
            raise TableMismatch(f"counted {n}, table gives {t} at p={p}")
    return n


def group_order(f: Sequence[int], p: int, cls: ReductionClass) -> FactoredInt:
    if cls.kind == GOOD:
        return FactoredInt.from_int(good_order(f, p))
    if cls.kind == BAD_USABLE:
        return FactoredInt.from_int(j0_order(f, p))
    raise ValueError(f"no group order for reduction class {cls.kind}")
