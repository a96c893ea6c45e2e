"""Rational Mumford pairs and their reduction modulo p."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from .mumford import ZERO, JacobianFp, MumfordElement


class ReductionFailed(ArithmeticError):
    pass


class _Kernel:
    """Marker for an element in the kernel of reduction (maps to zero)."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "KernelOfReduction"


KERNEL_OF_REDUCTION = _Kernel()


def parse_rational(s) -> Fraction:
    if isinstance(s, Fraction):
        return s
    if isinstance(s, int):
        return Fraction(s)
    return Fraction(str(s).strip())


def qform_mul(f, g):
    out = [Fraction(0)] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        if x:
            for j, y in enumerate(g):
                out[i + j] += x * y
    return tuple(out)


def qform_divexact(g, a):
    """q with g = a*q over Q, or None."""
    g = [Fraction(x) for x in g]
    a = [Fraction(x) for x in a]
    # strip the common root at infinity first
    while a and a[-1] == 0:
        if g[-1] != 0:
            return None
        a.pop()
        g.pop()
    dq = len(g) - len(a)
    if dq < 0:
        return None
    q = [Fraction(0)] * (dq + 1)
    rem = list(g)
    for i in range(dq, -1, -1):
        c = rem[i + len(a) - 1] / a[-1]
        q[i] = c
        for j, y in enumerate(a):
            rem[i + j] -= c * y
    if any(rem):
        return None
    return tuple(q)


def primitive_integral(form: Sequence) -> tuple[tuple[int, ...], Fraction]:
    """Scale a rational form to a primitive integer form; returns (form, scale)."""
    fr = [Fraction(x) for x in form]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero form")
    ints = [x // g for x in ints]
    return tuple(ints), Fraction(den, g)


def canonicalize_q(f: Sequence[int], A: Sequence, B: Sequence) -> MumfordElement:
    """Canonical rational pair: A primitive integral with positive leading coefficient, B reduced."""
    A = [Fraction(x) for x in A]
    B = [Fraction(x) for x in B]
    if len(A) != 3 or len(B) != 4 or not any(A):
        raise ValueError("need a nonzero quadratic A and a cubic B")
    rest = [Fraction(c) for c in f]
    b2 = qform_mul(B, B)
    rest = [x - y for x, y in zip(rest, b2)]
    if qform_divexact(rest, A) is None:
        raise ValueError("A does not divide F - B^2")
    Ai, _ = primitive_integral(A)
    lead = next(c for c in reversed(Ai) if c)
    if lead < 0:
        Ai = tuple(-c for c in Ai)
    a0, a1, a2 = (Fraction(c) for c in Ai)
    b0, b1, b2_, b3 = B
    if a2:
        c = b3 / a2
        b1, b2_, b3 = b1 - c * a0, b2_ - c * a1, Fraction(0)
        c = b2_ / a2
        b0, b1, b2_ = b0 - c * a0, b1 - c * a1, Fraction(0)
    elif a1:
        c = b2_ / a1
        b1, b2_ = b1 - c * a0, Fraction(0)
        c = b1 / a1
        b0, b1 = b0 - c * a0, Fraction(0)
    else:
        b1, b0 = b1 - b1, b0 - b0
    return MumfordElement(Ai, (b0, b1, b2_, b3))


def _p_integral(x: Fraction, p: int) -> bool:
    return x.denominator % p != 0


def reduce_rational(P: MumfordElement, J: JacobianFp, check_smooth: bool = True):
    """Reduce a rational pair mod p; KERNEL_OF_REDUCTION if it reduces to the origin."""
    if P.is_zero:
        return ZERO
    p = J.p
    A, _ = primitive_integral(P.A)
    if all(a % p == 0 for a in A):
        raise ReductionFailed("primitive A vanishes mod p")
    B = [Fraction(x) for x in P.B]
    xa = (0, A[0], A[1], A[2])
    za = (A[0], A[1], A[2], 0)
    # two coordinates where [xa; za] has a unit minor
    pair = None
    for i in range(4):
        for j in range(i + 1, 4):
            if (xa[i] * za[j] - xa[j] * za[i]) % p:
                pair = (i, j)
                break
        if pair:
            break
    if pair is None:
        raise ReductionFailed("degenerate A")
    i, j = pair
    det = Fraction(xa[i] * za[j] - xa[j] * za[i])
    # solve u*xa + v*za = -B on coordinates i, j
    u = (-B[i] * za[j] + B[j] * za[i]) / det
    v = (-B[j] * xa[i] + B[i] * xa[j]) / det
    Bp = [B[k] + u * xa[k] + v * za[k] for k in range(4)]
    if not all(_p_integral(x, p) for x in Bp):
        return KERNEL_OF_REDUCTION
    Ab = tuple(a % p for a in A)
    Bb = tuple(x.numerator * pow(x.denominator, -1, p) % p for x in Bp)
    el = J._canon(Ab, Bb)
    if not J.is_valid(el):
        raise ReductionFailed("reduced pair violates A | F - B^2")
    if check_smooth and not J.is_smooth(el):
        raise ReductionFailed("reduced pair is not smooth")
    return el


def _solve2(rows, rhs):
    (a, b), (c, d) = rows
    det = a * d - b * c
    if det == 0:
        return None
    return ((rhs[0] * d - b * rhs[1]) / det, (a * rhs[1] - c * rhs[0]) / det)


def point_pair(f: Sequence[int], P, Q) -> MumfordElement:
    """The class [P + Q - W] for rational points P, Q given as (X, Y, Z) in weights (1, 3, 1)."""
    P = tuple(Fraction(x) for x in P)
    Q = tuple(Fraction(x) for x in Q)
    same_x = P[0] * Q[2] == Q[0] * P[2]
    if same_x:
        # compare y after scaling Q onto P's representative
        lam = P[0] / Q[0] if Q[0] else P[2] / Q[2]
        yq = Q[1] * lam**3
        if yq == -P[1]:
            return ZERO
        Q = P
    A = qform_mul((-P[0], P[2]), (-Q[0], Q[2]))
    monos = lambda x, z: [z**3, x * z**2, x**2 * z, x**3]  # noqa: E731
    rows = [monos(P[0], P[2])]
    rhs = [P[1]]
    if P == Q:
        if P[1] == 0:
            raise ValueError("tangent at a Weierstrass point")
        fq = [Fraction(c) for c in f]
        if P[2]:
            x0 = P[0] / P[2]
            y0 = P[1] / P[2] ** 3
            df = sum(i * c * x0 ** (i - 1) for i, c in enumerate(fq) if i)
            rows, rhs = [[1, x0, x0**2, x0**3], [0, 1, 2 * x0, 3 * x0**2]], [y0, df / (2 * y0)]
        else:
            y0 = P[1] / P[0] ** 3
            rows, rhs = [[0, 0, 0, 1], [0, 0, 1, 0]], [y0, fq[5] / (2 * y0)]
    else:
        rows.append(monos(Q[0], Q[2]))
        rhs.append(Q[1])
    for i, j in ((0, 1), (0, 3), (2, 3), (1, 2), (0, 2), (1, 3)):
        sol = _solve2([[r[i], r[j]] for r in rows], rhs)
        if sol is not None:
            B = [Fraction(0)] * 4
            B[i], B[j] = sol
            return canonicalize_q(f, A, B)
    raise ValueError("could not interpolate B")
