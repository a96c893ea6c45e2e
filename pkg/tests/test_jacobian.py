import random
from fractions import Fraction

import pytest

from mwsieve.algebra.forms import form_mul, form_scale
from mwsieve.curve import CurvePoint, classify_reduction, enumerate_points, validate_model
from mwsieve.jacobian import (
    KERNEL_OF_REDUCTION,
    ZERO,
    BasePoint,
    Divisor3,
    Embedder,
    JacobianFp,
    MumfordElement,
    canonicalize_q,
    group_order,
    group_structure,
    point_pair,
    reduce_rational,
    table_order,
)
from mwsieve.jacobian.orders import counted_order
from mwsieve.oracle import RationalJacobian

X5 = (1, 0, 0, 0, 0, 1, 0)
KP = (1, 2, -1, -1, 1, 1, 1)  # y^2 = x^6 + x^5 + x^4 - x^3 - x^2 + 2x + 1
NODE = (0, 0, 1, 1, 1, 0, 1)  # double root at X = 0 over F_5


def _elements(J, rng, n):
    return [J.random_element(rng) for _ in range(n)]


def test_canonicalize_is_class_invariant():
    J = JacobianFp(X5, 7)
    rng = random.Random(1)
    for P in _elements(J, rng, 30):
        if P.is_zero:
            continue
        A, B = P.A, P.B
        xa = (0,) + tuple(A)  # X * A as a cubic form
        assert J.canonicalize(A, [(b + a) % 7 for b, a in zip(B, xa)]) == P
        assert J.canonicalize([3 * a % 7 for a in A], B) == P
        assert J.canonicalize(*J.canonicalize(A, B)) == J.canonicalize(A, B)


def test_is_smooth_examples():
    p = 5
    J = JacobianFp(NODE, p)
    assert J.is_smooth(ZERO)
    A = (0, p - 1, 1)  # X (X - Z)
    sols = J.b_solutions(A)
    assert sols and not any(J.is_smooth(P) for P in sols)
    f2 = NODE[2]
    for lam in range(p):
        P = J.canonicalize((0, 0, 1), (0, lam, 0, 0))
        assert J.is_valid(P)
        assert J.is_smooth(P) == (lam * lam % p != f2 % p)


def test_add_identity_inverse_and_special_case():
    p = 5
    J = JacobianFp(NODE, p)
    rng = random.Random(2)
    for P in _elements(J, rng, 20):
        assert J.add(ZERO, P) == P
        assert J.add(P, J.negate(P)).is_zero
    for lam in range(1, p):
        if lam * lam % p == NODE[2]:
            continue
        P = J.canonicalize((0, 0, 1), (0, lam, 0, 0))
        Q = J.canonicalize((0, 0, 1), (0, -lam % p, 0, 0))
        assert J.add(P, Q).is_zero


@pytest.mark.parametrize("f,p", [(X5, 11), (KP, 13), (KP, 5), ((7, 0, 0, 1, 0, 0, 1), 7)])
def test_group_axioms_sampled(f, p):
    J = JacobianFp(tuple(c % p for c in f), p)
    rng = random.Random(p)
    els = _elements(J, rng, 40)
    for _ in range(300):
        a, b, c = (rng.choice(els) for _ in range(3))
        assert J.add(J.add(a, b), c) == J.add(a, J.add(b, c))
        assert J.add(a, b) == J.add(b, a)


def test_group_order_examples():
    m = validate_model(X5)
    assert group_order(m.reduce(3), 3, classify_reduction(m, 3)).value == 10
    g3 = (1, 1, 0, 1)
    f = form_scale(form_mul(g3, g3, 5), 2, 5)
    assert table_order(f, 5) == 21
    assert counted_order(JacobianFp(f, 5)) == 21


def test_group_structure_x5_plus_1():
    J = JacobianFp(X5, 3)
    m = validate_model(X5)
    order = group_order(m.reduce(3), 3, classify_reduction(m, 3))
    grp = group_structure(J, order, seed=0)
    assert grp.structure.invariants == (10,)


@pytest.mark.parametrize("f,p", [(KP, 7), (KP, 11), (KP, 5), (X5, 13)])
def test_structure_product_and_dlog_linearity(f, p):
    m = validate_model(f)
    cls = classify_reduction(m, p)
    J = JacobianFp(m.reduce(p), p)
    order = group_order(m.reduce(p), p, cls)
    grp = group_structure(J, order, seed=1)
    assert grp.structure.order == order.value
    rng = random.Random(p)
    for P in _elements(J, rng, 10):
        x = grp.dlog(P)
        assert grp.element(x) == P
        k = rng.randrange(1, 50)
        assert grp.dlog(J.mul(k, P)) == grp.structure.scale(k, x)


def test_embedding_base_point():
    p = 7
    m = validate_model(KP)
    J = JacobianFp(m.reduce(p), p)
    emb = Embedder(J, BasePoint(Fraction(0), Fraction(1), Fraction(1)), enumerate_points(m, p))
    P0 = CurvePoint(0, 1, 1)
    assert emb.embed(P0).is_zero
    img = emb.embed(P0.involute(p))
    assert not img.is_zero
    # [2 P0' - W]: A = X^2 and B passes through P0' = (0, -1) with the tangent slope
    assert img.A == (0, 0, 1) and img.B[0] == p - 1
    assert img == J.canonicalize((0, 0, 1), (p - 1, p - 1, 0, 0))


@pytest.mark.parametrize("p", [7, 11, 13])
def test_embedding_involution_sum_is_constant(p):
    m = validate_model(KP)
    J = JacobianFp(m.reduce(p), p)
    emb = Embedder(J, BasePoint(Fraction(1), Fraction(1), Fraction(0)), enumerate_points(m, p))
    sums = {J.add(emb.embed(P), emb.embed(P.involute(p))) for P in emb.points}
    assert len(sums) == 1


@pytest.mark.parametrize("p", [3, 7, 11, 13])
def test_divisor3_matches_base_point_up_to_constant(p):
    # D3 = inf + (0, 1) + (-1, 0) on y^2 = x^5 + 1; compare with the base point at infinity
    m = validate_model(X5)
    J = JacobianFp(m.reduce(p), p)
    pts = enumerate_points(m, p)
    d3 = Embedder(J, Divisor3((0, 1, 1, 0), (1, 1, 0, 0)), pts)
    bp = Embedder(J, BasePoint(Fraction(1), Fraction(0), Fraction(0)), pts)
    diffs = {J.sub(d3.embed(P), bp.embed(P)) for P in bp.points}
    assert len(diffs) == 1


def test_reduce_rational_examples():
    J7 = JacobianFp(tuple(c % 7 for c in KP), 7)
    assert reduce_rational(ZERO, J7) == ZERO
    P = point_pair(KP, (0, 1, 1), (1, 2, 1))  # A = x(x - 1), B = x + 1
    assert P.A == (0, -1, 1) and P.B == (1, 1, 0, 0)
    assert reduce_rational(P, J7) == MumfordElement((0, 6, 1), (1, 1, 0, 0))
    # (-2, 7) and (1, 2) are involutes of each other mod 3
    K = point_pair(KP, (-2, 7, 1), (1, 2, 1))
    assert any(Fraction(b).denominator % 3 == 0 for b in K.B)
    J3 = JacobianFp(tuple(c % 3 for c in KP), 3)
    assert reduce_rational(K, J3) is KERNEL_OF_REDUCTION


@pytest.mark.parametrize("p", [3, 7, 11, 13])
def test_torsion_order_preserved(p):
    T = point_pair(X5, (0, 1, 1), (1, 0, 0))  # [(0, 1) - inf], order 5
    S = canonicalize_q(X5, (1, 1, 0), (0, 0, 0, 0))  # [(-1, 0) - inf], order 2
    R = RationalJacobian(X5)
    assert R.order_divides(T, 5) and R.order_divides(S, 2)
    TS = R.add(T, S)
    J = JacobianFp(tuple(c % p for c in X5), p)
    red = reduce_rational(TS, J)
    assert J.mul(10, red).is_zero
    assert not J.mul(5, red).is_zero and not J.mul(2, red).is_zero


@pytest.mark.parametrize("f, p", [(KP, 11), (X5, 13)])
def test_fast_add_matches_chart_path(f, p, monkeypatch):
    J = JacobianFp(validate_model(f).reduce(p), p)
    rng = random.Random(p)
    els = _elements(J, rng, 40)
    pairs = [(P, Q) for P in els for Q in els[:10]] + [(P, P) for P in els]
    fast = [J.add(P, Q) for P, Q in pairs]
    monkeypatch.setattr(J, "_fast_add", lambda P, Q: None)
    assert [J.add(P, Q) for P, Q in pairs] == fast
