import math

import pytest

from mwsieve.jacobian import JacobianFp, point_pair
from mwsieve.oracle import (
    AxiomFailure,
    RationalJacobian,
    TooLarge,
    brute_A,
    brute_elements,
    brute_jacobian,
    jacobian_crosscheck,
    monte_carlo_miss_rate,
)
from mwsieve.sieve import FGGroup

X5 = (1, 0, 0, 0, 0, 1, 0)


@pytest.fixture(scope="module")
def x5_at_3():
    return brute_jacobian(X5, 3)


def _order(bj, a):
    n, x = 1, a
    while x is not None:
        x = bj.table[(x, a)]
        n += 1
    return n


def test_brute_x5_order_and_cyclic(x5_at_3):
    bj = x5_at_3
    assert bj.order == 10
    assert max(_order(bj, a) for a in bj.elements if a is not None) == 10


def test_zero_is_unique_identity(x5_at_3):
    bj = x5_at_3
    ids = [e for e in bj.elements if all(bj.table[(e, a)] == a for a in bj.elements)]
    assert ids == [None]


def test_brute_bad_fixture_order():
    f = (0, 0, 0, 1, 0, 0, 1)  # x^6 + x^3 + 7 mod 7
    J = JacobianFp(f, 7)
    from mwsieve.jacobian import table_order

    assert J.singular_points
    # type l^3 h3 with l = X, h3 = X^3 + Z^3: order q * #E for E: y^2 = X (X^3 + Z^3)
    q = 7
    squares = {x * x % q for x in range(q)}
    chi = lambda a: 0 if a % q == 0 else (1 if a % q in squares else -1)  # noqa: E731
    n_e = sum(1 + chi(x**4 + x) for x in range(q)) + 2  # two points over infinity, leading coeff 1
    assert len(brute_elements(f, q).elements) == table_order(f, q) == q * n_e


def test_axiom_failure_detected():
    # a wrong fallback for sums through the node breaks the group law
    f = (0, 0, 1, 1, 1, 0, 1)
    assert jacobian_crosscheck(f, 5)["mismatches"] == 0
    with pytest.raises(AxiomFailure):
        brute_jacobian(f, 5, add_fallback=lambda a, b: None)


def test_brute_A_examples():
    from tests.test_sieve import THREE

    assert brute_A(FGGroup(1), THREE, 6) == {(3,)}
    assert len(brute_A(FGGroup(1, (2,)), [], 6)) == 12
    with pytest.raises(TooLarge):
        brute_A(FGGroup(3), [], 200)


def test_rational_oracle_torsion_order():
    R = RationalJacobian(X5)
    T = point_pair(X5, (0, 1, 1), (1, 0, 0))
    assert R.order_divides(T, 5) and not R.order_divides(T, 1)
    assert R.add(T, R.neg(T)).is_zero
    assert R.mul(5, T).is_zero


def test_monte_carlo_band_and_reproducible():
    a = monte_carlo_miss_rate(101, 200_000, seed=0)
    b = monte_carlo_miss_rate(101, 200_000, seed=0)
    assert a == b
    assert 0.55 <= a.scaled <= 0.70
    assert abs(a.scaled - 6 / math.pi**2) < 0.1


def test_monte_carlo_degenerate_cases():
    assert monte_carlo_miss_rate(61, 10_000, point_set="all").misses == 0
    assert monte_carlo_miss_rate(61, 10_000, generator=1).misses == 0
