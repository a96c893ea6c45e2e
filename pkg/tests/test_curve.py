import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mwsieve.curve import (
    BAD_USABLE,
    GOOD,
    UNUSABLE,
    CurvePoint,
    SingularModel,
    classify_reduction,
    count_points,
    enumerate_points,
    validate_model,
)

X5 = (1, 0, 0, 0, 0, 1, 0)  # y^2 = x^5 + 1
X6 = (2, 1, 0, 0, 0, 0, 1)  # y^2 = x^6 + x + 2
NODE7 = (7, 0, 0, 1, 0, 0, 1)  # y^2 = x^6 + x^3 + 7


def test_validate_model():
    with pytest.raises(SingularModel):
        validate_model((0, 0, 0, 0, 0, 0, 1))
    assert validate_model(X5).degree == 5
    assert validate_model(X6).degree == 6


def test_classify_examples():
    assert classify_reduction(validate_model(X5), 3).kind == GOOD
    bad = classify_reduction(validate_model(NODE7), 7)
    assert bad.kind == BAD_USABLE
    nonreg = classify_reduction(validate_model((49, 0, 0, 1, 0, 0, 1)), 7)
    assert (nonreg.kind, nonreg.reason) == (UNUSABLE, "NotRegular")
    assert classify_reduction(validate_model(X6), 2).reason == "EvenPrime"


def test_count_points_examples():
    assert count_points(validate_model(X5), 3, 1) == 4
    assert count_points(validate_model(X5), 3, 2) == 10


def test_enumerate_points_example():
    pts = set(enumerate_points(validate_model(X5), 3))
    assert pts == {CurvePoint(0, 1, 1), CurvePoint(0, 2, 1), CurvePoint(2, 0, 1), CurvePoint(1, 0, 0)}


def test_enumerate_points_empty():
    # 2 * (x^6 - x^2 + 1) takes only the non-residue 2 on F_3, and f6 = 2
    assert enumerate_points((2, 0, -2, 0, 0, 0, 2), 3) == []


def _odd_primes(n):
    return [q for q in range(3, n) if all(q % d for d in range(2, int(q**0.5) + 1))]


@pytest.mark.parametrize("f", [X5, X6, (1, 2, -1, -1, 1, 1, 1), NODE7])
def test_count_matches_enumeration_and_weil(f):
    model = validate_model(f)
    for p in _odd_primes(60):
        n1 = count_points(model, p, 1)
        assert n1 == len(enumerate_points(model, p))
        if classify_reduction(model, p).kind == GOOD:
            assert abs(n1 - (p + 1)) <= 4 * math.sqrt(p)
            assert model.disc % p != 0


def _shift(f, c):
    """Coefficients of F(X + cZ, Z)."""
    out = [0] * 7
    for i, a in enumerate(f):
        for k in range(i + 1):
            out[k] += a * math.comb(i, k) * c ** (i - k)
    return tuple(out)


BAD_FIXTURES = [NODE7, (49, 0, 0, 1, 0, 0, 1), (5, 5, 1, 3, 0, 2, 1), (0, 0, 1, 1, 1, 0, 1)]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(BAD_FIXTURES), st.integers(-20, 20), st.sampled_from([3, 5, 7]))
def test_regularity_invariant_under_shift_and_swap(f, c, p):
    try:
        base = classify_reduction(validate_model(f), p)
    except SingularModel:
        return
    shifted = classify_reduction(validate_model(_shift(f, c)), p)
    swapped = classify_reduction(validate_model(tuple(reversed(f))), p)
    assert shifted.kind == base.kind
    assert swapped.kind == base.kind


def test_bad_fixture_points_include_singular():
    model = validate_model(NODE7)
    pts = enumerate_points(model, 7)
    assert CurvePoint(0, 0, 1) in pts
