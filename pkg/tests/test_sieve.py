import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mwsieve.oracle import ToyConstraint, brute_A, random_instance
from mwsieve.algebra import AbHom, FiniteAbGroup
from mwsieve.sieve import (
    PROVEN_EMPTY,
    SURVIVORS,
    Failure,
    FGGroup,
    NoBound,
    QPlan,
    SieveContext,
    SieveState,
    coset_vectors,
    expected_size_n,
    find_q_sequence,
    get_subgroup,
    lift_step,
    prepare_lift,
    run_sieve,
    subgroup_hnf,
)


def toy(p, inv, images, xs):
    G = FiniteAbGroup(inv)
    return ToyConstraint(p, G, AbHom(G, tuple(images)), frozenset(xs))


THREE = [toy(3, (2,), [(1,)], [(1,)]), toy(5, (3,), [(1,)], [(0,)])]
HALF = [toy(3, (2,), [(1,)], [(1,)]), toy(5, (4,), [(1,)], [(1,)])]


def test_find_q_sequence_examples():
    plan = find_q_sequence(FGGroup(1), HALF, 4, Fraction(2))
    assert isinstance(plan, QPlan) and plan.qs == ()
    plan = find_q_sequence(FGGroup(1), HALF, 4, Fraction(6, 10))
    assert plan.qs == (2,) and plan.predicted == (1, Fraction(1, 2))
    assert isinstance(find_q_sequence(FGGroup(1), HALF, 4, Fraction(1, 10)), Failure)


def test_three_fixture():
    res = run_sieve(FGGroup(1), THREE, [2, 3])
    assert res.kind == SURVIVORS and res.survivors == [(3,)]
    assert brute_A(FGGroup(1), THREE, 6) == {(3,)}
    assert len(brute_A(FGGroup(2), [], 3)) == 9


def test_empty_X_is_proven_empty_at_stage_zero():
    cons = [THREE[0], toy(7, (5,), [(1,)], [])]
    res = run_sieve(FGGroup(1), cons, [2, 5])
    assert res.kind == PROVEN_EMPTY and len(res.history) == 1 and res.history[0].size == 0


def test_prepare_lift_single_step():
    state = SieveState.initial(SieveContext(FGGroup(1), [toy(3, (2,), [(1,)], [(1,)])]))
    chain = prepare_lift(state, 2)
    assert chain.steps == 1 and chain.contributing == [[0]]


def test_prepare_lift_gap_step():
    # the only constraint has no 5-part, so lifting by 5 is a pure blow-up of index 5^2
    state = SieveState.initial(SieveContext(FGGroup(2), [toy(3, (2,), [(1,), (0,)], [(1,)])]))
    chain = prepare_lift(state, 5)
    assert chain.steps == 1 and chain.contributing == [[]]
    nxt = lift_step(state, chain)
    assert len(nxt.A) == 25


def test_prepare_lift_two_independent_kernels():
    cons = [toy(3, (2,), [(1,), (0,)], [(0,), (1,)]), toy(5, (2,), [(0,), (1,)], [(1,)])]
    state = SieveState.initial(SieveContext(FGGroup(2), cons))
    chain = prepare_lift(state, 2)
    assert chain.steps == 2
    from mwsieve.sieve import _index

    assert [_index(b) // _index(a) for a, b in zip(chain.lattices, chain.lattices[1:])] == [2, 2]


def test_get_subgroup_examples():
    assert get_subgroup(2, lambda v: v[0] % 2 == 0) == [(2, 0), (0, 1)]
    assert get_subgroup(3, lambda v: True) == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    assert get_subgroup(1, lambda v: v[0] % 5 == 0) == [(5,)]
    with pytest.raises(NoBound):
        get_subgroup(1, lambda v: v[0] == 0, max_multiple=50)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 3), st.data())
def test_get_subgroup_order_independent(k, data):
    rows = [[data.draw(st.integers(-3, 3)) for _ in range(k)] for _ in range(k)]
    m = data.draw(st.sampled_from([2, 3, 4, 6]))
    test = lambda v: all(sum(r[i] * v[i] for i in range(k)) % m == 0 for r in rows)  # noqa: E731
    perm = data.draw(st.permutations(range(k)))
    inv = [perm.index(i) for i in range(k)]
    permuted_test = lambda v: test(tuple(v[inv[i]] for i in range(k)))  # noqa: E731
    g1 = get_subgroup(k, test)
    g2 = [tuple(g[inv[i]] for i in range(k)) for g in get_subgroup(k, permuted_test)]
    assert subgroup_hnf(g1, k) == subgroup_hnf(g2, k)
    assert all(test(g) for g in g1)


def _reduce_set(vectors, gamma, n):
    mods = gamma.moduli(n)
    return {tuple(x % m for x, m in zip(v, mods)) for v in vectors}


@pytest.mark.parametrize("seed", range(8))
def test_stagewise_consistency_and_order_independence(seed):
    rng = random.Random(seed)
    gamma, cons = random_instance(rng, max_rank=2)
    qs = [2, 2, 3, 5]
    ctx = SieveContext(gamma, cons)
    state = SieveState.initial(ctx)
    prev = None
    for q in qs:
        chain = prepare_lift(state, q)
        state = lift_step(state, chain)
        vecs = coset_vectors(state)
        assert set(vecs) == brute_A(gamma, cons, state.n)
        if prev is not None:
            assert _reduce_set(vecs, gamma, prev[0]) <= prev[1]
        prev = (state.n, set(vecs))
    final = set(prev[1])
    for perm in [(5, 3, 2, 2), (3, 2, 5, 2)]:
        res = run_sieve(gamma, cons, perm)
        assert set(res.survivors if res.kind == SURVIVORS else []) == final


def test_lift_step_threads_deterministic():
    rng = random.Random(11)
    gamma, cons = random_instance(rng, max_rank=3)
    a = run_sieve(gamma, cons, [2, 3, 2, 5], threads=1)
    b = run_sieve(gamma, cons, [2, 3, 2, 5], threads=4)
    assert a.survivors == b.survivors and [h.size for h in a.history] == [h.size for h in b.history]


def _divisors(m):
    return [d for d in range(1, m + 1) if m % d == 0]


def _prime_factors(n):
    out, q = [], 2
    while n > 1:
        while n % q == 0:
            out.append(q)
            n //= q
        q += 1
    return out


def exhaustive_best(gamma, cons, M, eps1):
    """Smallest possible maximal n over every ordered factorization of every divisor reaching eps1."""
    n_of = {d: expected_size_n(gamma, cons, d) for d in _divisors(M)}
    best = None
    for d in _divisors(M):
        if n_of[d] >= eps1:
            continue
        for seq in set(itertools.permutations(_prime_factors(d))):
            mods, m = [1], 1
            for q in seq:
                m *= q
                mods.append(m)
            worst = max(n_of[x] for x in mods)
            if best is None or worst < best:
                best = worst
    return best


def test_find_q_sequence_matches_exhaustive():
    rng = random.Random(2024)
    checked = 0
    for _ in range(60):
        gamma, cons = random_instance(rng, max_rank=2)
        M = rng.choice([12, 24, 36, 60, 72, 120, 180, 360])
        eps1 = rng.choice([Fraction(1, 10), Fraction(1, 2), Fraction(1), Fraction(3)])
        want = exhaustive_best(gamma, cons, M, eps1)
        plan = find_q_sequence(gamma, cons, M, eps1)
        if want is None:
            assert isinstance(plan, Failure)
            continue
        assert isinstance(plan, QPlan)
        assert plan.predicted[-1] < eps1 and M % plan.modulus == 0
        assert plan.max_n == want
        checked += 1
    assert checked >= 20
