import itertools
from dataclasses import dataclass
from fractions import Fraction

import pytest

from mwsieve.algebra import AbHom, FactoredInt, FiniteAbGroup
from mwsieve.cli import load_document
from mwsieve.curve import count_points, validate_model
from mwsieve.localdata import (
    EARLY_CONTRADICTION,
    EXHAUSTED,
    LocalConstraint,
    Skip,
    candidate_moduli,
    expected_size,
    make_constraint,
    restrict_to_image,
    scan,
)
from mwsieve.sieve import FGGroup


@dataclass(frozen=True)
class Toy:
    p: int
    G: FiniteAbGroup
    phi: AbHom
    X: frozenset


def toy(p, inv, images, xs):
    G = FiniteAbGroup(inv)
    return Toy(p, G, AbHom(G, tuple(images)), frozenset(xs))


@pytest.fixture(scope="module")
def rank1(request):
    import json
    from pathlib import Path

    data = json.loads((Path(__file__).parent / "fixtures" / "known_point_rank1.json").read_text())
    doc = load_document(data)
    return validate_model(doc.f), doc.mw_input()


@pytest.fixture(scope="module")
def rank3():
    import json
    from pathlib import Path

    data = json.loads((Path(__file__).parent / "fixtures" / "known_point.json").read_text())
    doc = load_document(data)
    return validate_model(doc.f), doc.mw_input()


def test_expected_size_examples():
    assert expected_size(FGGroup(2), [], 6) == 36
    c1 = toy(3, (2,), [(1,)], [(1,)])
    assert expected_size(FGGroup(1), [c1], 2) == 1
    c2 = toy(5, (4,), [(1,)], [(1,)])
    assert expected_size(FGGroup(1), [c1, c2], 2) == Fraction(1, 2)
    # torsion: #(Gamma/N Gamma) = N^r * prod gcd(t_i, N)
    assert expected_size(FGGroup(1, (2, 6)), [], 4) == 4 * 2 * 2


def test_expected_size_threshold_crossing():
    # Gamma = Z^2, each constraint keeps 10 of the 100 classes mod 10
    gens = [(1, 0), (0, 1)]
    xs = [(i, 0) for i in range(10)]
    cons = [toy(3 + 2 * k, (10, 10), gens, xs) for k in range(6)]
    for k in range(7):
        assert expected_size(FGGroup(2), cons[:k], 10) == Fraction(100, 10**k)
    first = next(k for k in range(7) if expected_size(FGGroup(2), cons[:k], 10) < Fraction(1, 100))
    assert first == 5


def test_expected_size_multiplicative_and_monotone():
    gamma = FGGroup(1, (2,))
    a = [toy(3, (2, 4), [(1, 1), (1, 0)], [(0, 1), (1, 3)]), toy(5, (6,), [(1,), (3,)], [(0,), (2,), (5,)])]
    b = [toy(7, (4,), [(1,), (2,)], [(1,)])]
    for n in (2, 4, 6, 12):
        base = expected_size(gamma, [], n)
        ea, eb, eab = (expected_size(gamma, s, n) for s in (a, b, a + b))
        assert eab * base == ea * eb
        assert eab <= ea


def test_candidate_moduli_chain():
    groups = [FiniteAbGroup(inv) for inv in [(2, 4), (6,), (2, 12), (3, 9), (2, 2, 4), (4, 8)]]
    mods = candidate_moduli(groups, 1)
    defined = [m.value for m in mods if m is not None]
    # j increasing means the index decreases, so each modulus divides the previous one
    assert all(a % b == 0 for a, b in zip(defined, defined[1:]))
    assert candidate_moduli(groups[:1], 1) == [None] * 4


def test_make_constraint_surjective_case(rank3):
    curve, mw = rank3
    c = make_constraint(curve, mw, 11)
    assert isinstance(c, LocalConstraint)
    assert c.G == c.full_group and len(c.X) == len(c.full_X) == c.n_points


def test_make_constraint_restricts_to_image(rank1):
    curve, mw = rank1
    c = make_constraint(curve, mw, 7)
    assert c.G.order < c.full_group.order
    assert len(c.X) < len(c.full_X)
    assert all(c.G.reduce(x) == x for x in c.X)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 29, 41])
def test_constraint_invariants(rank1, p):
    curve, mw = rank1
    c = make_constraint(curve, mw, p)
    assert not isinstance(c, Skip)
    assert len(c.X) <= len(c.full_X) <= count_points(curve, p)
    assert c.order % c.G.order == 0
    assert c.full_group.order == c.order


def test_restricted_group_keeps_expected_size_honest():
    """G_p inside X'_p: the restricted constraint carries no information, G'_p would pretend it does."""
    full = AbHom(FiniteAbGroup((6,)), ((3,),))
    full_x = {(0,), (1,), (3,)}
    G, phi, X = restrict_to_image(full, full_x)
    assert G.order == 2 and len(X) == 2
    gamma = FGGroup(1)
    wide = Toy(7, full.target, full, frozenset(full_x))
    narrow = Toy(7, G, phi, X)
    for n in (3, 6, 12):
        assert expected_size(gamma, [narrow], n) == n
        assert expected_size(gamma, [wide], n) < expected_size(gamma, [narrow], n)


def test_restriction_drops_points_outside_image(rank1):
    curve, mw = rank1
    c = make_constraint(curve, mw, 7)
    G, phi, X = restrict_to_image(c.full_phi, c.full_X)
    assert (G, phi, X) == (c.G, c.phi, c.X)
    inside = {y for y in c.full_X if y in {c.full_phi((k,)) for k in range(c.full_group.exponent)}}
    assert len(X) == len(inside) < len(c.full_X)


def test_scan_early_contradiction(fixture_doc):
    doc = load_document(fixture_doc("contradiction.json"))
    rep = scan(validate_model(doc.f), doc.mw_input())
    assert rep.stop_reason == EARLY_CONTRADICTION
    assert rep.last_prime == 7 and [c.p for c in rep.constraints] == [7]
    assert not rep.constraints[-1].X
    assert {s.p for s in rep.skipped} == {3, 5}


def test_scan_csv_and_resume(rank1):
    curve, mw = rank1
    rep = scan(curve, mw, eps=Fraction(1, 10**6), max_prime=60)
    assert rep.stop_reason == EXHAUSTED and rep.modulus is not None
    assert len(rep.csv_rows()) == len(rep.constraints)
    lines = rep.to_csv().strip().splitlines()
    assert lines[0] == "prime,kind,order,image_size,n_0,n_1,n_2,n_3"
    assert len(lines) == len(rep.constraints) + 1
    before = list(rep.constraints)
    rep2 = scan(curve, mw, eps=Fraction(1, 10**6), max_prime=140, resume=rep)
    assert rep2.constraints[: len(before)] == before
    assert len(rep2.constraints) > len(before)


def test_scan_threads_do_not_change_result(rank1):
    curve, mw = rank1
    a = scan(curve, mw, max_prime=80, threads=1)
    b = scan(curve, mw, max_prime=80, threads=4)
    assert a.to_csv() == b.to_csv() and a.modulus == b.modulus
