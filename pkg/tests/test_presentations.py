import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smalehom import fixtures
from smalehom.errors import InputError, NotARefinement, NotSeparated
from smalehom.presentations import (
    RegularPartition,
    check_symbolic_presentation,
    cylinder_partition,
    factor_code_mu,
    periodic_point,
    point,
    refine,
    refinement_map,
    refines,
    same_partition,
    separation_witness,
    trivial_partition,
    window_partition,
)

FULL2 = fixtures.full_shift(2)
GM = fixtures.golden_mean()


def test_cell_counts():
    assert len(cylinder_partition(FULL2, 1).cells) == 2
    assert len(cylinder_partition(GM, 1).cells) == 3
    assert len(cylinder_partition(GM, 2).cells) == 5
    assert len(cylinder_partition(FULL2, 2).cells) == 4
    assert cylinder_partition(FULL2, 3).window == (-1, 1)


def test_partition_validation():
    cells = cylinder_partition(FULL2, 1).cells
    with pytest.raises(InputError):
        RegularPartition(FULL2, (0, 0), cells[:1])
    with pytest.raises(InputError):
        RegularPartition(FULL2, (0, 0), (cells[0], cells[0] | cells[1]))
    with pytest.raises(InputError):
        RegularPartition(FULL2, (1, 0), cells)


def test_refine_examples():
    P = window_partition(FULL2, 0, 0)
    assert len(refine(P, P.shifted(-1)).cells) == 4
    assert same_partition(refine(P, P), P)
    assert refines(refine(P, P.shifted(-1)), P)
    assert not refines(P, refine(P, P.shifted(-1)))


def test_presentation_verdicts():
    v = check_symbolic_presentation(cylinder_partition(FULL2, 1), depth=6)
    assert v.certified and v.radii == list(range(7))
    bad = check_symbolic_presentation(trivial_partition(FULL2), depth=4)
    assert not bad.certified and bad.witness is not None
    a, b = bad.witness
    assert a != b


def test_golden_mean_presentation():
    assert check_symbolic_presentation(cylinder_partition(GM, 1), depth=5).certified


def test_factor_code():
    fine = cylinder_partition(FULL2, 2)
    coarse = cylinder_partition(FULL2, 1)
    mu = factor_code_mu(coarse, fine, check_len=8)
    assert mu.letter_map == {0: 0, 1: 0, 2: 1, 3: 1}
    assert mu.words_checked == 1020
    with pytest.raises(NotARefinement):
        factor_code_mu(fine, coarse)


def test_separation_at_coordinate_five():
    P = cylinder_partition(FULL2, 1)
    x = periodic_point("a")
    y = point("aaaaab", "a", "a")
    w = separation_witness(x, y, P)
    assert w.m == 5 and w.cell_x != w.cell_y
    assert w.alpha.locate(x) != w.alpha.locate(y)
    with pytest.raises(NotSeparated):
        separation_witness(x, periodic_point("aa"), P)


def test_separation_prefers_the_nearer_side():
    P = cylinder_partition(FULL2, 1)
    x = periodic_point("a")
    y = point("b", "a", "a", offset=-2)
    assert separation_witness(x, y, P).m == -2


def test_point_outside_shift_rejected():
    with pytest.raises(InputError):
        separation_witness(periodic_point(["a"]), periodic_point(["c"]), cylinder_partition(FULL2, 1))


def partitions(g, max_width=2):
    @st.composite
    def build(draw):
        a = draw(st.integers(-1, 0))
        b = draw(st.integers(a, a + max_width - 1))
        base = window_partition(g, a, b)
        words = [next(iter(c)) for c in base.cells]
        labels = draw(st.lists(st.integers(0, 2), min_size=len(words), max_size=len(words)))
        groups = {}
        for w, lab in zip(words, labels):
            groups.setdefault(lab, set()).add(w)
        return RegularPartition(g, (a, b), tuple(frozenset(s) for s in groups.values()))
    return build()


@settings(max_examples=50, deadline=None)
@given(partitions(FULL2), partitions(FULL2), partitions(FULL2))
def test_refine_is_commutative_and_associative(P, Q, R):
    assert same_partition(refine(P, Q), refine(Q, P))
    assert same_partition(refine(refine(P, Q), R), refine(P, refine(Q, R)))
    PQ = refine(P, Q)
    assert refines(PQ, P) and refines(PQ, Q)
    assert same_partition(refine(P, P), P)


@settings(max_examples=40, deadline=None)
@given(partitions(FULL2), partitions(FULL2))
def test_refinement_map_is_onto(P, Q):
    mu = refinement_map(P, refine(P, Q))
    assert set(mu.values()) == set(range(len(P.cells)))


@settings(max_examples=25, deadline=None)
@given(partitions(FULL2))
def test_refining_a_certified_presentation(Q):
    P = cylinder_partition(FULL2, 1)
    v = check_symbolic_presentation(refine(P, Q), depth=3)
    assert v.certified
    base = check_symbolic_presentation(P, depth=3)
    assert all(r >= s for r, s in zip(v.radii, base.radii))
