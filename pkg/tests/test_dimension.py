import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from smalehom import fixtures
from smalehom.dimension import (
    TRANSPOSE,
    GroupElement,
    StationaryGroup,
    cylinder_k0_oracle,
    decompose_ds,
    dimension_group,
    element_add,
    element_eq,
    equal_in_limit,
    higher_block_inverse,
    induced_contravariant,
    induced_covariant,
)
from smalehom.errors import EmptyShift, IrreducibilityRequired, NotNonwandering
from smalehom.lattice import identity, matpow, matvec
from smalehom.sft import (
    disjoint_union,
    fiber_product,
    graph_from_adjacency,
    higher_block,
    identity_code,
    make_code,
    structure_map,
)


def test_dimension_group_examples():
    G = dimension_group(fixtures.full_shift(2))
    assert (G.rank, G.H, G.k_star, G.torsion) == (1, [[2]], 0, ())
    G = dimension_group(fixtures.golden_mean())
    assert (G.rank, G.H, G.k_star) == (2, [[1, 1], [1, 0]], 0)
    assert G.limit_invariants() == (2, ())
    G = dimension_group(fixtures.two_cycle())
    assert G.H == [[0, 1], [1, 0]] and G.limit_invariants() == (2, ())


def test_nilpotent_part_dies_in_the_limit():
    G = StationaryGroup(2, (), [[0, 1], [0, 0]])
    assert G.k_star == 2
    assert G.limit_invariants() == (0, ())


def test_element_eq_examples():
    F = dimension_group(fixtures.full_shift(2))
    assert element_eq(F, GroupElement(0, (1,)), GroupElement(1, (2,)))
    assert not element_eq(F, GroupElement(0, (1,)), GroupElement(1, (1,)))
    G = dimension_group(fixtures.golden_mean())
    assert element_eq(G, GroupElement(0, (1, 0)), GroupElement(1, tuple(matvec(G.H, (1, 0)))))


def brute_equal(G, x, y, horizon=12):
    """Equal iff the two vectors meet at some later common stage."""
    n = max(x.stage, y.stage) + horizon
    a = matvec(matpow(G.H, n - x.stage), x.vector)
    b = matvec(matpow(G.H, n - y.stage), y.vector)
    return a == b


small_matrices = st.integers(1, 3).flatmap(
    lambda n: st.lists(st.lists(st.integers(-2, 2), min_size=n, max_size=n), min_size=n, max_size=n))


def elements(n):
    return st.builds(GroupElement, st.integers(0, 3), st.lists(st.integers(-3, 3), min_size=n, max_size=n))


@settings(max_examples=80, deadline=None)
@given(small_matrices, st.data())
def test_element_eq_agrees_with_brute_force(H, data):
    G = StationaryGroup(len(H), (), H)
    x, y = data.draw(elements(G.n)), data.draw(elements(G.n))
    assert element_eq(G, x, y) == brute_equal(G, x, y)


@settings(max_examples=60, deadline=None)
@given(small_matrices, st.data())
def test_element_eq_is_a_congruence(H, data):
    G = StationaryGroup(len(H), (), H)
    x, y, z = (data.draw(elements(G.n)) for _ in range(3))
    assert element_eq(G, x, x)
    assert element_eq(G, x, y) == element_eq(G, y, x)
    if element_eq(G, x, y) and element_eq(G, y, z):
        assert element_eq(G, x, z)
    assert element_eq(G, x, GroupElement(x.stage + 1, tuple(matvec(H, x.vector))))
    if element_eq(G, x, y):
        assert element_eq(G, element_add(G, x, z), element_add(G, y, z))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3).flatmap(
    lambda n: st.lists(st.lists(st.integers(0, 2), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_dimension_group_is_torsion_free(A):
    try:
        g = graph_from_adjacency(A)
    except EmptyShift:
        assume(False)
    assert dimension_group(g).limit_invariants()[1] == ()


def test_induced_identity():
    g = fixtures.golden_mean()
    f = induced_covariant(identity_code(g))
    assert f.matrix == identity(2) and f.stage_shift == 0
    assert induced_contravariant(identity_code(g)).matrix == identity(2)


def test_insert_then_delete_is_identity_in_limit(pairs):
    spec = pairs["TRIV_FULL2"]
    s0 = induced_covariant(structure_map(spec, 0, 0, "insert_y", 0))
    d0 = induced_covariant(structure_map(spec, 1, 0, "delete_y", 0))
    assert d0.compose(s0).is_identity_in_limit()
    assert s0.compose(d0).is_identity_in_limit()
    assert s0.source.limit_invariants() == s0.target.limit_invariants() == (1, ())


def fold_code():
    return make_code(fixtures.two_full_shifts(), fixtures.full_shift(2),
                     {"a1": "a", "a2": "a", "b1": "b", "b2": "b"})


def test_fold_maps():
    assert induced_covariant(fold_code()).matrix == [[1, 1]]
    assert induced_contravariant(fold_code()).matrix == [[1], [1]]


def test_delete_z_pullback_on_pair2(pairs):
    spec = pairs["PAIR2"]
    code = structure_map(spec, 0, 1, "delete_z", 0)
    f = induced_contravariant(code)
    big = fiber_product(spec, 0, 1).graph
    small = fiber_product(spec, 0, 0).graph
    for i, v in enumerate(small.vertices):
        (ys, (zi,)) = v
        col = [row[i] for row in f.matrix]
        expected = [1 if u[1][1] == zi else 0 for u in big.vertices]
        assert col == expected


def test_covariant_functoriality(pairs):
    spec = pairs["PAIR3"]
    a = structure_map(spec, 2, 1, "delete_y", 2)
    b = structure_map(spec, 1, 1, "delete_y", 0)
    whole = induced_covariant(b.compose(a))
    parts = induced_covariant(b).compose(induced_covariant(a))
    assert equal_in_limit(whole, parts)


def test_higher_block_inverse():
    g = fixtures.golden_mean()
    hb = higher_block(g, 3)
    down = induced_covariant(hb.to_base)
    up = higher_block_inverse(hb)
    assert down.compose(up).is_identity_in_limit()
    assert up.compose(down).is_identity_in_limit()


@pytest.mark.parametrize("name,K,rank", [("FULL2", 4, 1), ("GM", 5, 2), ("LOOP", 3, 1), ("CYCLE2", 4, 2)])
def test_cylinder_oracle_matches(name, K, rank):
    res = cylinder_k0_oracle(fixtures.GRAPHS[name](), K)
    assert res.bijective
    assert (res.rank, res.torsion) == (rank, ())


def test_oracle_decides_the_convention():
    g = fixtures.asymmetric()
    assert cylinder_k0_oracle(g, 4).bijective
    assert not cylinder_k0_oracle(g, 4, convention=TRANSPOSE).bijective


def test_oracle_needs_irreducible():
    with pytest.raises(IrreducibilityRequired):
        cylinder_k0_oracle(disjoint_union(fixtures.full_shift(2), fixtures.single_loop()), 3)


def test_decompose_examples():
    pieces = decompose_ds(disjoint_union(fixtures.golden_mean(), fixtures.full_shift(2)))
    assert sorted(p.limit_invariants() for p in pieces) == [(1, ()), (2, ())]
    assert [p.H for p in pieces if p.n == 1] == [[[2]]]
    assert [p.H for p in decompose_ds(fixtures.full_shift(2))] == [[[2]]]
    cyc = decompose_ds(fixtures.two_cycle())
    assert [(p.rank, p.H) for p in cyc] == [(1, [[1]]), (1, [[1]])]


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(0, 2), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_decomposition_ranks_add_up(A):
    try:
        g = graph_from_adjacency(A)
        pieces = decompose_ds(g)
    except (EmptyShift, NotNonwandering):
        assume(False)
    G = dimension_group(g)
    assert sum(p.rank for p in pieces) == G.rank
    assert sum(p.limit_invariants()[0] for p in pieces) == G.limit_invariants()[0]
