from itertools import product

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from smalehom import fixtures
from smalehom.errors import EmptyShift, IndexOutOfRange, NotNonwandering
from smalehom.lattice import matmul
from smalehom.sft import (
    NO,
    YES,
    SUPairSpec,
    build_edge_shift,
    check_resolving,
    disjoint_union,
    fiber_product,
    graph_from_adjacency,
    higher_block,
    identity_code,
    irreducible_decomposition,
    make_code,
    structure_map,
    symmetric_identities,
    transposition,
)


def brute_tuples(spec, L, M):
    """Every tuple of edges whose Y/Z entries are pairwise related."""
    out = set()
    for ys in product(spec.Y.edges, repeat=L + 1):
        for zs in product(spec.Z.edges, repeat=M + 1):
            if all((a, b) in spec.pairs for a in ys for b in zs):
                out.add((ys, zs))
    return out


def test_build_edge_shift_examples():
    g = fixtures.full_shift(2)
    assert (len(g.vertices), len(g.edges)) == (1, 2)
    gm = fixtures.golden_mean()
    assert (len(gm.vertices), len(gm.edges)) == (2, 3)
    with pytest.raises(EmptyShift):
        build_edge_shift(["u", "w"], ["e"], {"e": "u"}, {"e": "w"})


def test_pruning_is_iterated_and_reported():
    report = {}
    g = build_edge_shift(["a", "b", "c"], ["x", "y", "z"],
                         {"x": "a", "y": "a", "z": "b"}, {"x": "a", "y": "b", "z": "c"}, report)
    assert list(g.edges) == ["x"]
    assert report == {"vertices": ["b", "c"], "edges": ["y", "z"]}


@pytest.mark.parametrize("name,L,M,nv,ne", [
    ("TRIV_GM", 1, 0, 2, 3),
    ("PAIR2", 0, 0, 2, 4),
    ("PAIR2", 0, 1, 4, 8),
])
def test_fiber_product_examples(pairs, name, L, M, nv, ne):
    g = fiber_product(pairs[name], L, M).graph
    assert (len(g.vertices), len(g.edges)) == (nv, ne)


@pytest.mark.parametrize("L,M", [(0, 0), (1, 1), (2, 1), (1, 2), (2, 2)])
def test_fiber_product_matches_enumeration(pairs, L, M):
    for spec in pairs.values():
        assert set(fiber_product(spec, L, M).graph.edges) == brute_tuples(spec, L, M)


def test_fiber_product_base_is_pair_relation(pairs):
    for spec in pairs.values():
        assert {(ys[0], zs[0]) for ys, zs in fiber_product(spec, 0, 0).graph.edges} == set(spec.pairs)


@settings(max_examples=25, deadline=None)
@given(st.sets(st.sampled_from(sorted(fixtures.fold_pairs("Z"))), min_size=1))
def test_fiber_product_monotone(subset):
    full = fixtures.pair_fold_z()
    smaller = SUPairSpec(full.Y, full.Z, frozenset(subset))
    for L, M in [(0, 0), (1, 1), (0, 2)]:
        try:
            small = set(fiber_product(smaller, L, M).graph.edges)
        except EmptyShift:
            continue
        assert small <= set(fiber_product(full, L, M).graph.edges)


def test_structure_map_examples(pairs):
    spec = pairs["TRIV_GM"]
    d0 = structure_map(spec, 1, 0, "delete_y", 0)
    assert len(set(d0.edge_map.values())) == len(d0.edge_map)
    t0 = structure_map(spec, 1, 0, "perm_y", transposition(2, 0))
    assert t0.same_map(identity_code(fiber_product(spec, 1, 0).graph))
    for L, M in [(0, 0), (1, 2), (2, 1)]:
        for l in range(L + 1):
            ins = structure_map(spec, L, M, "insert_y", l)
            back = structure_map(spec, L + 1, M, "delete_y", l)
            assert back.compose(ins).same_map(identity_code(fiber_product(spec, L, M).graph))


def test_face_flags(pairs):
    for spec in pairs.values():
        assert structure_map(spec, 2, 1, "delete_y", 1).flags["s_resolving"] == YES
        assert structure_map(spec, 1, 2, "delete_z", 1).flags["u_resolving"] == YES


def test_structure_map_index_errors(pairs):
    spec = pairs["PAIR2"]
    with pytest.raises(IndexOutOfRange):
        structure_map(spec, 1, 0, "delete_y", 2)
    with pytest.raises(IndexOutOfRange):
        structure_map(spec, 0, 0, "delete_z", 0)
    with pytest.raises(IndexOutOfRange):
        structure_map(spec, 1, 0, "perm_y", (0, 0))


def test_check_resolving_examples():
    full = fixtures.full_shift(2)
    flags = check_resolving(identity_code(full))
    assert all(flags[k] == YES for k in ("s_resolving", "u_resolving", "finite_to_one"))
    fold = make_code(fixtures.two_full_shifts(), full, {"a1": "a", "a2": "a", "b1": "b", "b2": "b"})
    flags = check_resolving(fold)
    assert (flags["s_resolving"], flags["u_resolving"], flags["finite_to_one"]) == (YES, YES, YES)
    collapse = make_code(full, fixtures.single_loop(), {"a": "a", "b": "a"})
    assert check_resolving(collapse)["s_resolving"] == NO


def test_collapsing_parallel_edges_is_neither_resolving():
    # p and q run u -> v and share an image: points differing only there agree both ways
    g = build_edge_shift(["u", "v"], ["p", "q", "r", "s"],
                         {"p": "u", "q": "u", "r": "v", "s": "v"},
                         {"p": "v", "q": "v", "r": "u", "s": "v"})
    h = build_edge_shift(["x", "y"], ["P", "R", "S"],
                         {"P": "x", "R": "y", "S": "y"}, {"P": "y", "R": "x", "S": "y"})
    code = make_code(g, h, {"p": "P", "q": "P", "r": "R", "s": "S"})
    flags = check_resolving(code)
    assert flags["s_resolving"] == NO and flags["u_resolving"] == NO


def test_decomposition_examples():
    d = irreducible_decomposition(fixtures.full_shift(2))
    assert (len(d.components), d.alpha, d.periods) == (1, [0], [1])
    d = irreducible_decomposition(fixtures.two_cycle())
    assert len(d.sccs) == 1 and d.periods == [2, 2] and d.alpha == [1, 0]
    d = irreducible_decomposition(disjoint_union(fixtures.golden_mean(), fixtures.full_shift(2)))
    assert len(d.components) == 2 and d.alpha == [0, 1]


def test_decomposition_rejects_wandering_edges():
    g = build_edge_shift(["a", "b"], ["x", "y", "z"], {"x": "a", "y": "a", "z": "b"},
                         {"x": "a", "y": "b", "z": "b"})
    with pytest.raises(NotNonwandering):
        irreducible_decomposition(g)


@st.composite
def essential_graphs(draw):
    n = draw(st.integers(1, 4))
    A = [[draw(st.integers(0, 2)) for _ in range(n)] for _ in range(n)]
    try:
        return graph_from_adjacency(A)
    except EmptyShift:
        assume(False)


@settings(max_examples=60, deadline=None)
@given(essential_graphs())
def test_decomposition_covers_and_cycles(g):
    try:
        d = irreducible_decomposition(g)
    except NotNonwandering:
        assume(False)
    covered = [v for c in d.components for v in c]
    assert sorted(covered, key=repr) == sorted(g.vertices, key=repr)
    where = {v: i for i, c in enumerate(d.components) for v in c}
    for e in g.edges:
        assert where[g.tgt(e)] == d.alpha[where[g.src(e)]]


def test_higher_block_examples():
    full, gm = fixtures.full_shift(2), fixtures.golden_mean()
    assert higher_block(full, 1).graph == full
    hb = higher_block(full, 2)
    assert (len(hb.graph.vertices), len(hb.graph.edges)) == (2, 4)
    A = gm.adjacency()
    assert len(higher_block(gm, 2).graph.edges) == sum(map(sum, matmul(A, A, 2, 2)))


@settings(max_examples=30, deadline=None)
@given(essential_graphs(), st.integers(2, 3), st.integers(0, 2**16))
def test_higher_block_round_trip(g, k, seed):
    hb = higher_block(g, k)
    word = g.paths(k + 3)
    if not word:
        return
    w = word[seed % len(word)]
    blocks = hb.from_base.apply_word(w)
    assert [hb.to_base.edge_map[b] for b in blocks] == list(w[:len(blocks)])


@pytest.mark.parametrize("side", ["y", "z"])
def test_symmetric_identities_hold(pairs, side):
    for name in ("PAIR2", "PAIR3"):
        for L in range(3):
            for M in range(3):
                bad = [r for r, ok in symmetric_identities(pairs[name], L, M, side) if not ok]
                assert not bad, (name, L, M, bad)


def test_identity_checker_detects_a_false_relation(pairs):
    # on PAIR3 the Y-coordinates differ, so swapping them is not the identity
    spec = pairs["PAIR3"]
    t = structure_map(spec, 1, 0, "perm_y", transposition(2, 0))
    assert not t.same_map(identity_code(fiber_product(spec, 1, 0).graph))
    d0 = structure_map(spec, 1, 0, "delete_y", 0)
    d1 = structure_map(spec, 1, 0, "delete_y", 1)
    assert not d0.same_map(d1)
