"""Small named shifts and pairs used in examples, tests and the CLI."""

from __future__ import annotations

from .sft import Graph, SUPairSpec, build_edge_shift


def full_shift(n: int = 2, vertex: str = "v") -> Graph:
    """One vertex with ``n`` loops named ``a, b, c, ...``."""
    names = [chr(ord("a") + i) for i in range(n)]
    return build_edge_shift([vertex], names, {e: vertex for e in names}, {e: vertex for e in names})


def golden_mean() -> Graph:
    src = {"e11": "1", "e12": "1", "e21": "2"}
    tgt = {"e11": "1", "e12": "2", "e21": "1"}
    return build_edge_shift(["1", "2"], src, src, tgt)


def two_cycle() -> Graph:
    return build_edge_shift(["u", "w"], ["uw", "wu"], {"uw": "u", "wu": "w"}, {"uw": "w", "wu": "u"})


def single_loop() -> Graph:
    return build_edge_shift(["v"], ["a"], {"a": "v"}, {"a": "v"})


def asymmetric() -> Graph:
    """Adjacency ``[[1, 2], [1, 0]]``; not symmetric, so it tells ``A`` from ``A^T``."""
    src = {"p": "1", "q": "1", "r": "1", "s": "2"}
    tgt = {"p": "1", "q": "2", "r": "2", "s": "1"}
    return build_edge_shift(["1", "2"], src, src, tgt)


def two_full_shifts() -> Graph:
    """Two disjoint copies of the full 2-shift: loops a1, b1 at v1 and a2, b2 at v2."""
    edges = ["a1", "b1", "a2", "b2"]
    src = {"a1": "v1", "b1": "v1", "a2": "v2", "b2": "v2"}
    return build_edge_shift(["v1", "v2"], edges, src, dict(src))


def fold_pairs(copies_side: str) -> frozenset:
    if copies_side == "Z":
        return frozenset({("a", "a1"), ("a", "a2"), ("b", "b1"), ("b", "b2")})
    return frozenset({("a1", "a"), ("a2", "a"), ("b1", "b"), ("b2", "b")})


def pair_fold_z() -> SUPairSpec:
    """Y = full 2-shift with the identity; Z = two copies folded onto it."""
    return SUPairSpec(full_shift(2), two_full_shifts(), fold_pairs("Z"), False, "PAIR2")


def pair_fold_y() -> SUPairSpec:
    """Y = two copies folded onto the full 2-shift; Z = full 2-shift with the identity."""
    return SUPairSpec(two_full_shifts(), full_shift(2), fold_pairs("Y"), False, "PAIR3")


def trivial(X: Graph, name: str = "") -> SUPairSpec:
    return SUPairSpec.trivial_pair(X, name)


GRAPHS = {
    "FULL2": lambda: full_shift(2),
    "GM": golden_mean,
    "CYCLE2": two_cycle,
    "LOOP": single_loop,
    "ASYM": asymmetric,
    "FULL2x2": two_full_shifts,
}

PAIRS = {
    "TRIV_FULL2": lambda: trivial(full_shift(2), "TRIV(FULL2)"),
    "TRIV_GM": lambda: trivial(golden_mean(), "TRIV(GM)"),
    "PAIR2": pair_fold_z,
    "PAIR3": pair_fold_y,
}
