"""Edge shifts, one-block codes and the tuple shifts built from a pair of maps.

Throughout, two points are *stable* when they agree in the far future and
*unstable* when they agree in the far past.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import lru_cache, reduce
from itertools import product
from math import gcd
from typing import Iterable, Mapping, Sequence

import networkx as nx

from .errors import (
    IndexOutOfRange,
    EmptyShift,
    InputError,
    InvalidCode,
    InvalidPairSpec,
    IrreducibilityRequired,
    NotNonwandering,
)


def _sorted(items):
    items = list(items)
    try:
        return sorted(items)
    except TypeError:
        return sorted(items, key=repr)


class Graph:
    """Finite directed multigraph presenting an edge shift.

    Vertices and edges are kept in a canonical sorted order; that order fixes
    the coordinates of every matrix derived from the graph.
    """

    __slots__ = ("vertices", "edges", "_src", "_tgt", "_vindex", "_eindex", "_hash", "_lists")

    def __init__(self, vertices, edges, src: Mapping, tgt: Mapping):
        self.vertices = tuple(_sorted(vertices))
        self.edges = tuple(_sorted(edges))
        self._src = {e: src[e] for e in self.edges}
        self._tgt = {e: tgt[e] for e in self.edges}
        self._vindex = {v: i for i, v in enumerate(self.vertices)}
        self._eindex = {e: i for i, e in enumerate(self.edges)}
        self._hash = None
        self._lists = None

    def src(self, e):
        return self._src[e]

    def tgt(self, e):
        return self._tgt[e]

    def vertex_index(self, v) -> int:
        return self._vindex[v]

    def edge_index(self, e) -> int:
        return self._eindex[e]

    def _key(self):
        return (self.vertices, self.edges,
                tuple(self._src[e] for e in self.edges),
                tuple(self._tgt[e] for e in self.edges))

    def __eq__(self, other):
        return isinstance(other, Graph) and self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        return f"Graph(|V|={len(self.vertices)}, |E|={len(self.edges)})"

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    def in_edges(self, v) -> list:
        return self._adjacency_lists()[1][v]

    def out_edges(self, v) -> list:
        return self._adjacency_lists()[0][v]

    def _adjacency_lists(self):
        if self._lists is None:
            outs, ins = defaultdict(list), defaultdict(list)
            for e in self.edges:
                outs[self._src[e]].append(e)
                ins[self._tgt[e]].append(e)
            self._lists = (outs, ins)
        return self._lists

    def adjacency(self) -> list:
        """``A[i][j]`` = number of edges from vertex ``i`` to vertex ``j``."""
        n = len(self.vertices)
        A = [[0] * n for _ in range(n)]
        for e in self.edges:
            A[self._vindex[self._src[e]]][self._vindex[self._tgt[e]]] += 1
        return A

    def to_networkx(self) -> nx.MultiDiGraph:
        G = nx.MultiDiGraph()
        G.add_nodes_from(self.vertices)
        for e in self.edges:
            G.add_edge(self._src[e], self._tgt[e], key=e)
        return G

    def paths(self, k: int, start=None, end=None) -> list:
        """All paths of exactly ``k`` edges, as tuples of edge ids."""
        outs, _ = self._adjacency_lists()
        if k == 0:
            raise ValueError("use vertices for paths of length zero")
        frontier = [(e,) for e in self.edges if start is None or self._src[e] == start]
        for _ in range(k - 1):
            frontier = [p + (e,) for p in frontier for e in outs[self._tgt[p[-1]]]]
        if end is not None:
            frontier = [p for p in frontier if self._tgt[p[-1]] == end]
        return frontier

    def is_path(self, word: Sequence) -> bool:
        if any(e not in self._src for e in word):
            return False
        return all(self._tgt[a] == self._src[b] for a, b in zip(word, word[1:]))

    def is_irreducible(self) -> bool:
        return nx.is_strongly_connected(self.to_networkx()) if self.vertices else False

    def restrict(self, vertices: Iterable) -> "Graph":
        vs = set(vertices)
        es = [e for e in self.edges if self._src[e] in vs and self._tgt[e] in vs]
        return Graph(vs, es, self._src, self._tgt)

    def as_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [{"id": e, "src": self._src[e], "tgt": self._tgt[e]} for e in self.edges],
        }


def build_edge_shift(vertices: Iterable, edges: Iterable, src: Mapping, tgt: Mapping,
                     report: dict | None = None) -> Graph:
    """Validate the data and prune stranded vertices until none remain.

    If ``report`` is given it receives the removed ``vertices`` and ``edges``.
    """
    vs = set(vertices)
    es = list(edges)
    if len(set(es)) != len(es):
        raise InputError("duplicate edge ids")
    for e in es:
        if e not in src or e not in tgt:
            raise InputError(f"edge {e!r} lacks a source or target")
        if src[e] not in vs or tgt[e] not in vs:
            raise InputError(f"edge {e!r} references an unknown vertex")
    live = set(es)
    while True:
        has_in = {tgt[e] for e in live}
        has_out = {src[e] for e in live}
        keep = has_in & has_out
        pruned = {e for e in live if src[e] in keep and tgt[e] in keep}
        if pruned == live and keep == vs:
            break
        live, vs = pruned, keep
    if report is not None:
        report["vertices"] = _sorted(set(vertices) - vs)
        report["edges"] = _sorted(set(es) - live)
    if not live:
        raise EmptyShift("the edge shift has no bi-infinite paths")
    return Graph(vs, live, src, tgt)


def graph_from_adjacency(A: Sequence[Sequence[int]], names: Sequence | None = None) -> Graph:
    names = list(names) if names is not None else [str(i) for i in range(len(A))]
    src, tgt, edges = {}, {}, []
    for i, row in enumerate(A):
        for j, count in enumerate(row):
            for c in range(count):
                e = f"{names[i]}>{names[j]}" + (f"#{c}" if count > 1 else "")
                edges.append(e)
                src[e], tgt[e] = names[i], names[j]
    return build_edge_shift(names, edges, src, tgt)


def disjoint_union(*graphs: Graph, tags: Sequence | None = None) -> Graph:
    tags = tags or [str(i) for i in range(len(graphs))]
    vs, es, src, tgt = [], [], {}, {}
    for tag, g in zip(tags, graphs):
        vs += [f"{v}{tag}" for v in g.vertices]
        for e in g.edges:
            name = f"{e}{tag}"
            es.append(name)
            src[name], tgt[name] = f"{g.src(e)}{tag}", f"{g.tgt(e)}{tag}"
    return build_edge_shift(vs, es, src, tgt)


# --------------------------------------------------------------------------
# one-block codes

YES, NO, UNKNOWN = "yes", "no", "unknown"
FLAG_NAMES = ("s_resolving", "u_resolving", "finite_to_one", "s_bijective", "u_bijective")


@dataclass
class OneBlockCode:
    domain: Graph
    codomain: Graph
    edge_map: dict
    vertex_map: dict
    flags: dict = field(default_factory=dict)

    def __call__(self, word):
        return tuple(self.edge_map[e] for e in word)

    def compose(self, first: "OneBlockCode") -> "OneBlockCode":
        """``self o first``."""
        if first.codomain != self.domain:
            raise InvalidCode("codes are not composable")
        em = {e: self.edge_map[first.edge_map[e]] for e in first.domain.edges}
        vm = {v: self.vertex_map[first.vertex_map[v]] for v in first.domain.vertices}
        return OneBlockCode(first.domain, self.codomain, em, vm)

    def same_map(self, other: "OneBlockCode") -> bool:
        return (self.domain == other.domain and self.codomain == other.codomain
                and self.edge_map == other.edge_map)


def make_code(domain: Graph, codomain: Graph, edge_map: Mapping) -> OneBlockCode:
    """Check that ``edge_map`` is a graph homomorphism and derive the vertex map."""
    em = {}
    vm = {}
    for e in domain.edges:
        if e not in edge_map:
            raise InvalidCode(f"edge {e!r} has no image")
        f = edge_map[e]
        if f not in codomain._src:
            raise InvalidCode(f"image {f!r} of {e!r} is not an edge of the codomain")
        em[e] = f
        for v, w in ((domain.src(e), codomain.src(f)), (domain.tgt(e), codomain.tgt(f))):
            if vm.setdefault(v, w) != w:
                raise InvalidCode(f"vertex {v!r} would map to both {vm[v]!r} and {w!r}")
    return OneBlockCode(domain, codomain, em, vm)


def identity_code(g: Graph) -> OneBlockCode:
    code = make_code(g, g, {e: e for e in g.edges})
    code.flags = {k: YES for k in FLAG_NAMES}
    return code


def _pair_graph(code: OneBlockCode) -> nx.DiGraph:
    """Pairs of edges with equal image, as a graph on pairs of vertices."""
    g = code.domain
    by_image = defaultdict(list)
    for e in g.edges:
        by_image[code.edge_map[e]].append(e)
    P = nx.DiGraph()
    P.add_nodes_from((u, v) for u in g.vertices for v in g.vertices)
    for es in by_image.values():
        for e, f in product(es, repeat=2):
            a, b = (g.src(e), g.src(f)), (g.tgt(e), g.tgt(f))
            P.add_edge(a, b)
            P[a][b].setdefault("pairs", []).append((e, f))
    return P


def _on_cycle_closure(P: nx.DiGraph, forward: bool) -> set:
    """Nodes reachable from a cycle (``forward``) or reaching one (backward)."""
    cyc = set()
    for comp in nx.strongly_connected_components(P):
        node = next(iter(comp))
        if len(comp) > 1 or P.has_edge(node, node):
            cyc |= comp
    seen = set(cyc)
    queue = deque(cyc)
    step = P.successors if forward else P.predecessors
    while queue:
        x = queue.popleft()
        for y in step(x):
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def _in_bijective(code: OneBlockCode) -> bool:
    g, h = code.domain, code.codomain
    for v in g.vertices:
        imgs = sorted((code.edge_map[e] for e in g.in_edges(v)), key=repr)
        if imgs != sorted(h.in_edges(code.vertex_map[v]), key=repr):
            return False
    return True


def _out_bijective(code: OneBlockCode) -> bool:
    g, h = code.domain, code.codomain
    for v in g.vertices:
        imgs = sorted((code.edge_map[e] for e in g.out_edges(v)), key=repr)
        if imgs != sorted(h.out_edges(code.vertex_map[v]), key=repr):
            return False
    return True


def check_resolving(code: OneBlockCode) -> dict:
    """Decide the resolving flags exactly from the pair graph of the code.

    A pair of distinct points with equal image that agree in the future must
    last differ on two edges with a common target; such a pair exists iff some
    off-diagonal pair edge into the diagonal has an infinite past in the pair
    graph.  The unstable case is the time reversal.
    """
    P = _pair_graph(code)
    back_inf = _on_cycle_closure(P, forward=True)   # has a bi-infinite past
    fwd_inf = _on_cycle_closure(P, forward=False)   # has an infinite future
    s_res = u_res = True
    for a, b, data in P.edges(data=True):
        for e, f in data["pairs"]:
            if e == f:
                continue
            if b[0] == b[1] and a in back_inf:
                s_res = False
            if a[0] == a[1] and b in fwd_inf:
                u_res = False
    # diamonds: diagonal -> off-diagonal -> diagonal
    off = nx.DiGraph()
    for a, b, data in P.edges(data=True):
        if a[0] != a[1] and b[0] != b[1]:
            off.add_edge(a, b)
    starts = defaultdict(set)
    for a, b, data in P.edges(data=True):
        if a[0] == a[1] and b[0] != b[1]:
            starts[a[0]].add(b)
    finite = True
    scc_of = {}
    for i, comp in enumerate(nx.strongly_connected_components(code.domain.to_networkx())):
        for v in comp:
            scc_of[v] = i
    diamond_any = False
    for u, firsts in starts.items():
        reach = set(firsts)
        for x in firsts:
            if x in off:
                reach |= nx.descendants(off, x)
        for a, b, data in P.edges(data=True):
            if a in reach and b[0] == b[1]:
                diamond_any = True
                if scc_of[u] == scc_of[b[0]]:
                    finite = False
    f2o = YES if not diamond_any else (NO if not finite else UNKNOWN)
    flags = {
        "s_resolving": YES if s_res else NO,
        "u_resolving": YES if u_res else NO,
        "finite_to_one": f2o,
        "s_bijective": YES if _in_bijective(code) else (NO if not s_res else UNKNOWN),
        "u_bijective": YES if _out_bijective(code) else (NO if not u_res else UNKNOWN),
    }
    code.flags = dict(flags)
    return flags


@dataclass
class SlidingBlockCode:
    """Code ``y_i = block_map[x_{i-memory} ... x_{i+anticipation}]``."""

    domain: Graph
    codomain: Graph
    memory: int
    anticipation: int
    block_map: dict

    def apply_word(self, word: Sequence) -> tuple:
        w = self.memory + self.anticipation + 1
        return tuple(self.block_map[tuple(word[i:i + w])] for i in range(len(word) - w + 1))


@dataclass
class HigherBlock:
    graph: Graph
    k: int
    to_base: OneBlockCode          # first-edge code
    from_base: SlidingBlockCode    # inverse conjugacy


def higher_block(g: Graph, k: int) -> HigherBlock:
    """``k``-block presentation: vertices are ``(k-1)``-paths, edges ``k``-paths."""
    if k < 1:
        raise ValueError("block length must be positive")
    if k == 1:
        return HigherBlock(g, 1, identity_code(g), SlidingBlockCode(g, g, 0, 0, {(e,): e for e in g.edges}))
    verts = g.paths(k - 1)
    edges = g.paths(k)
    src = {p: p[:-1] for p in edges}
    tgt = {p: p[1:] for p in edges}
    hb = Graph(verts, edges, src, tgt)
    to_base = make_code(hb, g, {p: p[0] for p in edges})
    check_resolving(to_base)
    from_base = SlidingBlockCode(g, hb, 0, k - 1, {p: p for p in edges})
    return HigherBlock(hb, k, to_base, from_base)


# --------------------------------------------------------------------------
# decomposition


@dataclass
class Decomposition:
    sccs: list                 # vertex sets of the irreducible components
    components: list           # period classes, the pieces cycled by the shift
    alpha: list                # alpha[i] = index of the piece the shift sends piece i to
    periods: list              # period of the cycle containing piece i

    @property
    def cycles(self) -> list:
        seen, out = set(), []
        for i in range(len(self.components)):
            if i in seen:
                continue
            cyc, j = [], i
            while j not in seen:
                seen.add(j)
                cyc.append(j)
                j = self.alpha[j]
            out.append(cyc)
        return out


def period_classes(g: Graph) -> list:
    """Vertex classes of an irreducible graph, ordered along the shift."""
    root = g.vertices[0]
    level = {root: 0}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for e in g.out_edges(v):
            w = g.tgt(e)
            if w not in level:
                level[w] = level[v] + 1
                queue.append(w)
    p = reduce(gcd, (level[g.src(e)] + 1 - level[g.tgt(e)] for e in g.edges), 0)
    p = abs(p)
    classes = [[] for _ in range(p)]
    for v in g.vertices:
        classes[level[v] % p].append(v)
    return [_sorted(c) for c in classes]


def irreducible_decomposition(g: Graph) -> Decomposition:
    G = g.to_networkx()
    comp_of = {}
    sccs = []
    for comp in sorted((_sorted(c) for c in nx.strongly_connected_components(G)), key=repr):
        for v in comp:
            comp_of[v] = len(sccs)
        sccs.append(comp)
    for e in g.edges:
        if comp_of[g.src(e)] != comp_of[g.tgt(e)]:
            raise NotNonwandering(f"edge {e!r} joins two different components")
    components, alpha, periods = [], [], []
    for comp in sccs:
        classes = period_classes(g.restrict(comp))
        base = len(components)
        p = len(classes)
        for j, cls in enumerate(classes):
            components.append(cls)
            alpha.append(base + (j + 1) % p)
            periods.append(p)
    return Decomposition(sccs, components, alpha, periods)


def require_irreducible(g: Graph) -> None:
    if not g.is_irreducible():
        raise IrreducibilityRequired("this operation needs an irreducible graph")


# --------------------------------------------------------------------------
# pairs of maps and tuple shifts


@dataclass(frozen=True)
class SUPairSpec:
    """Symbolic model of a pair of maps onto a common base.

    ``pairs`` lists the (Y-edge, Z-edge) couples with the same image in the
    base.  ``trivial`` records that Y = Z = X with the diagonal relation.
    """

    Y: Graph
    Z: Graph
    pairs: frozenset
    trivial: bool = False
    name: str = ""

    def __post_init__(self):
        for a, b in self.pairs:
            if a not in self.Y._src:
                raise InvalidPairSpec(f"{a!r} is not an edge of Y")
            if b not in self.Z._src:
                raise InvalidPairSpec(f"{b!r} is not an edge of Z")
        if not self.pairs:
            raise InvalidPairSpec("empty pair relation")

    @classmethod
    def trivial_pair(cls, X: Graph, name: str = "") -> "SUPairSpec":
        return cls(X, X, frozenset((e, e) for e in X.edges), True, name)

    @classmethod
    def from_maps(cls, Y: Graph, Z: Graph, pi_s: OneBlockCode, pi_u: OneBlockCode,
                  name: str = "") -> "SUPairSpec":
        if pi_s.codomain != pi_u.codomain:
            raise InvalidPairSpec("the two maps have different targets")
        pairs = frozenset((a, b) for a in Y.edges for b in Z.edges
                          if pi_s.edge_map[a] == pi_u.edge_map[b])
        return cls(Y, Z, pairs, False, name)

    def __hash__(self):
        return hash((self.Y, self.Z, self.pairs, self.trivial))


@dataclass
class TupleShift:
    spec: SUPairSpec
    L: int
    M: int
    graph: Graph


@lru_cache(maxsize=512)
def fiber_product(spec: SUPairSpec, L: int, M: int) -> TupleShift:
    """The shift of tuples (y_0..y_L, z_0..z_M) with every (y_l, z_m) paired.

    Vertex and edge ids are pairs ``(ys, zs)`` of tuples.
    """
    if L < 0 or M < 0:
        raise ValueError("tuple indices must be nonnegative")
    Y, Z = spec.Y, spec.Z
    partners = defaultdict(set)
    for a, b in spec.pairs:
        partners[b].add(a)
    layer = [((b,), frozenset(partners[b])) for b in Z.edges if partners[b]]
    for _ in range(M):
        layer = [(t + (b,), S & partners[b]) for t, S in layer for b in Z.edges
                 if S & partners[b]]
    edges, src, tgt = [], {}, {}
    for zs, S in layer:
        zsrc = tuple(Z.src(b) for b in zs)
        ztgt = tuple(Z.tgt(b) for b in zs)
        for ys in product(_sorted(S), repeat=L + 1):
            e = (ys, zs)
            edges.append(e)
            src[e] = (tuple(Y.src(a) for a in ys), zsrc)
            tgt[e] = (tuple(Y.tgt(a) for a in ys), ztgt)
    verts = set(src.values()) | set(tgt.values())
    return TupleShift(spec, L, M, build_edge_shift(verts, edges, src, tgt))


# tuple maps; each acts the same way on vertex ids and edge ids

def _delete(t, i):
    return t[:i] + t[i + 1:]


def _insert_copy(t, i, j):
    """Copy entry ``i`` into position ``i + j`` (``j = 1`` is plain doubling)."""
    return t[:i + j] + (t[i],) + t[i + j:]


def _permute(t, perm):
    return tuple(t[p] for p in perm)


STRUCTURE_KINDS = ("delete_y", "delete_z", "insert_y", "insert_z",
                   "perm_y", "perm_z", "extra_y", "extra_z")


def _target_shape(kind, L, M, args):
    if kind == "delete_y":
        (l,) = args
        if not 0 <= l <= L or L == 0:
            raise IndexOutOfRange("bad face index")
        return L - 1, M, lambda ys: _delete(ys, l), None
    if kind == "delete_z":
        (m,) = args
        if not 0 <= m <= M or M == 0:
            raise IndexOutOfRange("bad face index")
        return L, M - 1, None, lambda zs: _delete(zs, m)
    if kind == "insert_y":
        (l,) = args
        if not 0 <= l <= L:
            raise IndexOutOfRange("bad degeneracy index")
        return L + 1, M, lambda ys: _insert_copy(ys, l, 1), None
    if kind == "insert_z":
        (m,) = args
        if not 0 <= m <= M:
            raise IndexOutOfRange("bad degeneracy index")
        return L, M + 1, None, lambda zs: _insert_copy(zs, m, 1)
    if kind == "extra_y":
        l, j = args
        if not (0 <= l <= L and 1 <= j <= L + 1 - l):
            raise IndexOutOfRange("bad extra degeneracy index")
        return L + 1, M, lambda ys: _insert_copy(ys, l, j), None
    if kind == "extra_z":
        m, j = args
        if not (0 <= m <= M and 1 <= j <= M + 1 - m):
            raise IndexOutOfRange("bad extra degeneracy index")
        return L, M + 1, None, lambda zs: _insert_copy(zs, m, j)
    if kind == "perm_y":
        (perm,) = args
        if sorted(perm) != list(range(L + 1)):
            raise IndexOutOfRange("not a permutation")
        return L, M, lambda ys: _permute(ys, perm), None
    if kind == "perm_z":
        (perm,) = args
        if sorted(perm) != list(range(M + 1)):
            raise IndexOutOfRange("not a permutation")
        return L, M, None, lambda zs: _permute(zs, perm)
    raise ValueError(f"unknown structure map {kind!r}")


def structure_map(spec: SUPairSpec, L: int, M: int, kind: str, *args) -> OneBlockCode:
    """Face, degeneracy or permutation map out of the tuple shift at ``(L, M)``.

    Permutations act by ``(y_0..y_L) -> (y_perm[0], .., y_perm[L])``.
    """
    L2, M2, fy, fz = _target_shape(kind, L, M, args)
    dom = fiber_product(spec, L, M).graph
    cod = fiber_product(spec, L2, M2).graph

    def f(t):
        ys, zs = t
        return (fy(ys) if fy else ys, fz(zs) if fz else zs)

    em = {}
    for e in dom.edges:
        img = f(e)
        if img not in cod._src:
            raise InvalidCode(f"{kind} sends {e!r} outside the target shift")
        em[e] = img
    vm = {v: f(v) for v in dom.vertices}
    code = OneBlockCode(dom, cod, em, vm)
    s_bij, u_bij = _in_bijective(code), _out_bijective(code)
    code.flags = {"s_resolving": YES if s_bij else UNKNOWN,
                  "u_resolving": YES if u_bij else UNKNOWN,
                  "finite_to_one": YES if (s_bij or u_bij) else UNKNOWN,
                  "s_bijective": YES if s_bij else UNKNOWN,
                  "u_bijective": YES if u_bij else UNKNOWN}
    return code


def transposition(n: int, i: int, j: int | None = None) -> tuple:
    """The permutation of ``range(n)`` swapping ``i`` and ``j`` (default ``i+1``)."""
    j = i + 1 if j is None else j
    p = list(range(n))
    p[i], p[j] = p[j], p[i]
    return tuple(p)


def perm_sign(perm: Sequence[int]) -> int:
    seen, sign = set(), 1
    for i in range(len(perm)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


# --------------------------------------------------------------------------
# simplicial and symmetric identities


def _apply_chain(spec: SUPairSpec, L: int, M: int, ops) -> OneBlockCode:
    """Compose structure maps, applied left to right, starting from cell ``(L, M)``."""
    code = None
    for kind, *args in ops:
        step = structure_map(spec, L, M, kind, *args)
        L, M = _target_shape(kind, L, M, tuple(args))[:2]
        code = step if code is None else step.compose(code)
    return code


def symmetric_identities(spec: SUPairSpec, L: int, M: int, side: str = "y") -> list:
    """Check the face, degeneracy and transposition relations on one side.

    Returns ``(relation, ok)`` pairs; every relation is an equality of edge maps.
    """
    n = L if side == "y" else M
    d, s, p, x = (f"delete_{side}", f"insert_{side}", f"perm_{side}", f"extra_{side}")

    def t(size, i):
        return (p, transposition(size + 1, i))

    out = []

    def rel(name, lhs, rhs):
        a = _apply_chain(spec, L, M, lhs)
        b = _apply_chain(spec, L, M, rhs) if rhs else identity_code(fiber_product(spec, L, M).graph)
        out.append((name, a.same_map(b)))

    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            if n >= 2:
                rel(f"d{i} d{j} = d{j-1} d{i}", [(d, j), (d, i)], [(d, i), (d, j - 1)])
    for i in range(n + 1):
        for j in range(i, n + 1):
            rel(f"s{i} s{j} = s{j+1} s{i}", [(s, j), (s, i)], [(s, i), (s, j + 1)])
    for j in range(n + 1):
        for i in range(n + 2):
            name = f"d{i} s{j}"
            if i < j:
                rel(name, [(s, j), (d, i)], [(d, i), (s, j - 1)])
            elif i in (j, j + 1):
                rel(name, [(s, j), (d, i)], None)
            else:
                rel(name, [(s, j), (d, i)], [(d, i - 1), (s, j)])
    for i in range(n):
        rel(f"t{i} t{i} = id", [t(n, i), t(n, i)], None)
        if i + 1 < n:
            rel(f"braid {i}", [t(n, i), t(n, i + 1), t(n, i)], [t(n, i + 1), t(n, i), t(n, i + 1)])
        rel(f"d{i} t{i} = d{i+1}", [t(n, i), (d, i)], [(d, i + 1)])
        rel(f"d{i+1} t{i} = d{i}", [t(n, i), (d, i + 1)], [(d, i)])
        for j in range(n + 1):
            if j > i + 1:
                rel(f"d{j} t{i} = t{i} d{j}", [t(n, i), (d, j)], [(d, j), t(n - 1, i)])
            elif j < i:
                rel(f"d{j} t{i} = t{i-1} d{j}", [t(n, i), (d, j)], [(d, j), t(n - 1, i - 1)])
        rel(f"s{i} t{i} = t{i+1} t{i} s{i+1}", [t(n, i), (s, i)], [(s, i + 1), t(n + 1, i), t(n + 1, i + 1)])
        rel(f"t{i} s{i} = s{i}", [(s, i), t(n + 1, i)], [(s, i)])
        for j in range(n + 1):
            if j < i:
                rel(f"s{j} t{i} = t{i+1} s{j}", [t(n, i), (s, j)], [(s, j), t(n + 1, i + 1)])
            elif j > i + 1:
                rel(f"s{j} t{i} = t{i} s{j}", [t(n, i), (s, j)], [(s, j), t(n + 1, i)])
    for l in range(n + 1):
        rel(f"e{l},1 = s{l}", [(x, l, 1)], [(s, l)])
        for j in range(1, n + 2 - l):
            rel(f"d{l+j} e{l},{j} = id", [(x, l, j), (d, l + j)], None)
            if j + 1 <= n + 1 - l:
                rel(f"e{l},{j+1} = t{l+j} e{l},{j}", [(x, l, j + 1)], [(x, l, j), t(n + 1, l + j)])
    return out
