"""Stationary inductive limits and the stable dimension group of an edge shift.

A stationary group is ``lim(G, H)`` with ``G = Z^r + Z/d_1 + ... + Z/d_t`` and
connecting map ``H``.  An element is a pair ``(stage, vector)``; stage ``n``
and stage ``n + 1`` are glued by ``v ~ H v``.

For a graph with adjacency ``A`` (``A[u][v]`` counts edges ``u -> v``) the
generator ``e_v`` at stage ``n`` is the class of the cylinder of points whose
future from coordinate 0 is fixed and whose ``n`` preceding edges form a word
starting at ``v``.  Splitting off one more past edge gives
``e_v = sum_{u -> v} e_u`` one stage later, i.e. ``H = A`` acting on column
vectors.  The cylinder oracle below confirms this choice.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Sequence

from .errors import (
    DepthCapExceeded,
    DimensionMismatch,
    IrreducibilityRequired,
)
from .lattice import (
    Lattice,
    identity,
    is_zero,
    matadd,
    matmul,
    matpow,
    matvec,
    smith_form,
    transpose,
)
from .sft import Graph, OneBlockCode, irreducible_decomposition

PLAIN = "plain"
TRANSPOSE = "transpose"


@dataclass
class StationaryGroup:
    rank: int
    torsion: tuple
    H: list
    stage_convention: str = PLAIN
    k_star: int | None = None
    labels: tuple | None = None   # optional names for the coordinates

    def __post_init__(self):
        self.torsion = tuple(self.torsion)
        n = self.n
        if len(self.H) != n or any(len(row) != n for row in self.H):
            raise DimensionMismatch("connecting map has the wrong shape")
        if any(d < 2 for d in self.torsion):
            raise DimensionMismatch("torsion orders must exceed 1")
        if self.k_star is None:
            self.k_star = self._kernel_stabilisation()

    @property
    def n(self) -> int:
        return self.rank + len(self.torsion)

    def torsion_lattice(self) -> Lattice:
        gens = []
        for i, d in enumerate(self.torsion):
            v = [0] * self.n
            v[self.rank + i] = d
            gens.append(v)
        return Lattice.span(self.n, gens)

    def normalise(self, v: Sequence[int]) -> list:
        v = list(v)
        for i, d in enumerate(self.torsion):
            v[self.rank + i] %= d
        return v

    def power(self, k: int) -> list:
        return matpow(self.H, k)

    def kernel_of_power(self, k: int) -> Lattice:
        """``{x : H^k x = 0}`` as a lattice of representatives (contains torsion)."""
        T = self.torsion_lattice()
        return T.preimage(self.power(k), self.n)

    def _kernel_stabilisation(self) -> int:
        k = 0
        prev = self.kernel_of_power(0)
        while True:
            nxt = self.kernel_of_power(k + 1)
            if nxt == prev:
                return k
            prev, k = nxt, k + 1

    def eventual_kernel(self) -> Lattice:
        return self.kernel_of_power(self.k_star)

    def limit_invariants(self) -> tuple:
        """``(rank, torsion)`` of the limit group."""
        K = self.eventual_kernel()
        return quotient_invariants(Lattice.full(self.n), K)

    def reduced(self) -> "StationaryGroup":
        """Isomorphic presentation with injective connecting map."""
        return subquotient_group(self.n, self.H, Lattice.full(self.n),
                                 self.torsion_lattice(), self.stage_convention).group

    def as_dict(self) -> dict:
        rank, tors = self.limit_invariants()
        return {"rank": self.rank, "torsion": list(self.torsion), "H": self.H,
                "stage_convention": self.stage_convention, "k_star": self.k_star,
                "limit": {"rank": rank, "torsion": list(tors)}}


@dataclass(frozen=True)
class GroupElement:
    stage: int
    vector: tuple

    def __post_init__(self):
        if self.stage < 0:
            raise ValueError("stages are nonnegative")
        object.__setattr__(self, "vector", tuple(self.vector))


def element_eq(G: StationaryGroup, x: GroupElement, y: GroupElement) -> bool:
    """Equality in the limit: push both to a common stage past ``k*``."""
    if len(x.vector) != G.n or len(y.vector) != G.n:
        raise DimensionMismatch("element does not live in this group")
    if x.stage < y.stage:
        x, y = y, x
    gap = x.stage - y.stage
    k = G.k_star
    lhs = matvec(G.power(k), x.vector)
    rhs = matvec(G.power(gap + k), y.vector)
    return G.torsion_lattice().contains([a - b for a, b in zip(lhs, rhs)])


def element_add(G: StationaryGroup, x: GroupElement, y: GroupElement) -> GroupElement:
    if x.stage < y.stage:
        x, y = y, x
    w = matvec(G.power(x.stage - y.stage), y.vector)
    return GroupElement(x.stage, tuple(G.normalise([a + b for a, b in zip(x.vector, w)])))


def dimension_group(g: Graph, convention: str = PLAIN) -> StationaryGroup:
    A = g.adjacency()
    H = A if convention == PLAIN else transpose(A)
    return StationaryGroup(len(g.vertices), (), H, convention, labels=g.vertices)


# --------------------------------------------------------------------------
# morphisms


@dataclass
class StationaryMorphism:
    """``(n, v) -> (n + stage_shift, matrix v)``."""

    source: StationaryGroup
    target: StationaryGroup
    matrix: list
    stage_shift: int = 0

    def __post_init__(self):
        if len(self.matrix) != self.target.n or any(len(r) != self.source.n for r in self.matrix):
            raise DimensionMismatch("morphism matrix has the wrong shape")
        if self.stage_shift < 0:
            raise ValueError("stage shift must be nonnegative")

    def check(self) -> bool:
        """``M H_s = H_t M`` up to torsion, and torsion goes to torsion."""
        T = self.target.torsion_lattice()
        lhs = matmul(self.matrix, self.source.H, self.source.n, self.source.n)
        rhs = matmul(self.target.H, self.matrix, self.target.n, self.source.n)
        diff = transpose(matadd(lhs, rhs, -1), self.source.n)
        if not all(T.contains(col) for col in diff):
            return False
        return T.contains_lattice(self.source.torsion_lattice().image(self.matrix, self.target.n))

    def __call__(self, x: GroupElement) -> GroupElement:
        v = matvec(self.matrix, x.vector)
        return GroupElement(x.stage + self.stage_shift, tuple(self.target.normalise(v)))

    def compose(self, first: "StationaryMorphism") -> "StationaryMorphism":
        """``self o first``."""
        M = matmul(self.matrix, first.matrix, first.target.n, first.source.n)
        return StationaryMorphism(first.source, self.target, M, first.stage_shift + self.stage_shift)

    def padded(self, shift: int) -> list:
        """Matrix of the same map written with a larger stage shift."""
        extra = shift - self.stage_shift
        if extra < 0:
            raise ValueError("cannot lower the stage shift")
        return matmul(self.target.power(extra), self.matrix, self.target.n, self.source.n)

    def is_identity_in_limit(self) -> bool:
        if self.source.n != self.target.n:
            return False
        G = self.source
        probe = GroupElement
        return all(element_eq(G, self(probe(0, e)), probe(0, e)) for e in identity(G.n))


def equal_in_limit(f: StationaryMorphism, g: StationaryMorphism) -> bool:
    s = max(f.stage_shift, g.stage_shift)
    k = f.target.k_star
    Hk = f.target.power(k)
    A = matmul(Hk, f.padded(s), f.target.n, f.source.n)
    B = matmul(Hk, g.padded(s), f.target.n, f.source.n)
    T = f.target.torsion_lattice()
    diff = transpose(matadd(A, B, -1), f.source.n)
    return all(T.contains(c) for c in diff)


def _covariant_matrix(code: OneBlockCode):
    dom, cod = code.domain, code.codomain
    M = [[0] * len(dom.vertices) for _ in cod.vertices]
    for u in dom.vertices:
        M[cod.vertex_index(code.vertex_map[u])][dom.vertex_index(u)] += 1
    return M


def _delayed(M0, H1, H2, depth_cap: int, n_src: int, n_tgt: int):
    """Least ``D`` with ``(H2 M0 - M0 H1) H1^D = 0``."""
    defect = matadd(matmul(H2, M0, n_tgt, n_src), matmul(M0, H1, n_src, n_src), -1)
    P = identity(n_src)
    for D in range(depth_cap + 1):
        if is_zero(matmul(defect, P, n_src, n_src)):
            return D, matmul(M0, P, n_src, n_src)
        P = matmul(P, H1, n_src, n_src)
    return None


def induced_covariant(code: OneBlockCode, depth_cap: int = 8,
                      source: StationaryGroup | None = None,
                      target: StationaryGroup | None = None) -> StationaryMorphism:
    """Map ``[E] -> [f(E)]`` on stable dimension groups.

    When every vertex's in-edges map bijectively onto the in-edges of its
    image, cylinders go to cylinders and ``e_u -> e_f(u)`` intertwines.
    Otherwise the vertex map is tried after ``D`` extra past edges, which is
    the effect of recoding to a higher block presentation.
    """
    src = source or dimension_group(code.domain)
    tgt = target or dimension_group(code.codomain)
    M0 = _covariant_matrix(code)
    found = _delayed(M0, src.H, tgt.H, depth_cap, src.n, tgt.n)
    if found is None:
        raise DepthCapExceeded(f"no intertwining delay up to {depth_cap}")
    D, M = found
    return StationaryMorphism(src, tgt, M, D)


def induced_contravariant(code: OneBlockCode, depth_cap: int = 8,
                          source: StationaryGroup | None = None,
                          target: StationaryGroup | None = None) -> StationaryMorphism:
    """Map ``[E] -> [f^{-1}(E)]`` from the codomain's group to the domain's."""
    src = source or dimension_group(code.codomain)
    tgt = target or dimension_group(code.domain)
    N0 = transpose(_covariant_matrix(code), len(code.codomain.vertices))
    found = _delayed(N0, src.H, tgt.H, depth_cap, src.n, tgt.n)
    if found is None:
        raise DepthCapExceeded(f"no intertwining delay up to {depth_cap}")
    D, N = found
    return StationaryMorphism(src, tgt, N, D)


def higher_block_inverse(hb) -> StationaryMorphism:
    """Inverse of the first-edge isomorphism: ``e_v`` goes to the sum of ``(k-1)``-paths ending at ``v``."""
    base = dimension_group(hb.to_base.codomain)
    top = dimension_group(hb.graph)
    g = hb.to_base.codomain
    N = [[0] * base.n for _ in range(top.n)]
    for q in hb.graph.vertices:
        N[hb.graph.vertex_index(q)][g.vertex_index(g.tgt(q[-1]))] += 1
    return StationaryMorphism(base, top, N, hb.k - 1)


# --------------------------------------------------------------------------
# subquotients


@dataclass
class LimitGroup:
    """Limit of ``S/R`` with a coordinate map into its reduced presentation."""

    group: StationaryGroup
    coords: object           # ambient vector in S -> coordinates in ``group``
    eventual_kernel: Lattice


def eventual_kernel(n: int, H, S: Lattice, R: Lattice) -> tuple:
    """Return ``(K, k)`` with ``K = {x in S : H^k x in R}`` stable from ``k`` on."""
    k = 0
    K = R
    P = identity(n)
    while True:
        P = matmul(H, P, n, n)
        nxt = R.preimage(P, n).intersect(S)
        if nxt == K:
            return K, k
        K, k = nxt, k + 1


def quotient_invariants(S: Lattice, R: Lattice) -> tuple:
    """``(rank, torsion)`` of ``S/R`` for lattices ``R <= S``."""
    rel = [S.coords(b) for b in R.basis]
    k = S.rank
    if not rel:
        return k, ()
    sf = smith_form(transpose(rel, k), k, len(rel))
    diag = sf.diagonal
    nonzero = [d for d in diag if d]
    torsion = tuple(d for d in nonzero if d > 1)
    return k - len(nonzero), torsion


def subquotient_group(n: int, H, S: Lattice, R: Lattice, convention: str = PLAIN) -> LimitGroup:
    """Reduced stationary group for ``lim(S/R, H)``.

    The eventual kernel ``K`` is divided out first; on ``S/K`` the map is
    injective, so its invariants are those of the limit.
    """
    K, _ = eventual_kernel(n, H, S, R)
    k = S.rank
    rel = [S.coords(b) for b in K.basis]
    if rel:
        sf = smith_form(transpose(rel, k), k, len(rel))
        U, Uinv = sf.U, sf.Uinv
        diag = sf.diagonal + [0] * (k - len(sf.diagonal))
    else:
        U, Uinv = identity(k), identity(k)
        diag = [0] * k
    free = [i for i in range(k) if diag[i] == 0]
    tors = [i for i in range(k) if diag[i] > 1]
    keep = free + tors
    # H in basis coordinates of S, then in Smith coordinates
    HS = transpose([S.coords(matvec(H, b)) for b in S.basis], k) if k else []
    Hy = matmul(matmul(U, HS, k, k), Uinv, k, k) if k else []
    Hred = [[Hy[i][j] for j in keep] for i in keep]
    torsion = tuple(diag[i] for i in tors)
    for r, i in enumerate(tors):
        d = diag[i]
        Hred[len(free) + r] = [x % d for x in Hred[len(free) + r]]
    group = StationaryGroup(len(free), torsion, Hred, convention, k_star=None)

    def coords(v):
        c = S.coords(v)
        if c is None:
            raise DimensionMismatch("vector is not in the numerator lattice")
        y = matvec(U, c) if k else []
        return group.normalise([y[i] for i in keep])

    return LimitGroup(group, coords, K)


# --------------------------------------------------------------------------
# decompositions


def decompose_ds(g: Graph) -> list:
    """One stationary summand per piece of the spectral decomposition.

    A piece of period ``p`` carries ``H^p`` restricted to its vertices.
    """
    dec = irreducible_decomposition(g)
    A = g.adjacency()
    out = []
    for piece, p in zip(dec.components, dec.periods):
        idx = [g.vertex_index(v) for v in piece]
        Ap = matpow(A, p)
        Hp = [[Ap[i][j] for j in idx] for i in idx]
        out.append(StationaryGroup(len(idx), (), Hp, PLAIN, labels=tuple(piece)))
    return out


# --------------------------------------------------------------------------
# brute-force cylinder oracle


@dataclass
class Tail:
    """Eventually periodic right-infinite path ``prefix + period^inf``."""

    prefix: tuple
    period: tuple

    def edge(self, i: int):
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]


def default_tails(g: Graph) -> list:
    """One tail per period class: a shortest cycle from the class's first vertex."""
    from .sft import period_classes

    tails = []
    for cls in period_classes(g):
        v = cls[0]
        for k in range(1, len(g.vertices) + 1):
            cyc = g.paths(k, start=v, end=v)
            if cyc:
                tails.append(Tail((), cyc[0]))
                break
    return tails


@dataclass
class OracleResult:
    depth: int
    generators: list
    relations: list
    rank: int
    torsion: tuple
    well_defined: bool
    injective: bool
    surjective: bool
    witness: object = None

    @property
    def bijective(self) -> bool:
        return self.well_defined and self.injective and self.surjective


def cylinder_k0_oracle(g: Graph, K: int, tails: Sequence[Tail] | None = None,
                       convention: str = PLAIN) -> OracleResult:
    """Presentation of cylinder classes built from the definitions alone.

    Generators ``C(f, n, w)``: points agreeing with the tail ``f`` from
    coordinate ``n`` on and reading ``w`` just before it, for
    ``n <= |w| <= K``.  Relations: splitting off one more past edge; sliding
    the pin, ``C(f, n, w) = C(f, n+1, w f_n)``; and identification of
    cylinders with equal offset ``n - |w|`` and equal initial vertex (holonomy
    along unstable sets).  The result is compared against the stationary
    presentation ``(e_{s(w)}, |w| - n)``.
    """
    if not g.is_irreducible():
        raise IrreducibilityRequired("the cylinder oracle needs an irreducible graph")
    tails = list(tails) if tails else default_tails(g)
    for tail in tails:
        if not g.is_path(list(tail.prefix) + list(tail.period) + [tail.period[0]]):
            raise DimensionMismatch("tail is not a path")
    gens = []
    for f, tail in enumerate(tails):
        for n in range(K + 1):
            v = g.src(tail.edge(n))
            for length in range(n, K + 1):
                if length == 0:
                    gens.append((f, n, ()))
                else:
                    gens.extend((f, n, w) for w in g.paths(length, end=v))
    index = {x: i for i, x in enumerate(gens)}
    N = len(gens)

    def initial(gen):
        f, n, w = gen
        return g.src(w[0]) if w else g.src(tails[f].edge(n))

    rels = []
    for (f, n, w), i in index.items():
        if len(w) < K:
            r = [0] * N
            r[i] = 1
            for e in g.in_edges(initial((f, n, w))):
                r[index[(f, n, (e,) + w)]] -= 1
            rels.append(r)
            if n + 1 <= K:
                r = [0] * N
                r[i] += 1
                r[index[(f, n + 1, w + (tails[f].edge(n),))]] -= 1
                rels.append(r)
    classes = defaultdict(list)
    for gen, i in index.items():
        classes[(initial(gen), len(gen[2]) - gen[1])].append(i)
    for members in classes.values():
        for a, b in zip(members, members[1:]):
            r = [0] * N
            r[a], r[b] = 1, -1
            rels.append(r)
    R = Lattice.span(N, rels)
    rank, torsion = quotient_invariants(Lattice.full(N), R)

    G = dimension_group(g, convention)
    nv = G.n
    HK = [G.power(k) for k in range(K + 1)]
    Phi = [[0] * N for _ in range(nv)]
    for gen, i in index.items():
        t = len(gen[2]) - gen[1]
        col = [row[g.vertex_index(initial(gen))] for row in HK[K - t]]
        for r in range(nv):
            Phi[r][i] = col[r]
    Kinf = G.kernel_of_power(G.k_star)
    witness = None
    well = True
    for r in R.basis:
        if not Kinf.contains(matvec(Phi, r)):
            well, witness = False, ("relation", [gens[i] for i, c in enumerate(r) if c])
            break
    shallow = [i for gen, i in index.items() if len(gen[2]) <= K - 1]
    inj = True
    if well:
        sub = [[row[i] for i in shallow] for row in Phi]
        ker = Kinf.preimage(sub, len(shallow))
        for b in ker.basis:
            full = [0] * N
            for c, i in zip(b, shallow):
                full[i] = c
            if not R.contains(full):
                inj, witness = False, ("kernel", [gens[i] for i, c in zip(shallow, b) if c])
                break
    image = Lattice.span(nv, [[row[i] for row in Phi] for i in shallow]) + Kinf
    surj = True
    for t in range(K):
        for v in g.vertices:
            target = [row[g.vertex_index(v)] for row in HK[K - t]]
            if not image.contains(target):
                surj = False
                witness = witness or ("missing", (v, t))
    return OracleResult(K, gens, [list(b) for b in R.basis], rank, torsion, well, inj, surj, witness)
