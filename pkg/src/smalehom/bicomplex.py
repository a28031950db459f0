"""Double complexes of stable dimension groups attached to a pair of maps.

Cell ``(L, M)`` is the stable dimension group of the tuple shift with
``L + 1`` Y-coordinates and ``M + 1`` Z-coordinates.  The horizontal map
lowers ``L`` through the covariant faces; the vertical map raises ``M``
through the contravariant faces.  Every variant of the complex shares the same
ambient lattices and matrices and differs only in which subquotient ``S/R`` of
each cell it keeps:

=========  ==================  ==================
variant    numerator ``S``     relations ``R``
=========  ==================  ==================
``C``      everything          0
``A``      antisymmetric part  0
``Q``      everything          ``B``
``QA``     antisymmetric part  antisymmetric ``B``
=========  ==================  ==================

``A`` is the limit-sense solution set of ``a = sgn(b) b(a)`` over
permutations ``b`` of the Z-coordinates; ``B`` is spanned by elements fixed by
a transposition of the Y-coordinates together with ``a - sgn(a) a(x)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .dimension import (
    StationaryGroup,
    dimension_group,
    eventual_kernel,
    induced_contravariant,
    induced_covariant,
)
from .errors import (
    AcyclicityFailure,
    DepthCapExceeded,
    BoundNotFound,
    NotABicomplex,
    SignConventionFailure,
)
from .homology import (
    ChainMap,
    FilteredComplex,
    QuasiIsoReport,
    StationaryComplex,
    Term,
    homology,
    is_quasi_iso,
)
from .lattice import (
    Lattice,
    identity,
    is_zero,
    matadd,
    matmul,
    matvec,
    transpose,
)
from .sft import SUPairSpec, fiber_product, structure_map, transposition

VARIANTS = ("C", "A", "Q", "QA")
STANDARD, CORRUPT = "standard", "corrupt"


def _zero_matrix(m: int, n: int) -> list:
    return [[0] * n for _ in range(m)]


def _scaled_sum(terms: Iterable[tuple], m: int, n: int) -> list:
    out = _zero_matrix(m, n)
    for c, X in terms:
        for i in range(m):
            row, src = out[i], X[i]
            for j in range(n):
                if src[j]:
                    row[j] += c * src[j]
    return out


class PairData:
    """Cell groups and induced structure matrices, computed on demand."""

    def __init__(self, spec: SUPairSpec, depth_cap: int = 8):
        self.spec = spec
        self.depth_cap = depth_cap
        self._groups = {}
        self._cov = {}
        self._con = {}
        self._lat = {}
        self.max_delay = 0

    # cells -------------------------------------------------------------
    def graph(self, L: int, M: int):
        return fiber_product(self.spec, L, M).graph

    def group(self, L: int, M: int) -> StationaryGroup:
        key = (L, M)
        if key not in self._groups:
            self._groups[key] = dimension_group(self.graph(L, M))
        return self._groups[key]

    def dim(self, L: int, M: int) -> int:
        return self.group(L, M).n

    def H(self, L: int, M: int) -> list:
        return self.group(L, M).H

    # induced maps --------------------------------------------------------
    def covariant(self, L: int, M: int, kind: str, *args) -> list:
        """Matrix of ``[E] -> [f(E)]`` for the structure map out of cell ``(L, M)``."""
        key = (L, M, kind, args)
        if key not in self._cov:
            code = structure_map(self.spec, L, M, kind, *args)
            L2, M2 = _target_cell(L, M, kind)
            mor = induced_covariant(code, self.depth_cap, self.group(L, M), self.group(L2, M2))
            self._check_delay(mor, kind, L, M, args)
            self._cov[key] = mor.matrix
        return self._cov[key]

    def contravariant(self, L: int, M: int, kind: str, *args) -> list:
        """Matrix of ``[E] -> [f^{-1}(E)]`` for the structure map out of ``(L, M)``."""
        key = (L, M, kind, args)
        if key not in self._con:
            code = structure_map(self.spec, L, M, kind, *args)
            L2, M2 = _target_cell(L, M, kind)
            mor = induced_contravariant(code, self.depth_cap, self.group(L2, M2), self.group(L, M))
            self._check_delay(mor, kind, L, M, args)
            self._con[key] = mor.matrix
        return self._con[key]

    def _check_delay(self, mor, kind, L, M, args) -> None:
        # a signed sum of maps with different delays is not a morphism of limits
        self.max_delay = max(self.max_delay, mor.stage_shift)
        if mor.stage_shift:
            raise DepthCapExceeded(
                f"{kind}{args} at {(L, M)} intertwines only after delay {mor.stage_shift}; "
                "the complexes are assembled from exactly intertwining maps")

    def face_y(self, L, M, l):
        """``delta_l`` : cell (L, M) -> cell (L-1, M)."""
        return self.covariant(L, M, "delete_y", l)

    def face_z_star(self, L, M, m):
        """``delta_{,m}^*`` : cell (L, M) -> cell (L, M+1)."""
        return self.contravariant(L, M + 1, "delete_z", m)

    def perm_y(self, L, M, perm):
        return self.covariant(L, M, "perm_y", tuple(perm))

    def perm_z(self, L, M, perm):
        return self.covariant(L, M, "perm_z", tuple(perm))

    def extra_y(self, L, M, l, j):
        """Extra degeneracy cell (L-1, M) -> cell (L, M), copying y_l to slot l + j."""
        return self.covariant(L - 1, M, "extra_y", l, j)

    def extra_z_star(self, L, M, m, j):
        """Pullback along the extra degeneracy: cell (L, M) -> cell (L, M-1)."""
        return self.contravariant(L, M - 1, "extra_z", m, j)

    # differentials -----------------------------------------------------
    def horizontal(self, L: int, M: int) -> list:
        n, n2 = self.dim(L, M), self.dim(L - 1, M)
        return _scaled_sum((((-1) ** l, self.face_y(L, M, l)) for l in range(L + 1)), n2, n)

    def vertical(self, L: int, M: int, sign: str = STANDARD) -> list:
        n, n2 = self.dim(L, M), self.dim(L, M + 1)
        if sign == STANDARD:
            coeff = lambda m: (-1) ** (L + m)
        else:
            coeff = lambda m: (-1) ** m
        return _scaled_sum(((coeff(m), self.face_z_star(L, M, m)) for m in range(M + 2)), n2, n)

    # limit-sense lattices ---------------------------------------------------
    def limit_kernel(self, X: list, L2: int, M2: int, n: int) -> Lattice:
        """``{v : X v = 0 in the limit group of cell (L2, M2)}``."""
        G = self.group(L2, M2)
        HX = matmul(G.power(G.k_star), X, G.n, n) if G.k_star else X
        return Lattice.kernel(HX, n)

    def _cached(self, key, build):
        if key not in self._lat:
            self._lat[key] = build()
        return self._lat[key]

    def A(self, L: int, M: int) -> Lattice:
        def build():
            n = self.dim(L, M)
            out = Lattice.full(n)
            for i in range(M):
                P = self.perm_z(L, M, transposition(M + 1, i))
                out = out.intersect(self.limit_kernel(matadd(identity(n), P), L, M, n))
            return out
        return self._cached(("A", L, M), build)

    def antisym_y(self, L: int, M: int) -> Lattice:
        """Span of ``x + t(x)`` over adjacent transpositions of the Y-coordinates."""
        def build():
            n = self.dim(L, M)
            gens = []
            for i in range(L):
                P = self.perm_y(L, M, transposition(L + 1, i))
                gens += transpose(matadd(identity(n), P), n)
            return Lattice.span(n, gens)
        return self._cached(("antisym", L, M), build)

    def B(self, L: int, M: int) -> Lattice:
        def build():
            n = self.dim(L, M)
            out = self.antisym_y(L, M)
            for i, j in combinations(range(L + 1), 2):
                P = self.perm_y(L, M, transposition(L + 1, i, j))
                out = out + self.limit_kernel(matadd(P, identity(n), -1), L, M, n)
            return out
        return self._cached(("B", L, M), build)

    def degenerate_pairs(self, L: int) -> list:
        """Extra degeneracy indices ``(l, j)`` into degree ``L``, in filtration order."""
        return [(l, j) for l in range(L) for j in range(1, L - l + 1)]

    def DC_levels(self, L: int, M: int) -> list:
        """Filtration of the degenerate part: antisymmetric span, then one level per ``(l, j)``."""
        def build():
            n = self.dim(L, M)
            cur = self.antisym_y(L, M)
            levels = [((None, None), cur)]
            for l, j in self.degenerate_pairs(L):
                E = self.extra_y(L, M, l, j)
                cur = cur + Lattice.full(self.dim(L - 1, M)).image(E, n)
                levels.append(((l, j), cur))
            return levels
        return self._cached(("DClev", L, M), build)

    def DC(self, L: int, M: int) -> Lattice:
        return self.DC_levels(L, M)[-1][1]

    def CC(self, L: int, M: int) -> Lattice:
        def build():
            n = self.dim(L, M)
            out = self.A(L, M)
            for m in range(M):
                for j in range(1, M - m + 1):
                    X = self.extra_z_star(L, M, m, j)
                    out = out.intersect(self.limit_kernel(X, L, M - 1, n))
            return out
        return self._cached(("CC", L, M), build)

    def moore(self, L: int, M: int) -> Lattice:
        def build():
            n = self.dim(L, M)
            out = Lattice.full(n)
            for l in range(1, L + 1):
                out = out.intersect(self.limit_kernel(self.face_y(L, M, l), L - 1, M, n))
            return out
        return self._cached(("moore", L, M), build)

    def variant_lattices(self, L: int, M: int, variant: str) -> tuple:
        n = self.dim(L, M)
        if variant == "C":
            return Lattice.full(n), Lattice.zero(n)
        if variant == "A":
            return self.A(L, M), Lattice.zero(n)
        if variant == "Q":
            return Lattice.full(n), self.B(L, M)
        if variant == "QA":
            A = self.A(L, M)
            return A, A.intersect(self.B(L, M))
        raise ValueError(f"unknown variant {variant!r}")


def _target_cell(L: int, M: int, kind: str) -> tuple:
    if kind == "delete_y":
        return L - 1, M
    if kind == "delete_z":
        return L, M - 1
    if kind in ("insert_y", "extra_y"):
        return L + 1, M
    if kind in ("insert_z", "extra_z"):
        return L, M + 1
    return L, M


_DATA_CACHE = {}


def pair_data(spec: SUPairSpec, depth_cap: int = 8) -> PairData:
    key = (spec, depth_cap)
    if key not in _DATA_CACHE:
        _DATA_CACHE[key] = PairData(spec, depth_cap)
    return _DATA_CACHE[key]


# --------------------------------------------------------------------------
# the double complex


def _limit_zero(data: PairData, X: list, L2: int, M2: int, n: int) -> list | None:
    """Index of a basis vector not sent to zero in the limit, or ``None``."""
    if is_zero(X):
        return None
    G = data.group(L2, M2)
    HX = matmul(G.power(G.k_star), X, G.n, n)
    for j in range(n):
        if any(row[j] for row in HX):
            return j
    return None


def _saturate(term_n: int, H, S: Lattice, R: Lattice) -> Lattice:
    return eventual_kernel(term_n, H, S, R)[0]


@dataclass(eq=False)
class Bicomplex:
    data: PairData
    T: int
    variant: str
    sign: str
    cells: dict                # (L, M) -> Term

    @property
    def spec(self) -> SUPairSpec:
        return self.data.spec

    def h(self, L: int, M: int) -> list:
        return self.data.horizontal(L, M)

    def v(self, L: int, M: int) -> list:
        return self.data.vertical(L, M, self.sign)

    def nonzero_cells(self) -> list:
        return [c for c, t in sorted(self.cells.items()) if t.S != t.R]

    def total(self) -> "TotalComplex":
        return total_complex(self)

    def row(self, M: int) -> StationaryComplex:
        terms = {L: self.cells[(L, M)] for L in range(self.T + 1)}
        diffs = {L: self.h(L, M) for L in range(1, self.T + 1)}
        return StationaryComplex(terms, diffs)

    def column(self, L: int) -> StationaryComplex:
        """Column ``L`` as a homological complex in degree ``-M``."""
        terms = {-M: self.cells[(L, M)] for M in range(self.T + 1)}
        diffs = {-M: self.v(L, M) for M in range(self.T)}
        return StationaryComplex(terms, diffs)


def build_bicomplex(spec: SUPairSpec, T: int, variant: str = "C", depth_cap: int = 8,
                    sign: str = STANDARD, check: bool = True) -> Bicomplex:
    """Cells ``0 <= L, M <= T`` of the chosen variant.

    With ``check`` set, the horizontal and vertical maps are verified to square
    to zero and to anticommute (in the limit), and each variant's subquotients
    are verified to be preserved.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if T < 0:
        raise ValueError("truncation must be nonnegative")
    data = pair_data(spec, depth_cap)
    cells = {}
    for L in range(T + 1):
        for M in range(T + 1):
            n = data.dim(L, M)
            S, R = data.variant_lattices(L, M, variant)
            R = _saturate(n, data.H(L, M), S, R)
            cells[(L, M)] = Term(n, data.H(L, M), S, R)
    bc = Bicomplex(data, T, variant, sign, cells)
    if check:
        check_bicomplex(bc)
    return bc


def check_bicomplex(bc: Bicomplex) -> None:
    data, T = bc.data, bc.T
    for (L, M), term in bc.cells.items():
        n = term.n
        if L >= 2:
            X = matmul(bc.h(L - 1, M), bc.h(L, M), data.dim(L - 1, M), n)
            j = _limit_zero(data, X, L - 2, M, n)
            if j is not None:
                raise NotABicomplex(f"horizontal square nonzero at {(L, M)}, generator {j}")
        if M + 2 <= T:
            X = matmul(bc.v(L, M + 1), bc.v(L, M), data.dim(L, M + 1), n)
            j = _limit_zero(data, X, L, M + 2, n)
            if j is not None:
                raise NotABicomplex(f"vertical square nonzero at {(L, M)}, generator {j}")
        if L >= 1 and M + 1 <= T:
            a = matmul(bc.h(L, M + 1), bc.v(L, M), data.dim(L, M + 1), n)
            b = matmul(bc.v(L - 1, M), bc.h(L, M), data.dim(L - 1, M), n)
            X = matadd(a, b)
            j = _limit_zero(data, X, L - 1, M + 1, n)
            if j is not None:
                raise SignConventionFailure(
                    f"horizontal and vertical maps do not anticommute at {(L, M)}",
                    witness={"cell": [L, M], "generator": j,
                             "vertex": repr(data.graph(L, M).vertices[j])})
        for target, X in (((L - 1, M), bc.h(L, M) if L >= 1 else None),
                          ((L, M + 1), bc.v(L, M) if M + 1 <= T else None)):
            if X is None:
                continue
            t2 = bc.cells[target]
            if not t2.S.contains_lattice(term.S.image(X, t2.n)):
                raise NotABicomplex(f"{bc.variant}: numerator not preserved from {(L, M)} to {target}")
            if not t2.R.contains_lattice(term.R.image(X, t2.n)):
                raise NotABicomplex(f"{bc.variant}: relations not preserved from {(L, M)} to {target}")


@dataclass(eq=False)
class TotalComplex:
    bicomplex: Bicomplex
    complex: StationaryComplex
    blocks: dict               # N -> list of (L, M, offset, size)

    def block_lattice(self, N: int, keep) -> Lattice:
        """Direct sum taking ``S`` on cells where ``keep(L, M)`` holds and ``R`` elsewhere."""
        gens = []
        total = self.complex.term(N).n
        for L, M, off, size in self.blocks.get(N, []):
            t = self.bicomplex.cells[(L, M)]
            lat = t.S if keep(L, M) else t.R
            for b in lat.basis:
                v = [0] * total
                v[off:off + size] = b
                gens.append(v)
        return Lattice.span(total, gens)

    def vertical_filtration(self) -> FilteredComplex:
        """``F_p`` = columns ``L <= p``; the first page is column homology."""
        T = self.bicomplex.T
        levels = {N: {p: self.block_lattice(N, lambda L, M, p=p: L <= p) for p in range(T + 1)}
                  for N in self.complex.degrees}
        return FilteredComplex(self.complex, levels, 0, T)

    def horizontal_filtration(self) -> FilteredComplex:
        """``F_p`` = rows ``M >= T - p``; the first page is row homology."""
        T = self.bicomplex.T
        levels = {N: {p: self.block_lattice(N, lambda L, M, p=p: M >= T - p) for p in range(T + 1)}
                  for N in self.complex.degrees}
        return FilteredComplex(self.complex, levels, 0, T)

    def locate(self, N: int, index: int) -> tuple:
        for L, M, off, size in self.blocks.get(N, []):
            if off <= index < off + size:
                return L, M, self.bicomplex.data.graph(L, M).vertices[index - off]
        raise IndexError(index)


def total_complex(bc: Bicomplex, drop_zero: bool = True) -> TotalComplex:
    """``Tot_N = sum over L - M = N`` with ``d = horizontal + vertical``.

    Cells whose subquotient vanishes are left out; they contribute nothing.
    """
    live = [c for c in sorted(bc.cells) if not drop_zero or bc.cells[c].S != bc.cells[c].R]
    by_degree = {}
    for L, M in live:
        by_degree.setdefault(L - M, []).append((L, M))
    blocks, terms = {}, {}
    for N, cells in by_degree.items():
        off = 0
        bl = []
        for L, M in cells:
            size = bc.cells[(L, M)].n
            bl.append((L, M, off, size))
            off += size
        blocks[N] = bl
        H = _zero_matrix(off, off)
        Sg, Rg = [], []
        for L, M, o, size in bl:
            t = bc.cells[(L, M)]
            for i in range(size):
                H[o + i][o:o + size] = t.H[i]
            for lat, acc in ((t.S, Sg), (t.R, Rg)):
                for b in lat.basis:
                    v = [0] * off
                    v[o:o + size] = b
                    acc.append(v)
        terms[N] = Term(off, H, Lattice.span(off, Sg), Lattice.span(off, Rg))
    diffs = {}
    for N in by_degree:
        if N - 1 not in by_degree:
            continue
        tgt_index = {(L, M): (o, s) for L, M, o, s in blocks[N - 1]}
        D = _zero_matrix(terms[N - 1].n, terms[N].n)
        for L, M, o, size in blocks[N]:
            pieces = []
            if (L - 1, M) in tgt_index:
                pieces.append(((L - 1, M), bc.h(L, M)))
            if (L, M + 1) in tgt_index:
                pieces.append(((L, M + 1), bc.v(L, M)))
            for cell, X in pieces:
                o2, s2 = tgt_index[cell]
                for i in range(s2):
                    row = D[o2 + i]
                    xi = X[i]
                    for j in range(size):
                        if xi[j]:
                            row[o + j] += xi[j]
        diffs[N] = D
    return TotalComplex(bc, StationaryComplex(terms, diffs), blocks)


# --------------------------------------------------------------------------
# degenerate and invariant subcomplexes


def degenerate_subcomplex(spec: SUPairSpec, M: int, T: int, depth_cap: int = 8) -> StationaryComplex:
    """Row ``M`` of degenerate chains, degrees ``0..T``."""
    data = pair_data(spec, depth_cap)
    terms, diffs = {}, {}
    for L in range(T + 1):
        n = data.dim(L, M)
        S = data.DC(L, M)
        terms[L] = Term(n, data.H(L, M), S, _saturate(n, data.H(L, M), S, Lattice.zero(n)))
        if L >= 1:
            diffs[L] = data.horizontal(L, M)
    return StationaryComplex(terms, diffs)


@dataclass
class LevelCheck:
    degree: int
    level: tuple
    ok: bool
    witness: list | None = None


@dataclass
class AcyclicityReport:
    M: int
    T: int
    homology_ok: bool
    failing_degree: int | None
    subcomplex_ok: bool
    contraction_ok: bool
    bottom_ok: bool
    levels: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.homology_ok and self.subcomplex_ok and self.contraction_ok and self.bottom_ok


def _in_limit(data: PairData, lat: Lattice, v: list, L: int, M: int) -> bool:
    G = data.group(L, M)
    if lat.contains(v):
        return True
    return lat.contains(matvec(G.power(G.k_star), v))


def verify_dc_acyclic(spec: SUPairSpec, M: int, T: int, depth_cap: int = 8,
                      raise_on_failure: bool = False) -> AcyclicityReport:
    """Degenerate chains in row ``M`` have no homology in degrees ``0..T-1``.

    Besides the direct homology computation, each level of the filtration by
    extra degeneracies ``(l, j)`` (lexicographic, above the antisymmetric
    span) is checked to be a subcomplex, and on its quotient the map
    ``psi = (-1)^(l+j+1) s`` built from that level's degeneracy ``s`` is checked
    to satisfy ``d psi + psi d = id`` on every stage generator ``s(e_x)``.
    The bottom level (antisymmetric span) is checked acyclic directly.
    """
    data = pair_data(spec, depth_cap)
    DC = degenerate_subcomplex(spec, M, T, depth_cap)
    failing = None
    for N in range(0, T):
        if not homology(DC, N).is_zero():
            failing = N
            break
    # every level is a subcomplex
    sub_ok = True
    for L in range(1, T + 1):
        D = data.horizontal(L, M)
        n1 = data.dim(L - 1, M)
        lower = dict(data.DC_levels(L - 1, M))
        for key, lat in data.DC_levels(L, M):
            # the image must sit inside the same level (or the whole, if absent below)
            tgt = lower.get(key, data.DC(L - 1, M)) if key != (None, None) else lower[(None, None)]
            if key != (None, None) and key not in lower:
                prior = [k for k, _ in data.DC_levels(L - 1, M) if k != (None, None) and k <= key]
                tgt = lower[prior[-1]] if prior else lower[(None, None)]
            img = lat.image(D, n1)
            if not all(_in_limit(data, tgt, b, L - 1, M) for b in img.basis):
                sub_ok = False
    # contraction on each level quotient
    levels = []
    contraction_ok = True
    for L in range(1, T):
        lev = data.DC_levels(L, M)
        n, n0 = data.dim(L, M), data.dim(L - 1, M)
        dL = data.horizontal(L, M)
        dL1 = data.horizontal(L + 1, M)
        for idx in range(1, len(lev)):
            (l, j), _ = lev[idx]
            below = lev[idx - 1][1]
            E = data.extra_y(L, M, l, j)           # (L-1) -> L
            E1 = data.extra_y(L + 1, M, l, j)      # L -> L+1
            eps = (-1) ** (l + j + 1)
            ok, wit = True, None
            for x in range(n0):
                y = [row[x] for row in E]
                a = matvec(dL1, matvec(E1, y))
                b = matvec(E, matvec(dL, y))
                z = [eps * (p + q) - w for p, q, w in zip(a, b, y)]
                if not _in_limit(data, below, z, L, M):
                    ok, wit = False, {"generator": repr(data.graph(L - 1, M).vertices[x])}
                    break
            levels.append(LevelCheck(L, (l, j), ok, wit))
            contraction_ok &= ok
    # bottom level: antisymmetric span is acyclic
    terms, diffs = {}, {}
    for L in range(T + 1):
        n = data.dim(L, M)
        S = data.antisym_y(L, M)
        terms[L] = Term(n, data.H(L, M), S, _saturate(n, data.H(L, M), S, Lattice.zero(n)))
        if L >= 1:
            diffs[L] = data.horizontal(L, M)
    bottom = StationaryComplex(terms, diffs)
    bottom_ok = all(homology(bottom, N).is_zero() for N in range(0, T))
    report = AcyclicityReport(M, T, failing is None, failing, sub_ok, contraction_ok, bottom_ok, levels)
    if raise_on_failure and not report.ok:
        raise AcyclicityFailure("degenerate chains are not acyclic", witness=report)
    return report


def invariant_subcomplex(spec: SUPairSpec, L: int, T: int, depth_cap: int = 8) -> ChainMap:
    """Column ``L`` of invariant chains with its inclusion into the full column.

    The chain map's source is the invariant complex (homological degree ``-M``).
    """
    data = pair_data(spec, depth_cap)
    src_terms, tgt_terms, diffs = {}, {}, {}
    for M in range(T + 1):
        n = data.dim(L, M)
        H = data.H(L, M)
        S = data.CC(L, M)
        src_terms[-M] = Term(n, H, S, _saturate(n, H, S, Lattice.zero(n)))
        tgt_terms[-M] = Term(n, H, Lattice.full(n), _saturate(n, H, Lattice.full(n), Lattice.zero(n)))
        if M < T:
            diffs[-M] = data.vertical(L, M)
    src = StationaryComplex(src_terms, diffs)
    tgt = StationaryComplex(tgt_terms, dict(diffs))
    src.validate()
    f = ChainMap(src, tgt, {-M: identity(data.dim(L, M)) for M in range(T + 1)})
    f.validate(range(-T, 1))
    return f


def moore_normalization(spec: SUPairSpec, M: int, T: int, depth_cap: int = 8) -> tuple:
    """Normalized row ``M`` (kernels of faces ``1..L``), its inclusion and a comparison.

    Returns ``(chain_map, report)`` where the report checks the inclusion is a
    quasi-isomorphism in the degrees untouched by truncation.
    """
    data = pair_data(spec, depth_cap)
    src_terms, tgt_terms, diffs = {}, {}, {}
    for L in range(T + 1):
        n = data.dim(L, M)
        H = data.H(L, M)
        S = data.moore(L, M)
        src_terms[L] = Term(n, H, S, _saturate(n, H, S, Lattice.zero(n)))
        tgt_terms[L] = Term(n, H, Lattice.full(n), _saturate(n, H, Lattice.full(n), Lattice.zero(n)))
        if L >= 1:
            diffs[L] = data.horizontal(L, M)
    src = StationaryComplex(src_terms, diffs)
    tgt = StationaryComplex(tgt_terms, dict(diffs))
    src.validate()
    f = ChainMap(src, tgt, {L: identity(data.dim(L, M)) for L in range(T + 1)})
    f.validate(range(T + 1))
    return f, is_quasi_iso(f, range(T))


# --------------------------------------------------------------------------
# vanishing bounds and homology


@dataclass
class VanishingBounds:
    N_Q: int
    N_A: int
    certified: bool
    empirical: bool
    fiber_bounds: dict
    T_max: int

    def as_dict(self) -> dict:
        return {"N_Q": self.N_Q, "N_A": self.N_A, "certified": self.certified,
                "empirical": self.empirical, "fiber_bounds": self.fiber_bounds,
                "T_max": self.T_max}


def _fiber_bound(spec: SUPairSpec, side: str) -> int | None:
    """Bound on how many Y-points (``side='y'``) or Z-points share a partner.

    Valid when the projection of the basic tuple shift forgetting that side is
    left or right resolving: then distinct points in one fibre are told apart by
    their vertex at every time, so a fibre is no larger than a vertex fibre.
    """
    g = fiber_product(spec, 0, 0).graph
    keep = 1 if side == "y" else 0      # coordinate that survives the projection

    def image(e):
        return e[keep]

    def resolving(edge_lists):
        for es in edge_lists:
            imgs = [image(e) for e in es]
            if len(set(imgs)) != len(imgs):
                return False
        return True

    outs = [g.out_edges(v) for v in g.vertices]
    ins = [g.in_edges(v) for v in g.vertices]
    if not (resolving(outs) or resolving(ins)):
        return None
    counts = {}
    for v in g.vertices:
        counts[v[keep]] = counts.get(v[keep], 0) + 1
    return max(counts.values())


def cell_is_zero(data: PairData, L: int, M: int, variant: str) -> bool:
    n = data.dim(L, M)
    S, R = data.variant_lattices(L, M, variant)
    return _saturate(n, data.H(L, M), S, R) == S


def discover_bounds(spec: SUPairSpec, T_max: int = 5, depth_cap: int = 8) -> VanishingBounds:
    """Least ``N_Q`` (resp. ``N_A``) with the Q-part (A-part) zero from there on.

    The scan covers all cells up to ``T_max``.  The answer is certified when a
    fibre-size bound shows vanishing beyond the scanned range as well.
    """
    if T_max < 2:
        raise BoundNotFound("a scan cap of at least 2 is required")
    data = pair_data(spec, depth_cap)
    rng = range(T_max + 1)
    q_zero = {L: all(cell_is_zero(data, L, M, "Q") for M in rng) for L in rng}
    a_zero = {M: all(cell_is_zero(data, L, M, "A") for L in rng) for M in rng}

    def least(zero):
        best = None
        for k in range(T_max, -1, -1):
            if zero[k]:
                best = k
            else:
                break
        return best

    N_Q, N_A = least(q_zero), least(a_zero)
    if N_Q is None or N_A is None:
        raise BoundNotFound(f"no vanishing found up to {T_max}")
    fb = {"y": _fiber_bound(spec, "y"), "z": _fiber_bound(spec, "z")}
    certified = (fb["y"] is not None and fb["y"] <= N_Q
                 and fb["z"] is not None and fb["z"] <= N_A)
    return VanishingBounds(N_Q, N_A, certified, not certified, fb, T_max)


@dataclass
class SmaleHomology:
    groups: dict              # N -> HomologyGroup
    bounds: VanishingBounds
    T: int

    def invariants(self) -> dict:
        return {N: h.invariants() for N, h in self.groups.items()}


def homology_smale(spec: SUPairSpec, window: Sequence[int] = (-3, 3), T_max: int = 5,
                   depth_cap: int = 8) -> SmaleHomology:
    """Homology of the antisymmetric quotient complex, whose support is finite."""
    bounds = discover_bounds(spec, T_max, depth_cap)
    T = max(bounds.N_Q, bounds.N_A)
    bc = build_bicomplex(spec, T, "QA", depth_cap)
    tot = total_complex(bc).complex
    lo, hi = window
    return SmaleHomology({N: homology(tot, N) for N in range(lo, hi + 1)}, bounds, T)


# --------------------------------------------------------------------------
# verification of the comparison maps


@dataclass
class Check:
    name: str
    ok: bool
    detail: dict = field(default_factory=dict)


@dataclass
class VerificationReport:
    checks: list

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.ok]


def _identity_map(src: StationaryComplex, tgt: StationaryComplex) -> ChainMap:
    return ChainMap(src, tgt, {N: identity(src.term(N).n) for N in src.degrees})


def _report_check(name: str, rep: QuasiIsoReport, **extra) -> Check:
    detail = dict(extra)
    if not rep.ok:
        detail.update(degree=rep.degree, kind=rep.kind, witness=rep.witness)
    return Check(name, rep.ok, detail)


def verify_quasi_isos(spec: SUPairSpec, T: int, window: Sequence[int] = (-3, 3),
                      depth_cap: int = 8, bounds: VanishingBounds | None = None,
                      seed: int | None = None) -> VerificationReport:
    """Check the comparison maps between the four variants.

    * inclusion of the antisymmetric part, column by column;
    * projection onto the quotient, row by row;
    * the two maps through the antisymmetric quotient, row and column;
    * total homology of all three reduced variants on the degrees where
      truncation cannot interfere.
    """
    bounds = bounds or discover_bounds(spec, max(T, 2), depth_cap)
    bcs = {v: build_bicomplex(spec, T, v, depth_cap) for v in VARIANTS}
    checks = []
    interior_cols = [-M for M in range(T)]
    interior_rows = list(range(T))
    for L in range(T):
        f = _identity_map(bcs["A"].column(L), bcs["C"].column(L))
        checks.append(_report_check(f"A->C column {L}", is_quasi_iso(f, interior_cols)))
        f = _identity_map(bcs["QA"].column(L), bcs["Q"].column(L))
        checks.append(_report_check(f"QA->Q column {L}", is_quasi_iso(f, interior_cols)))
    for M in range(T):
        f = _identity_map(bcs["C"].row(M), bcs["Q"].row(M))
        checks.append(_report_check(f"C->Q row {M}", is_quasi_iso(f, interior_rows)))
        f = _identity_map(bcs["A"].row(M), bcs["QA"].row(M))
        checks.append(_report_check(f"A->QA row {M}", is_quasi_iso(f, interior_rows)))
    tots = {v: total_complex(bcs[v]) for v in ("A", "Q", "QA")}
    lo, hi = window
    safe_A = [N for N in range(lo, hi + 1) if N <= T - bounds.N_A]
    safe_Q = [N for N in range(lo, hi + 1) if N >= bounds.N_Q - T]
    for name, src, tgt, degs in (("Tot A->QA", "A", "QA", safe_A), ("Tot QA->Q", "QA", "Q", safe_Q)):
        s, t = tots[src], tots[tgt]
        maps = {}
        for N in set(s.complex.degrees) | set(t.complex.degrees):
            maps[N] = _block_identity(s, t, N)
        f = ChainMap(s.complex, t.complex, maps)
        checks.append(_report_check(name, is_quasi_iso(f, degs), degrees=degs))
    if seed is not None:
        checks.append(_random_anticommutation(bcs["C"], seed))
    return VerificationReport(checks)


def _block_identity(s: TotalComplex, t: TotalComplex, N: int) -> list:
    rows = t.complex.term(N).n
    cols = s.complex.term(N).n
    F = _zero_matrix(rows, cols)
    tgt = {(L, M): o for L, M, o, _ in t.blocks.get(N, [])}
    for L, M, o, size in s.blocks.get(N, []):
        if (L, M) in tgt:
            o2 = tgt[(L, M)]
            for i in range(size):
                F[o2 + i][o + i] = 1
    return F


def _random_anticommutation(bc: Bicomplex, seed: int) -> Check:
    """Spot check ``d^2 = 0`` on random integer vectors of the total complex."""
    rng = random.Random(seed)
    tot = total_complex(bc, drop_zero=False).complex
    for N in tot.degrees:
        if N - 2 not in tot.terms:
            continue
        n = tot.term(N).n
        v = [rng.randint(-5, 5) for _ in range(n)]
        w = matvec(tot.diff(N - 1), matvec(tot.diff(N), v))
        if not tot.term(N - 2).R.contains(w):
            return Check("random d^2", False, {"degree": N, "seed": seed})
    return Check("random d^2", True, {"seed": seed})


def total_square_check(bc: Bicomplex) -> Check:
    """``d o d = 0`` on the total complex, with the first offending generator as witness."""
    tc = total_complex(bc, drop_zero=False)
    tot = tc.complex
    for N in tot.degrees:
        if N - 2 not in tot.terms:
            continue
        X = matmul(tot.diff(N - 1), tot.diff(N), tot.term(N - 1).n, tot.term(N).n)
        R = tot.term(N - 2).R
        for b in tot.term(N).S.basis:
            col = matvec(X, b)
            if any(col) and not R.contains(col):
                L, M, v = tc.locate(N, next(j for j, x in enumerate(b) if x))
                return Check(f"d^2 {bc.variant}", False,
                             {"degree": N, "cell": [L, M], "vertex": repr(v)})
    return Check(f"d^2 {bc.variant}", True)
