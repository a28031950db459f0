"""Chain complexes of stationary groups, their homology, and spectral sequences.

Every term is a subquotient ``S/R`` of some ``Z^n`` carrying an endomorphism
``H``; the group it stands for is ``lim(S/R, H)``.  Differentials are integer
matrices on the ambient ``Z^n`` commuting with ``H``.  Because the limit is
exact, homology, kernels and cokernels can be computed stage by stage and only
then passed to the limit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .dimension import LimitGroup, StationaryGroup, eventual_kernel, quotient_invariants, subquotient_group
from .errors import DimensionMismatch, NotAChainMap
from .lattice import Lattice, SmithForm, matadd, matmul, smith_form


def smith_normal_form(M: Sequence[Sequence[int]]) -> SmithForm:
    """``U M V = D`` with unimodular ``U``, ``V`` and divisibility along the diagonal."""
    m = len(M)
    n = len(M[0]) if m else 0
    return smith_form([list(r) for r in M], m, n)


@dataclass
class FGPresentation:
    """Finitely generated abelian group ``Z^generators / rows(relations)``."""

    generators: int
    relations: list = field(default_factory=list)

    def invariants(self) -> tuple:
        R = Lattice.span(self.generators, self.relations)
        return quotient_invariants(Lattice.full(self.generators), R)


# --------------------------------------------------------------------------
# terms and complexes


@dataclass(eq=False)
class Term:
    n: int
    H: list
    S: Lattice
    R: Lattice

    @classmethod
    def free(cls, H) -> "Term":
        n = len(H)
        return cls(n, H, Lattice.full(n), Lattice.zero(n))

    @cached_property
    def limit(self) -> LimitGroup:
        return subquotient_group(self.n, self.H, self.S, self.R)

    @property
    def group(self) -> StationaryGroup:
        return self.limit.group

    def is_zero(self) -> bool:
        return self.limit.eventual_kernel == self.S


def zero_term() -> Term:
    return Term(0, [], Lattice.zero(0), Lattice.zero(0))


def _mat_shape_ok(D, rows, cols) -> bool:
    return len(D) == rows and all(len(r) == cols for r in D)


@dataclass(eq=False)
class StationaryComplex:
    """Homological complex: ``diffs[N]`` maps degree ``N`` to degree ``N - 1``."""

    terms: dict
    diffs: dict = field(default_factory=dict)

    def term(self, N: int) -> Term:
        return self.terms.get(N) or zero_term()

    def diff(self, N: int) -> list:
        src, tgt = self.term(N), self.term(N - 1)
        D = self.diffs.get(N)
        if D is None:
            return [[0] * src.n for _ in range(tgt.n)]
        return D

    @property
    def degrees(self) -> list:
        return sorted(self.terms)

    def validate(self) -> None:
        for N, D in self.diffs.items():
            src, tgt = self.term(N), self.term(N - 1)
            if not _mat_shape_ok(D, tgt.n, src.n):
                raise DimensionMismatch(f"differential in degree {N} has the wrong shape")
            if not tgt.S.contains_lattice(src.S.image(D, tgt.n)):
                raise NotAChainMap(f"differential {N} leaves the numerator")
            if not tgt.R.contains_lattice(src.R.image(D, tgt.n)):
                raise NotAChainMap(f"differential {N} leaves the relations")
            if matmul(D, src.H, src.n, src.n) != matmul(tgt.H, D, tgt.n, src.n):
                raise NotAChainMap(f"differential {N} does not commute with H")
        for N in self.diffs:
            if N - 1 in self.diffs:
                DD = matmul(self.diff(N - 1), self.diff(N), self.term(N - 1).n, self.term(N).n)
                img = self.term(N).S.image(DD, self.term(N - 2).n)
                if not self.term(N - 2).R.contains_lattice(img):
                    raise NotAChainMap(f"d o d is not zero out of degree {N}")

    def cycles(self, N: int) -> Lattice:
        t, D = self.term(N), self.diff(N)
        return self.term(N - 1).R.preimage(D, t.n).intersect(t.S)

    def boundaries(self, N: int) -> Lattice:
        t1 = self.term(N + 1)
        return t1.S.image(self.diff(N + 1), self.term(N).n) + self.term(N).R


@dataclass
class HomologyGroup:
    degree: int
    cycles: Lattice
    boundaries: Lattice
    limit: LimitGroup

    @property
    def group(self) -> StationaryGroup:
        return self.limit.group

    def invariants(self) -> tuple:
        return self.group.rank, self.group.torsion

    def is_zero(self) -> bool:
        return self.group.n == 0


def homology(C: StationaryComplex, N: int) -> HomologyGroup:
    t = C.term(N)
    Z = C.cycles(N)
    B = C.boundaries(N)
    return HomologyGroup(N, Z, B, subquotient_group(t.n, t.H, Z, B))


# --------------------------------------------------------------------------
# chain maps


@dataclass(eq=False)
class ChainMap:
    source: StationaryComplex
    target: StationaryComplex
    maps: dict

    def map(self, N: int) -> list:
        F = self.maps.get(N)
        if F is None:
            return [[0] * self.source.term(N).n for _ in range(self.target.term(N).n)]
        return F

    def validate(self, degrees: Iterable[int]) -> None:
        for N in degrees:
            s, t = self.source.term(N), self.target.term(N)
            F = self.map(N)
            if not _mat_shape_ok(F, t.n, s.n):
                raise DimensionMismatch(f"chain map in degree {N} has the wrong shape")
            if not t.S.contains_lattice(s.S.image(F, t.n)):
                raise NotAChainMap(f"degree {N}: numerator not preserved")
            if not t.R.contains_lattice(s.R.image(F, t.n)):
                raise NotAChainMap(f"degree {N}: relations not preserved")
            if matmul(F, s.H, s.n, s.n) != matmul(t.H, F, t.n, s.n):
                raise NotAChainMap(f"degree {N}: does not commute with H")
            t1 = self.target.term(N - 1)
            lhs = matmul(self.target.diff(N), F, t.n, s.n)
            rhs = matmul(self.map(N - 1), self.source.diff(N), self.source.term(N - 1).n, s.n)
            diff = matadd(lhs, rhs, -1)
            if not t1.R.contains_lattice(s.S.image(diff, t1.n)):
                raise NotAChainMap(f"degree {N}: square does not commute")


@dataclass
class QuasiIsoReport:
    ok: bool
    degree: int | None = None
    kind: str | None = None          # "kernel" or "cokernel"
    witness: list | None = None
    checked: tuple = ()


def induced_map_defects(f: ChainMap, N: int) -> tuple:
    """Kernel and cokernel witnesses of ``H_N(f)`` in the limit (``None`` if zero)."""
    hs, ht = homology(f.source, N), homology(f.target, N)
    F = f.map(N)
    nt = f.target.term(N).n
    Kf = ht.boundaries.preimage(F, f.source.term(N).n).intersect(hs.cycles)
    ker_w = None
    for b in Kf.basis:
        if not hs.limit.eventual_kernel.contains(b):
            ker_w = list(b)
            break
    img = hs.cycles.image(F, nt) + ht.boundaries
    term = f.target.term(N)
    Kc = eventual_kernel(term.n, term.H, ht.cycles, img)[0]
    cok_w = None
    if Kc != ht.cycles:
        for b in ht.cycles.basis:
            if not Kc.contains(b):
                cok_w = list(b)
                break
    return ker_w, cok_w


def is_quasi_iso(f: ChainMap, degrees: Iterable[int]) -> QuasiIsoReport:
    degrees = tuple(degrees)
    for N in degrees:
        ker_w, cok_w = induced_map_defects(f, N)
        if ker_w is not None:
            return QuasiIsoReport(False, N, "kernel", ker_w, degrees)
        if cok_w is not None:
            return QuasiIsoReport(False, N, "cokernel", cok_w, degrees)
    return QuasiIsoReport(True, checked=degrees)


# --------------------------------------------------------------------------
# filtered complexes and spectral sequences


@dataclass(eq=False)
class FilteredComplex:
    """Increasing filtration ``F_p`` of each degree, ``p_min <= p <= p_max``.

    Below ``p_min`` the filtration is the relation lattice; from ``p_max`` on
    it is the whole numerator.
    """

    complex: StationaryComplex
    levels: dict            # N -> {p: Lattice}
    p_min: int
    p_max: int

    def F(self, N: int, p: int) -> Lattice:
        t = self.complex.term(N)
        if p < self.p_min:
            return t.R
        if p >= self.p_max:
            return t.S
        return self.levels.get(N, {}).get(p, t.R)

    def validate(self) -> None:
        C = self.complex
        for N in C.degrees:
            t = C.term(N)
            prev = t.R
            for p in range(self.p_min, self.p_max + 1):
                cur = self.F(N, p)
                if not cur.contains_lattice(prev):
                    raise NotAChainMap(f"filtration not increasing at degree {N}, level {p}")
                if not cur.contains_lattice(cur.image(t.H, t.n)):
                    raise NotAChainMap(f"filtration level {p} of degree {N} is not H-invariant")
                img = cur.image(C.diff(N), C.term(N - 1).n)
                if not self.F(N - 1, p).contains_lattice(img):
                    raise NotAChainMap(f"differential does not respect level {p} in degree {N}")
                prev = cur
            if self.F(N, self.p_max) != t.S:
                raise NotAChainMap(f"filtration of degree {N} is not exhaustive")


@dataclass
class PageEntry:
    r: int
    p: int
    q: int
    numerator: Lattice
    denominator: Lattice
    limit: LimitGroup

    @property
    def group(self) -> StationaryGroup:
        return self.limit.group


@dataclass
class SpectralSequence:
    filtered: FilteredComplex
    pages: dict                      # r -> {(p, q): PageEntry}
    differential_zero: dict          # r -> bool
    coherent: dict                   # r -> bool (E^{r+1} = H(E^r, d^r))
    r_star: int
    failures: list = field(default_factory=list)

    def invariants(self, r: int) -> dict:
        return {pq: (e.group.rank, e.group.torsion) for pq, e in self.pages[r].items()}


class _PageMachine:
    """Lattices ``A^r_p`` and page denominators, memoised."""

    def __init__(self, fc: FilteredComplex):
        self.fc = fc
        self.C = fc.complex
        self._A = {}
        self._den = {}

    def A(self, r: int, p: int, N: int) -> Lattice:
        key = (r, p, N)
        if key not in self._A:
            fc, C = self.fc, self.C
            Fp = fc.F(N, p)
            if p < fc.p_min:
                self._A[key] = C.term(N).R
            else:
                low = fc.F(N - 1, p - r)
                self._A[key] = low.preimage(C.diff(N), C.term(N).n).intersect(Fp)
        return self._A[key]

    def den(self, r: int, p: int, N: int) -> Lattice:
        key = (r, p, N)
        if key not in self._den:
            C = self.C
            up = self.A(r - 1, p + r - 1, N + 1).image(C.diff(N + 1), C.term(N).n)
            self._den[key] = self.A(r - 1, p - 1, N) + up + C.term(N).R
        return self._den[key]

    def d_is_zero(self, r: int, p: int, N: int) -> bool:
        C = self.C
        img = self.A(r, p, N).image(C.diff(N), C.term(N - 1).n)
        return self.den(r, p - r, N - 1).contains_lattice(img)

    def coherent(self, r: int, p: int, N: int) -> bool:
        """Canonical map ``E^{r+1}_p -> H(E^r, d^r)_p`` is an isomorphism."""
        C = self.C
        n = C.term(N).n
        ker_num = self.den(r, p - r, N - 1).preimage(C.diff(N), n).intersect(self.A(r, p, N))
        im_den = self.A(r, p + r, N + 1).image(C.diff(N + 1), n) + self.den(r, p, N)
        num1, den1 = self.A(r + 1, p, N), self.den(r + 1, p, N)
        return (ker_num.contains_lattice(num1)
                and im_den.contains_lattice(den1)
                and (num1 + im_den).contains_lattice(ker_num)
                and den1.contains_lattice(num1.intersect(im_den)))


def spectral_sequence(fc: FilteredComplex, r_max: int | None = None,
                      degrees: Sequence[int] | None = None) -> SpectralSequence:
    """Pages ``E^r_{p,q} = A^r_p / (A^{r-1}_{p-1} + d A^{r-1}_{p+r-1})``.

    Here ``A^r_p = {x in F_p : dx in F_{p-r}}`` and ``N = p + q``.
    """
    width = fc.p_max - fc.p_min + 1
    r_max = width + 1 if r_max is None else r_max
    degrees = list(degrees) if degrees is not None else fc.complex.degrees
    mach = _PageMachine(fc)
    pages, dzero, coh = {}, {}, {}
    failures = []
    for r in range(r_max + 1):
        page = {}
        zero = True
        ok = True
        for N in degrees:
            t = fc.complex.term(N)
            for p in range(fc.p_min, fc.p_max + 1):
                num, den = mach.A(r, p, N), mach.den(r, p, N)
                lim = subquotient_group(t.n, t.H, num, den)
                page[(p, N - p)] = PageEntry(r, p, N - p, num, den, lim)
                if not mach.d_is_zero(r, p, N):
                    zero = False
                if r < r_max and not mach.coherent(r, p, N):
                    ok = False
                    failures.append(("coherence", r, p, N))
        pages[r] = page
        dzero[r] = zero
        coh[r] = ok
    r_star = r_max
    for r in range(r_max, -1, -1):
        if dzero[r]:
            r_star = r
        else:
            break
    return SpectralSequence(fc, pages, dzero, coh, r_star, failures)


@dataclass
class AbutmentReport:
    ok: bool
    mismatches: list = field(default_factory=list)


def check_abutment(ss: SpectralSequence) -> AbutmentReport:
    """Compare the last page with ``F_p H / F_{p-1} H`` via the map on cycles.

    Both sides are quotients of ``Z_N \\cap F_p``; they agree when the two
    kernels coincide and the cycles surject onto each side.
    """
    fc = ss.filtered
    C = fc.complex
    r = max(ss.pages)
    mism = []
    degrees = sorted({p + q for (p, q) in ss.pages[r]})
    for N in degrees:
        Z, B = C.cycles(N), C.boundaries(N)
        t = C.term(N)
        for p in range(fc.p_min, fc.p_max + 1):
            e = ss.pages[r][(p, N - p)]
            Fp, Fq = fc.F(N, p), fc.F(N, p - 1)
            ZF = Z.intersect(Fp)
            graded_den = Z.intersect(Fq) + B
            ker_page = ZF.intersect(e.denominator)
            ker_graded = ZF.intersect(graded_den)
            ok = ker_page == ker_graded and (ZF + e.denominator).contains_lattice(e.numerator)
            lim_a = e.limit.group
            lim_b = subquotient_group(t.n, t.H, ZF + graded_den, graded_den).group
            if (lim_a.rank, lim_a.torsion) != (lim_b.rank, lim_b.torsion):
                ok = False
            if not ok:
                mism.append({"degree": N, "p": p,
                             "page": [lim_a.rank, list(lim_a.torsion)],
                             "graded": [lim_b.rank, list(lim_b.torsion)]})
    return AbutmentReport(not mism, mism)
