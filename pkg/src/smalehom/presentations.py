"""Finite stages of the tower of symbolic presentations of an edge shift.

A partition here is clopen: every cell is a set of base paths over one
coordinate window ``[a, b]``, and a point lies in the cell containing its
restriction to that window.  Points are eventually periodic in both
directions so that membership is decidable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InputError, NotARefinement, NotSeparated
from .sft import Graph


@dataclass(frozen=True)
class RegularPartition:
    base: Graph
    window: tuple                 # (a, b), inclusive
    cells: tuple                  # tuple of frozensets of paths (tuples of edges)

    def __post_init__(self):
        a, b = self.window
        if a > b:
            raise InputError("empty window")
        seen = set()
        for c in self.cells:
            if not c:
                raise InputError("empty cell")
            if seen & c:
                raise InputError("cells overlap")
            seen |= c
        if seen != set(_paths(self.base, b - a + 1)):
            raise InputError("cells do not cover the shift")

    @property
    def length(self) -> int:
        a, b = self.window
        return b - a + 1

    def cell_of(self, word: Sequence) -> int:
        """Index of the cell holding a path on exactly this partition's window."""
        w = tuple(word)
        for i, c in enumerate(self.cells):
            if w in c:
                return i
        raise KeyError(word)

    def locate(self, x: "Point", t: int = 0) -> int:
        """Cell of ``sigma^t x``."""
        a, b = self.window
        return self.cell_of(x.word(t + a, t + b))

    def expand(self, window: tuple) -> "RegularPartition":
        """Same partition described over a larger window."""
        a, b = self.window
        c, d = window
        if c > a or d < b:
            raise InputError("can only expand to a containing window")
        lookup = {w: i for i, cell in enumerate(self.cells) for w in cell}
        new = [set() for _ in self.cells]
        for w in _paths(self.base, d - c + 1):
            new[lookup[w[a - c:b - c + 1]]].add(w)
        return RegularPartition(self.base, (c, d), tuple(frozenset(s) for s in new))

    def shifted(self, m: int) -> "RegularPartition":
        """``sigma^{-m} P``: the cell of ``x`` is the ``P``-cell of ``sigma^m x``."""
        a, b = self.window
        return RegularPartition(self.base, (a + m, b + m), self.cells)

    def canonical(self) -> tuple:
        return self.window, tuple(sorted(tuple(sorted(c)) for c in self.cells))

    def as_dict(self) -> dict:
        a, b = self.window
        return {"window": [a, b],
                "cells": [[{"window": [a, b], "word": _word_repr(w)} for w in sorted(c)]
                          for c in sorted(self.cells, key=sorted)]}


def _word_repr(w):
    return "".join(map(str, w)) if all(len(str(e)) == 1 for e in w) else [str(e) for e in w]


_PATH_CACHE = {}


def _paths(g: Graph, n: int) -> list:
    key = (g, n)
    if key not in _PATH_CACHE:
        _PATH_CACHE[key] = [tuple(p) for p in g.paths(n)]
    return _PATH_CACHE[key]


def hull(*windows: tuple) -> tuple:
    return min(w[0] for w in windows), max(w[1] for w in windows)


def window_partition(g: Graph, a: int, b: int) -> RegularPartition:
    """One cell per path on coordinates ``a..b``."""
    return RegularPartition(g, (a, b), tuple(frozenset([w]) for w in _paths(g, b - a + 1)))


def cylinder_partition(g: Graph, k: int) -> RegularPartition:
    """Central cylinders of length ``k``."""
    if k < 1:
        raise InputError("cylinder depth must be positive")
    a = -((k - 1) // 2)
    return window_partition(g, a, a + k - 1)


def trivial_partition(g: Graph) -> RegularPartition:
    return RegularPartition(g, (0, 0), (frozenset(_paths(g, 1)),))


def refine(P1: RegularPartition, P2: RegularPartition) -> RegularPartition:
    """Common refinement, cells ordered canonically."""
    if P1.base != P2.base:
        raise InputError("partitions of different shifts")
    w = hull(P1.window, P2.window)
    E1, E2 = P1.expand(w), P2.expand(w)
    cells = [c & d for c in E1.cells for d in E2.cells]
    cells = sorted((frozenset(c) for c in cells if c), key=sorted)
    return RegularPartition(P1.base, w, tuple(cells))


def refinement_map(coarse: RegularPartition, fine: RegularPartition) -> dict | None:
    """Fine cell index -> coarse cell index, or ``None`` if ``fine`` does not refine ``coarse``."""
    w = hull(coarse.window, fine.window)
    C, F = coarse.expand(w), fine.expand(w)
    out = {}
    for i, cell in enumerate(F.cells):
        homes = {C.cell_of(word) for word in cell}
        if len(homes) != 1:
            return None
        out[i] = homes.pop()
    return out


def refines(fine: RegularPartition, coarse: RegularPartition) -> bool:
    return refinement_map(coarse, fine) is not None


def same_partition(P: RegularPartition, Q: RegularPartition) -> bool:
    return refines(P, Q) and refines(Q, P)


# --------------------------------------------------------------------------
# itineraries


def _itineraries(P: RegularPartition, n: int) -> dict:
    """Base paths on ``[-n + a, n + b]`` grouped by itinerary over times ``-n..n``."""
    a, b = P.window
    lo = -n + a
    groups = {}
    L = P.length
    lookup = {w: i for i, c in enumerate(P.cells) for w in c}
    for w in _paths(P.base, 2 * n + b - a + 1):
        it = tuple(lookup[w[t:t + L]] for t in range(2 * n + 1))
        groups.setdefault(it, []).append(w)
    return groups, lo


def _pinned_radius(groups: dict, lo: int, span: int) -> tuple:
    """Largest ``r`` with coordinates ``-r..r`` equal inside every group (``-1`` if none)."""
    best, witness = None, None
    for ws in groups.values():
        r = -1
        while -(r + 1) - lo >= 0 and (r + 1) - lo < span:
            idx = (-(r + 1) - lo, (r + 1) - lo)
            if all(w[idx[0]] == ws[0][idx[0]] and w[idx[1]] == ws[0][idx[1]] for w in ws):
                r += 1
            else:
                break
        if best is None or r < best:
            best = r
            if r < 0:
                other = next(w for w in ws if w[-lo] != ws[0][-lo])
                witness = (ws[0], other)
    return best, witness


@dataclass
class PresentationVerdict:
    certified: bool
    depth: int
    radii: list                   # pinned radius after n steps, n = 0..depth
    witness: tuple | None = None

    def as_dict(self) -> dict:
        out = {"certified": self.certified, "depth": self.depth, "radii": self.radii}
        if self.witness is not None:
            out["witness"] = [[str(e) for e in w] for w in self.witness]
        return out


def check_symbolic_presentation(P: RegularPartition, depth: int = 6) -> PresentationVerdict:
    """Check that itineraries pin down coordinates on a window that keeps growing.

    ``radii[n]`` is the largest ``r`` such that any two points with the same
    itinerary over times ``-n..n`` agree on coordinates ``-r..r``.  The verdict
    is positive when the radius becomes nonnegative at some ``s`` and grows at
    least by one per step from there to ``depth``.
    """
    if depth < 1:
        raise InputError("depth must be positive")
    radii, witness = [], None
    for n in range(depth + 1):
        groups, lo = _itineraries(P, n)
        r, w = _pinned_radius(groups, lo, 2 * n + P.length)
        radii.append(r)
        if w is not None:
            witness = w
    starts = [s for s in range(depth + 1) if radii[s] >= 0]
    certified = bool(starts) and all(radii[n] >= n - starts[0] for n in range(starts[0], depth + 1)) \
        and starts[0] < depth
    return PresentationVerdict(certified, depth, radii, None if certified else witness)


# --------------------------------------------------------------------------
# factor codes between stages


@dataclass
class FactorCodeMu:
    fine: RegularPartition
    coarse: RegularPartition
    letter_map: dict
    checked_len: int
    words_checked: int

    def __call__(self, word: Sequence[int]) -> tuple:
        return tuple(self.letter_map[c] for c in word)

    def as_dict(self) -> dict:
        return {"letter_map": {str(k): v for k, v in sorted(self.letter_map.items())},
                "checked_len": self.checked_len, "words_checked": self.words_checked}


def factor_code_mu(coarse: RegularPartition, fine: RegularPartition, check_len: int = 8) -> FactorCodeMu:
    """Letter map from a refinement's cells to the coarse cells, with a word-level certificate.

    For every itinerary word ``u`` of length ``<= check_len`` over ``fine``,
    each base path realizing ``u`` realizes ``mu(u)`` over ``coarse``.
    """
    mu = refinement_map(coarse, fine)
    if mu is None:
        raise NotARefinement("the finer partition has a cell meeting two coarse cells")
    w = hull(coarse.window, fine.window)
    C, F = coarse.expand(w), fine.expand(w)
    # expanded cell indices line up with the originals
    lookC = {x: i for i, c in enumerate(C.cells) for x in c}
    lookF = {x: i for i, c in enumerate(F.cells) for x in c}
    span = w[1] - w[0] + 1
    count = 0
    for n in range(1, check_len + 1):
        seen = set()
        for p in _paths(coarse.base, n + span - 1):
            u = tuple(lookF[p[t:t + span]] for t in range(n))
            v = tuple(lookC[p[t:t + span]] for t in range(n))
            if tuple(mu[c] for c in u) != v:
                raise NotARefinement(f"factorization fails on itinerary {u}")
            seen.add(u)
        count += len(seen)
    return FactorCodeMu(fine, coarse, mu, check_len, count)


# --------------------------------------------------------------------------
# points and separation


@dataclass(frozen=True)
class Point:
    """Bi-infinite path: ``left`` repeats to the left of ``center``, ``right`` to its right.

    ``center`` occupies coordinates ``offset .. offset + len(center) - 1``.
    """

    center: tuple
    offset: int
    left: tuple
    right: tuple

    def __getitem__(self, i: int):
        j = i - self.offset
        if 0 <= j < len(self.center):
            return self.center[j]
        if j >= len(self.center):
            return self.right[(j - len(self.center)) % len(self.right)]
        return self.left[j % len(self.left)]

    def word(self, a: int, b: int) -> tuple:
        return tuple(self[i] for i in range(a, b + 1))

    def horizon(self) -> int:
        return abs(self.offset) + len(self.center) + len(self.left) + len(self.right)

    def same_as(self, other: "Point") -> bool:
        h = self.horizon() + other.horizon()
        span = h * max(len(self.left), 1) * max(len(other.left), 1) \
            * max(len(self.right), 1) * max(len(other.right), 1)
        return self.word(-span, span) == other.word(-span, span)

    def validate(self, g: Graph) -> "Point":
        h = self.horizon()
        if not g.is_path(self.word(-2 * h, 2 * h)):
            raise InputError("point is not a path of the shift")
        return self


def periodic_point(word: Sequence) -> Point:
    w = tuple(word)
    return Point(w, 0, w, w)


def point(center: Sequence, left: Sequence, right: Sequence, offset: int = 0) -> Point:
    return Point(tuple(center), offset, tuple(left), tuple(right))


@dataclass
class SeparationWitness:
    m: int
    alpha: RegularPartition
    cell_x: int
    cell_y: int

    def as_dict(self) -> dict:
        return {"m": self.m, "alpha_cells": len(self.alpha.cells),
                "alpha_window": list(self.alpha.window),
                "cell_x": self.cell_x, "cell_y": self.cell_y}


def separation_witness(x: Point, y: Point, P: RegularPartition, bound: int = 32) -> SeparationWitness:
    """Find a time ``m`` where the itineraries differ and build ``alpha = P ∩ sigma^{-m} P``.

    Times are searched in the order ``0, 1, -1, 2, -2, ...``.  The two points
    then lie in different cells of ``alpha`` at coordinate 0.
    """
    x.validate(P.base)
    y.validate(P.base)
    if x.same_as(y):
        raise NotSeparated("the two points coincide")
    for k in range(bound + 1):
        for m in ((0,) if k == 0 else (k, -k)):
            if P.locate(x, m) != P.locate(y, m):
                alpha = refine(P, P.shifted(m))
                cx, cy = alpha.locate(x), alpha.locate(y)
                assert cx != cy
                return SeparationWitness(m, alpha, cx, cy)
    raise NotSeparated(f"itineraries agree for |m| <= {bound}")
