"""Exact integer linear algebra.

Matrices are lists of rows of Python ints.  A :class:`Lattice` is a subgroup
of ``Z^n`` stored by its canonical row Hermite basis, so two lattices are equal
exactly when their bases are equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

Matrix = list  # list[list[int]]


def zeros(m: int, n: int) -> Matrix:
    return [[0] * n for _ in range(m)]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(A: Matrix, ncols: int | None = None) -> Matrix:
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


def matmul(A: Matrix, B: Matrix, inner: int | None = None, ncols: int | None = None) -> Matrix:
    """Product ``A B``.  ``inner``/``ncols`` fix the shape when a factor is empty."""
    m = len(A)
    k = len(B) if inner is None else inner
    n = (len(B[0]) if B else 0) if ncols is None else ncols
    out = zeros(m, n)
    for i in range(m):
        Ai = A[i]
        row = out[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                for j in range(n):
                    b = Bt[j]
                    if b:
                        row[j] += a * b
    return out


def matvec(A: Matrix, v: Sequence[int]) -> list:
    return [sum(a * x for a, x in zip(row, v) if a and x) for row in A]


def matadd(A: Matrix, B: Matrix, scale: int = 1) -> Matrix:
    return [[a + scale * b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def matpow(A: Matrix, k: int) -> Matrix:
    n = len(A)
    result = identity(n)
    base = [row[:] for row in A]
    while k:
        if k & 1:
            result = matmul(result, base, n, n)
        k >>= 1
        if k:
            base = matmul(base, base, n, n)
    return result


def is_zero(A: Matrix) -> bool:
    return all(not x for row in A for x in row)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``x a + y b = g = gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


# --------------------------------------------------------------------------
# Hermite normal form


def row_hnf(rows: Iterable[Sequence[int]], ncols: int, transform: bool = False):
    """Row Hermite normal form.

    Returns ``(H, U, pivots)`` with ``U G = H`` for the input matrix ``G``;
    ``U`` is ``None`` unless ``transform`` is set.  The nonzero rows of ``H``
    come first, have positive pivots, and entries above each pivot are reduced
    into ``[0, pivot)``.
    """
    A = [list(r) for r in rows]
    k = len(A)
    U = identity(k) if transform else None
    r = 0
    pivots = []
    for c in range(ncols):
        if r == k:
            break
        for i in range(r + 1, k):
            b = A[i][c]
            if not b:
                continue
            a = A[r][c]
            if not a:
                A[r], A[i] = A[i], A[r]
                if U is not None:
                    U[r], U[i] = U[i], U[r]
                continue
            g, x, y = xgcd(a, b)
            p, q = -b // g, a // g
            Ar, Ai = A[r], A[i]
            A[r] = [x * s + y * t for s, t in zip(Ar, Ai)]
            A[i] = [p * s + q * t for s, t in zip(Ar, Ai)]
            if U is not None:
                Ur, Ui = U[r], U[i]
                U[r] = [x * s + y * t for s, t in zip(Ur, Ui)]
                U[i] = [p * s + q * t for s, t in zip(Ur, Ui)]
        piv = A[r][c]
        if not piv:
            continue
        if piv < 0:
            A[r] = [-s for s in A[r]]
            if U is not None:
                U[r] = [-s for s in U[r]]
            piv = -piv
        for i in range(r):
            q = A[i][c] // piv
            if q:
                A[i] = [s - q * t for s, t in zip(A[i], A[r])]
                if U is not None:
                    U[i] = [s - q * t for s, t in zip(U[i], U[r])]
        pivots.append(c)
        r += 1
    return A, U, pivots


def kernel_basis(A: Matrix, ncols: int) -> Matrix:
    """Basis (as rows) of ``{x in Z^ncols : A x = 0}``."""
    if ncols == 0:
        return []
    At = transpose(A, ncols) if A else [[] for _ in range(ncols)]
    H, U, pivots = row_hnf(At, len(A), transform=True)
    return [U[i] for i in range(len(pivots), ncols)]


# --------------------------------------------------------------------------
# Lattices


@dataclass(frozen=True)
class Lattice:
    """Subgroup of ``Z^n`` held as a canonical Hermite basis."""

    n: int
    basis: tuple
    pivots: tuple

    @classmethod
    def span(cls, n: int, gens: Iterable[Sequence[int]]) -> "Lattice":
        gens = [list(g) for g in gens if any(g)]
        if not gens:
            return cls(n, (), ())
        H, _, piv = row_hnf(gens, n)
        return cls(n, tuple(tuple(row) for row in H[: len(piv)]), tuple(piv))

    @classmethod
    def zero(cls, n: int) -> "Lattice":
        return cls(n, (), ())

    @classmethod
    def full(cls, n: int) -> "Lattice":
        return cls(n, tuple(tuple(r) for r in identity(n)), tuple(range(n)))

    @classmethod
    def kernel(cls, A: Matrix, n: int) -> "Lattice":
        return cls.span(n, kernel_basis(A, n))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def is_full(self) -> bool:
        return self.rank == self.n and all(self.basis[i][i] == 1 for i in range(self.n))

    def reduce(self, v: Sequence[int]) -> tuple[list, list]:
        """Return ``(coeffs, remainder)`` from echelon division of ``v``."""
        v = list(v)
        coeffs = []
        for row, p in zip(self.basis, self.pivots):
            q = v[p] // row[p]
            coeffs.append(q)
            if q:
                v = [s - q * t for s, t in zip(v, row)]
        return coeffs, v

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v)[1])

    def coords(self, v: Sequence[int]) -> list | None:
        """Coefficients of ``v`` in the basis, or ``None`` if ``v`` is outside."""
        c, rem = self.reduce(v)
        return None if any(rem) else c

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(self.contains(b) for b in other.basis)

    def __add__(self, other: "Lattice") -> "Lattice":
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        return Lattice.span(self.n, list(self.basis) + list(other.basis))

    def intersect(self, other: "Lattice") -> "Lattice":
        if self.is_zero() or other.is_zero():
            return Lattice.zero(self.n)
        if self.contains_lattice(other):
            return other
        if other.contains_lattice(self):
            return self
        r1 = self.rank
        # columns: basis vectors of self then negated basis vectors of other
        M = [[b[i] for b in self.basis] + [-b[i] for b in other.basis] for i in range(self.n)]
        gens = []
        for c in kernel_basis(M, r1 + other.rank):
            gens.append([sum(c[j] * self.basis[j][i] for j in range(r1)) for i in range(self.n)])
        return Lattice.span(self.n, gens)

    def image(self, A: Matrix, m: int) -> "Lattice":
        """Image under ``A`` (an ``m x n`` matrix)."""
        return Lattice.span(m, [matvec(A, b) for b in self.basis])

    def preimage(self, A: Matrix, n: int) -> "Lattice":
        """``{x in Z^n : A x in self}``."""
        r = self.rank
        M = [list(A[i]) + [-b[i] for b in self.basis] for i in range(self.n)]
        if not M:
            return Lattice.full(n)
        gens = [c[:n] for c in kernel_basis(M, n + r)]
        return Lattice.span(n, gens)

    def saturation(self) -> "Lattice":
        """Smallest pure sublattice containing ``self``."""
        if self.is_zero():
            return self
        perp = kernel_basis([list(b) for b in self.basis], self.n)
        if not perp:
            return Lattice.full(self.n)
        return Lattice.kernel(perp, self.n)

    def is_pure(self) -> bool:
        return self.saturation() == self

    def matrix(self) -> Matrix:
        return [list(b) for b in self.basis]


# --------------------------------------------------------------------------
# Smith normal form


@dataclass
class SmithForm:
    """``U A V = D`` with ``U, V`` unimodular and inverses kept alongside."""

    D: Matrix
    U: Matrix
    V: Matrix
    Uinv: Matrix
    Vinv: Matrix

    @property
    def diagonal(self) -> list:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]

    def invariant_factors(self) -> list:
        return [d for d in self.diagonal if d]


def smith_form(A: Matrix, m: int, n: int) -> SmithForm:
    D = [list(r) for r in A]
    U, Uinv = identity(m), identity(m)
    V, Vinv = identity(n), identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        for row in Uinv:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def add_row(src, dst, c):
        # row dst += c * row src
        D[dst] = [a + c * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]
        for row in Uinv:
            row[src] -= c * row[dst]

    def add_col(src, dst, c):
        # col dst += c * col src
        for row in D:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]
        Vinv[src] = [a - c * b for a, b in zip(Vinv[src], Vinv[dst])]

    def negate_row(i):
        D[i] = [-a for a in D[i]]
        U[i] = [-a for a in U[i]]
        for row in Uinv:
            row[i] = -row[i]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                a = D[i][j]
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            piv = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // piv
                    add_row(t, i, -q)
                    if D[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // piv
                    add_col(t, j, -q)
                    if D[t][j]:
                        dirty = True
            if dirty:
                # move the smallest leftover in row/column t to the pivot
                cand = [(abs(D[i][t]), i, t) for i in range(t + 1, m) if D[i][t]]
                cand += [(abs(D[t][j]), t, j) for j in range(t + 1, n) if D[t][j]]
                _, i, j = min(cand)
                if i != t:
                    swap_rows(i, t)
                if j != t:
                    swap_cols(j, t)
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if D[i][j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(bad, t, 1)
        if D[t][t] < 0:
            negate_row(t)
        t += 1
    return SmithForm(D, U, V, Uinv, Vinv)


def invariant_factors(A: Matrix, m: int, n: int) -> list:
    """Nonzero diagonal of the Smith form."""
    return smith_form(A, m, n).invariant_factors()


def solve(A: Matrix, b: Sequence[int], n: int) -> list | None:
    """Some integer ``x`` with ``A x = b``, or ``None``."""
    m = len(A)
    if m == 0:
        return [0] * n
    sf = smith_form(A, m, n)
    c = matvec(sf.U, b)
    y = [0] * n
    for i, ci in enumerate(c):
        d = sf.D[i][i] if i < n else 0
        if d:
            if ci % d:
                return None
            y[i] = ci // d
        elif ci:
            return None
    return matvec(sf.V, y)
