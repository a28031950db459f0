import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import invariant_factors as sympy_invariants

from smalehom.lattice import (
    Lattice,
    identity,
    invariant_factors,
    kernel_basis,
    matmul,
    matvec,
    row_hnf,
    smith_form,
    solve,
)


def matrices(max_rows=4, max_cols=4, lo=-6, hi=6):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n),
                               min_size=m, max_size=m)))


def det(M):
    return int(sympy.Matrix(M).det())


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_smith_form_recomposes_and_matches_sympy(A):
    m, n = len(A), len(A[0])
    sf = smith_form(A, m, n)
    assert matmul(matmul(sf.U, A, m, n), sf.V, n, n) == sf.D
    assert abs(det(sf.U)) == 1 and abs(det(sf.V)) == 1
    assert matmul(sf.U, sf.Uinv, m, m) == identity(m)
    assert matmul(sf.V, sf.Vinv, n, n) == identity(n)
    diag = sf.invariant_factors()
    assert all(b % a == 0 for a, b in zip(diag, diag[1:]))
    expected = [abs(int(d)) for d in sympy_invariants(sympy.Matrix(A)) if d != 0]
    assert diag == expected


def test_smith_examples():
    assert invariant_factors(identity(3), 3, 3) == [1, 1, 1]
    assert smith_form([[2, 4], [6, 8]], 2, 2).diagonal == [2, 4]
    assert smith_form([[0, 0], [0, 0]], 2, 2).diagonal == [0, 0]


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_kernel_basis_spans_the_kernel(A):
    n = len(A[0])
    K = kernel_basis(A, n)
    for k in K:
        assert not any(matvec(A, k))
    assert len(K) == n - sympy.Matrix(A).rank()
    assert Lattice.span(n, K).is_pure()


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_hnf_row_space(A):
    n = len(A[0])
    H, U, piv = row_hnf(A, n, transform=True)
    assert len(piv) == sympy.Matrix(A).rank()
    assert matmul(U, A, len(A), n) == H
    assert abs(det(U)) == 1
    assert not any(any(r) for r in H[len(piv):])
    for i, c in enumerate(piv):
        assert H[i][c] > 0 and all(0 <= H[j][c] < H[i][c] for j in range(i))


@settings(max_examples=50, deadline=None)
@given(matrices(3, 3, -4, 4), matrices(3, 3, -4, 4))
def test_sum_and_intersection(A, B):
    n = 3
    A = [r + [0] * (n - len(r)) for r in A]
    B = [r + [0] * (n - len(r)) for r in B]
    LA, LB = Lattice.span(n, A), Lattice.span(n, B)
    S, I = LA + LB, LA.intersect(LB)
    assert S.contains_lattice(LA) and S.contains_lattice(LB)
    assert LA.contains_lattice(I) and LB.contains_lattice(I)
    assert S.rank + I.rank == LA.rank + LB.rank


@settings(max_examples=50, deadline=None)
@given(matrices(3, 3, -4, 4), st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_preimage_and_solve(A, x):
    n = len(A[0])
    x = x[:n]
    b = matvec(A, x)
    y = solve(A, b, n)
    assert y is not None and matvec(A, y) == b
    target = Lattice.span(len(A), [b])
    assert target.preimage(A, n).contains(x)


def test_solve_reports_no_solution():
    assert solve([[2]], [1], 1) is None
