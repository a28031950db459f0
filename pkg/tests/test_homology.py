import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import invariant_factors

from smalehom.homology import (
    ChainMap,
    FGPresentation,
    FilteredComplex,
    StationaryComplex,
    Term,
    check_abutment,
    homology,
    is_quasi_iso,
    smith_normal_form,
    spectral_sequence,
)
from smalehom.lattice import Lattice, identity, matmul


def test_smith_normal_form_examples():
    D = smith_normal_form([[2, 4], [6, 8]])
    assert [D.D[i][i] for i in range(2)] == [2, 4]
    assert FGPresentation(2, [[2, 0], [0, 3]]).invariants() == (0, (6,))
    assert FGPresentation(3, [[1, 1, 0]]).invariants() == (2, ())


def test_multiplication_by_two():
    C = StationaryComplex({1: Term.free([[1]]), 0: Term.free([[1]])}, {1: [[2]]})
    C.validate()
    assert homology(C, 1).is_zero()
    assert homology(C, 0).invariants() == (0, (2,))


def test_single_term_keeps_its_limit():
    C = StationaryComplex({0: Term.free([[2]])})
    H0 = homology(C, 0)
    assert H0.invariants() == (1, ())
    assert H0.group.H == [[2]]


def test_zero_differential():
    C = StationaryComplex({1: Term.free([[1]]), 0: Term.free([[1, 1], [1, 0]])})
    assert homology(C, 1).invariants() == (1, ())
    assert homology(C, 0).invariants() == (2, ())


def test_nilpotent_terms_vanish():
    C = StationaryComplex({0: Term.free([[0, 1], [0, 0]])})
    assert homology(C, 0).is_zero()


def _chain(terms, diffs):
    return StationaryComplex({N: Term.free(H) for N, H in terms.items()}, diffs)


def test_quasi_iso_examples():
    C = _chain({0: [[2]]}, {})
    f = ChainMap(C, C, {0: [[2]]})
    f.validate([0])
    assert is_quasi_iso(f, [0]).ok
    D = _chain({0: [[3]]}, {})
    rep = is_quasi_iso(ChainMap(D, D, {0: [[2]]}), [0])
    assert not rep.ok and rep.kind == "cokernel"
    rep = is_quasi_iso(ChainMap(C, C, {0: [[0]]}), [0])
    assert not rep.ok and rep.kind == "kernel" and rep.witness == [1]


def test_quasi_iso_onto_acyclic_cone():
    C = _chain({1: [[1]], 0: [[1]]}, {1: [[1]]})
    Z = StationaryComplex({})
    assert is_quasi_iso(ChainMap(C, Z, {}), [0, 1]).ok


def _two_column():
    C = _chain({1: [[1]], 0: [[1]]}, {1: [[1]]})
    levels = {1: {0: Lattice.zero(1), 1: Lattice.full(1)},
              0: {0: Lattice.full(1), 1: Lattice.full(1)}}
    return FilteredComplex(C, levels, 0, 1)


def test_single_entry_sequence():
    C = _chain({0: [[2]]}, {})
    fc = FilteredComplex(C, {0: {0: Lattice.full(1)}}, 0, 0)
    fc.validate()
    ss = spectral_sequence(fc)
    assert ss.r_star == 0
    assert ss.invariants(0) == {(0, 0): (1, ())}
    assert check_abutment(ss).ok


def test_two_columns_cancel_on_second_page():
    fc = _two_column()
    fc.validate()
    ss = spectral_sequence(fc)
    assert ss.invariants(1)[(1, 0)] == (1, ()) and ss.invariants(1)[(0, 0)] == (1, ())
    assert not ss.differential_zero[1]
    last = max(ss.pages)
    assert ss.invariants(2) == ss.invariants(last)
    assert all(v == (0, ()) for v in ss.invariants(2).values())
    assert all(ss.coherent.values())
    assert check_abutment(ss).ok


def _left_kernel(A, rows):
    if not A or not A[0]:
        return [list(r) for r in identity(rows)]
    vecs = sympy.Matrix(A).T.nullspace()
    out = []
    for v in vecs:
        den = sympy.ilcm(1, 1, *[sympy.fraction(x)[1] for x in v])
        out.append([int(x * den) for x in v])
    return out


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.integers(1, 4), st.integers(1, 3), st.data())
def test_integer_homology_matches_sympy(a, b, c, data):
    ints = st.integers(-3, 3)
    d2 = data.draw(st.lists(st.lists(ints, min_size=c, max_size=c), min_size=b, max_size=b))
    K = _left_kernel(d2, b)
    X = data.draw(st.lists(st.lists(ints, min_size=len(K), max_size=len(K)), min_size=a, max_size=a))
    d1 = matmul(X, K, len(K), b) if K else [[0] * b for _ in range(a)]
    C = StationaryComplex({2: Term.free(identity(c)), 1: Term.free(identity(b)),
                           0: Term.free(identity(a))}, {2: d2, 1: d1})
    C.validate()
    r1, r2 = sympy.Matrix(d1).rank(), sympy.Matrix(d2).rank()
    torsion = tuple(abs(int(x)) for x in invariant_factors(sympy.Matrix(d2)) if abs(int(x)) > 1)
    assert homology(C, 1).invariants() == (b - r1 - r2, torsion)
    tor0 = tuple(abs(int(x)) for x in invariant_factors(sympy.Matrix(d1)) if abs(int(x)) > 1)
    assert homology(C, 0).invariants() == (a - r1, tor0)
    assert homology(C, 2).invariants() == (c - r2, ())
