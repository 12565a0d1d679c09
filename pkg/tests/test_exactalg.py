from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frolicher.exactalg import (I, ONE, ZERO, IntLattice, Matrix, Scalar, ScalarSyntaxError, Subspace,
                                image, kernel_basis, lattice_member, preimage, quotient_basis, row_reduce,
                                solve)

fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)
scalars = st.builds(Scalar, fracs, fracs)


def matrices(max_rows=5, max_cols=5):
    small = st.builds(Scalar, st.integers(-2, 2), st.integers(-1, 1))
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)
            .map(lambda rows: Matrix(rows, c))))


def test_parse_forms():
    assert Scalar.parse("3") == Scalar(3)
    assert Scalar.parse("-1/2") == Scalar(Fraction(-1, 2))
    assert Scalar.parse("i") == I
    assert Scalar.parse("2*i") == Scalar(0, 2)
    assert Scalar.parse("1/2-3/4*i") == Scalar(Fraction(1, 2), Fraction(-3, 4))
    assert Scalar.parse(" -i ") == -I


@pytest.mark.parametrize("bad,col", [("1//2", 1), ("", 0), ("1 2", 2), ("*i", 0)])
def test_parse_errors_report_column(bad, col):
    with pytest.raises(ScalarSyntaxError) as e:
        Scalar.parse(bad)
    assert e.value.col == col


@given(scalars)
def test_str_parse_roundtrip(a):
    assert Scalar.parse(str(a)) == a


@given(scalars, scalars, scalars)
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    if b:
        assert (a / b) * b == a


@given(scalars, scalars)
def test_product_matches_complex_formula(a, b):
    # (x + yi)(u + vi) computed with plain Fractions
    x, y, u, v = a.real, a.imag, b.real, b.imag
    p = a * b
    assert (p.real, p.imag) == (x * u - y * v, x * v + y * u)


def test_no_floats():
    with pytest.raises(TypeError):
        Scalar.coerce(0.5)


@settings(max_examples=60)
@given(matrices())
def test_rank_nullity(m):
    r, rref, t = row_reduce(m)
    assert r + kernel_basis(m).dim == m.ncols
    assert t @ m == rref
    assert m.T.rank() == r == m.H.rank()
    for v in kernel_basis(m).basis:
        assert not any(m.apply(v))


@settings(max_examples=60)
@given(matrices(), st.data())
def test_solve_consistent(m, data):
    x = data.draw(st.lists(st.builds(Scalar, st.integers(-3, 3)), min_size=m.ncols, max_size=m.ncols))
    b = m.apply(x)
    y = solve(m, b)
    assert y is not None and m.apply(y) == b


def test_solve_inconsistent():
    m = Matrix([[1, 1], [2, 2]])
    assert solve(m, [1, 3]) is None


@settings(max_examples=40)
@given(matrices(4, 4), matrices(4, 4))
def test_subspace_sum_and_intersection_dims(a, b):
    n = 4
    if a.ncols != n or b.ncols != n:
        return
    u = Subspace(n, a.rows)
    w = Subspace(n, b.rows)
    assert (u + w).dim + u.intersect(w).dim == u.dim + w.dim
    for v in u.intersect(w).basis:
        assert u.contains(v) and w.contains(v)


def test_quotient_and_preimage():
    f = Matrix([[1, 0, 0], [0, 1, 0]])
    v = Subspace.full(3)
    w = Subspace(3, [[0, 0, 1]])
    d, reps = quotient_basis(v, w)
    assert d == 2 and len(reps) == 2
    assert preimage(f, Subspace.zero(2)) == w
    assert image(f).dim == 2
    with pytest.raises(ValueError):
        quotient_basis(w, v)


def test_subspace_canonical():
    a = Subspace(2, [[1, 1], [0, I]])
    assert a == Subspace.full(2)
    assert a.coordinates([3, 4]) is not None


def test_lattice_membership():
    lat = IntLattice(2, [(2, 0), (1, 3)])
    assert (3, 3) in lat
    assert (1, 0) not in lat
    assert (0, 6) in lat
    assert IntLattice(2, [(1, 3), (2, 0), (3, 3)]) == lat
    with pytest.raises(ValueError):
        lattice_member((1, 2, 3), lat)


@given(st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5)), max_size=3),
       st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_lattice_contains_combinations(gens, coef):
    lat = IntLattice(3, gens)
    v = [sum(c * g[i] for c, g in zip(coef, gens)) for i in range(3)]
    assert tuple(v) in lat
    assert IntLattice(3, list(lat.hnf)) == lat


def test_empty_lattice():
    lat = IntLattice(2)
    assert (0, 0) in lat and (1, 0) not in lat


def test_matrix_shapes():
    m = Matrix([[1, 2, 3], [4, 5, 6]])
    assert m.shape == (2, 3) and m.T.shape == (3, 2)
    assert (m @ Matrix.identity(3)) == m
    assert Matrix.zeros(2, 2).is_zero()
    assert m.conj() == m and (Matrix([[I]]).H == Matrix([[-I]]))
    assert ZERO + ONE == ONE
