import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import corpus_bicomplexes, twisted
from frolicher.algebra import Complex, tot
from frolicher.checks import adjoint_failures
from frolicher.exactalg import ONE, ZERO, Matrix
from frolicher.hodge import (AdjointnessError, bar_star, check_pd_type, cohomology, hodge_decompose,
                             induced_map, laplacian)
from frolicher.randgen import random_bicomplex

PD_CASES = [(n, k) for n in ("torus3", "iwasawa", "nakamura-type", "example1-2pi", "example1-1")
            for k in ("B", "C", "A")]


@pytest.mark.parametrize("name,key", PD_CASES)
def test_pd_type(name, key):
    c = tot(corpus_bicomplexes(name)[key])
    rep = check_pd_type(c)
    assert rep.ok, rep.failures
    assert rep.top == c.top


def test_remainder_is_not_pd():
    from frolicher.solvmodel import split_CD
    from conftest import corpus_model

    d = split_CD(corpus_model("example1-2pi")).D
    assert not check_pd_type(tot(d)).ok


@pytest.mark.parametrize("name", ["iwasawa", "example1-2pi"])
def test_bar_star_defines_inner_product(name):
    # e_i ^ *e_j = delta_ij vol on the orthonormal monomial basis
    c = tot(twisted(name))
    pd = check_pd_type(c)
    for k in range(c.top + 1):
        n = c.dim(k)
        for i in range(n):
            for j in range(n):
                ei = [ONE if t == i else ZERO for t in range(n)]
                ej = [ONE if t == j else ZERO for t in range(n)]
                v = c.product(k, ei, c.top - k, bar_star(c, k, ej, pd))
                assert v == ((ONE if i == j else ZERO),)


@pytest.mark.parametrize("name", ["iwasawa", "example1-2pi"])
def test_bar_star_squares_to_sign(name):
    c = tot(twisted(name))
    pd = check_pd_type(c)
    n = c.top
    for k in range(n + 1):
        for i in range(c.dim(k)):
            e = [ONE if t == i else ZERO for t in range(c.dim(k))]
            twice = bar_star(c, n - k, bar_star(c, k, e, pd), pd)
            assert twice == tuple(x * (-1) ** (k * (n - k)) for x in e)


@pytest.mark.parametrize("name,key", PD_CASES)
def test_adjoint_hodge_and_harmonic(name, key):
    c = tot(corpus_bicomplexes(name)[key])
    hd = laplacian(c)
    assert hd.adjoint_checked
    assert adjoint_failures(c, hd) == []
    rank_dims = cohomology(c, "rank").dims
    for k in range(c.top + 1):
        h, imd, imds = hodge_decompose(c, k, hd)
        assert h.dim + imd.dim + imds.dim == c.dim(k)
        assert h.dim == rank_dims[k]
        for v in h.basis:
            assert not any(c.dmat(k).apply(v))
            assert not any(hd.dstar[k].apply(v)) if k else True


def test_adjointness_failure_is_reported():
    # doubling d in degree 1 keeps d^2 = 0 but breaks -*d* = d^H
    c = tot(twisted("iwasawa"))
    c.d[1] = c.d[1].scale(ONE + ONE)
    with pytest.raises(AdjointnessError):
        laplacian(c)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_plain_complexes_use_conjugate_transpose(seed):
    c = tot(random_bicomplex(seed))
    assert c.multiply is None
    res = cohomology(c, "both")  # raises if harmonic and rank dims disagree
    assert res.route == "both"


def test_induced_map_injective_for_pd_subalgebra():
    bs = corpus_bicomplexes("example1-2pi")
    im = induced_map(tot(bs["C"]), tot(bs["A"]))
    assert im.sub_pd and im.amb_pd and im.is_injective


def test_induced_map_fails_without_duality():
    # <1, w1, w2, w1^w2> is a sub-DGA of the Iwasawa algebra, not of PD type;
    # w1^w2 = d w3 dies in the ambient cohomology
    from frolicher.algebra import assemble_bicomplex
    from conftest import corpus_model

    m = corpus_model("iwasawa")
    keep = {0, 1, 2, 3}
    sub = assemble_bicomplex(m, lambda e: e.mask in keep)
    amb = assemble_bicomplex(m)
    im = induced_map(tot(sub), tot(amb))
    assert not im.sub_pd
    assert im.injective[1] and not im.injective[2]


def test_not_a_chain_map_detected():
    c = Complex([1, 1], [Matrix([[ONE]])])
    z = Complex([1, 1], [Matrix([[ZERO]])])
    with pytest.raises(ArithmeticError):
        induced_map(z, c, {0: Matrix([[ONE]]), 1: Matrix([[ONE]])})
