import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import corpus_model
from frolicher.algebra import CharExpr
from frolicher.modelfile import parse_model
from frolicher.randgen import random_cos_model, random_model
from frolicher.solvmodel import (ResolutionError, build_B_CORR, build_B_MMTT, euler_checks, pipeline_cos,
                                 pipeline_sps, resolve_characters, split_CD, weight_decomposition)

COS = ["torus1", "torus3", "iwasawa", "nakamura-type"]
SPS = ["example1-2pi", "example1-1", "example2"]


def test_unitary_parts_example1():
    m = corpus_model("example1-2pi")
    res = resolve_characters(m)
    ex, u = CharExpr((1, 0)), CharExpr((0, 1))
    assert res.unitary_part(ex) == u
    assert res.unitary_part(u) == u
    y1 = res.generators[1]
    assert y1.beta == u and y1.beta_trivial
    assert m.is_holomorphic(ex / u)


def test_lattice_changes_triviality():
    g2 = resolve_characters(corpus_model("example1-2pi")).generators[1]
    g1 = resolve_characters(corpus_model("example1-1")).generators[1]
    assert g2.beta_trivial and not g1.beta_trivial


def test_unresolvable_character():
    text = """[base_chars]
ex : dlog10 = 1/2*x1 ; dlog01 = 1/2*cx1 ; kind = general ; conj = ex
[generators]
x1 : factor = abelian
y1 : char = ex
[flags]
assumption12 = true
"""
    with pytest.raises(ResolutionError):
        resolve_characters(parse_model(text))


@pytest.mark.parametrize("name", SPS)
def test_weight_blocks_partition(name):
    m = corpus_model(name)
    blocks = weight_decomposition(m, "nil")
    nil = sum(1 for g in m.generators[: m.n] if g.factor != "abelian")
    assert sum(len(b.masks) for b in blocks) == 1 << (2 * nil)
    assert len({b.weight for b in blocks}) == len(blocks)


def test_holo_weight_blocks_nakamura():
    m = corpus_model("nakamura-type")
    blocks = weight_decomposition(m, "holo")
    assert sum(len(b.masks) for b in blocks) == 1 << m.n


@pytest.mark.parametrize("name", SPS)
def test_split_dims(name):
    sp = split_CD(corpus_model(name))
    for c, n in sp.B.dims.items():
        assert n == sp.C.dims[c] + sp.D.dims[c]
    assert sp.e2_D_zero and sp.e2_B_equals_C and sp.koszul_exact


def test_model_constructors_check_flags():
    with pytest.raises(Exception):
        build_B_MMTT(corpus_model("example2"))
    assert sum(build_B_CORR(corpus_model("example2")).dims.values()) == 128


@pytest.mark.parametrize("name", COS)
def test_pipeline_cos(name):
    rep = pipeline_cos(corpus_model(name))
    assert rep.ok, rep.lines()
    assert rep.values["r"] <= 2


@pytest.mark.parametrize("name", SPS)
def test_pipeline_sps(name):
    rep = pipeline_sps(corpus_model(name))
    assert rep.ok, rep.lines()


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_pipeline_sps_random(seed):
    rep = pipeline_sps(random_model(seed, max_nil=2))
    assert rep.ok, rep.lines()


@pytest.mark.parametrize("seed", range(4))
def test_pipeline_cos_random(seed):
    rep = pipeline_cos(random_cos_model(seed))
    assert rep.ok, rep.lines()


def test_euler_checks_detect_asymmetry():
    good = euler_checks({(0, 0): 1, (1, 1): 1, (0, 1): 1, (1, 0): 1}, [1, 2, 1], 1)
    assert all(good.values())
    bad = euler_checks({(0, 0): 1, (1, 1): 1}, [1, 1, 1], 1)
    assert not bad["sum (-1)^k b_k = 0"] and not bad["sum_q (-1)^q h^{p,q} = 0"]
