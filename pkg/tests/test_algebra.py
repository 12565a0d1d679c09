import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import corpus_model
from frolicher.algebra import (BBAError, Bicomplex, CharExpr, ClosureError, ModelError, TwistedElement,
                               assemble_bicomplex, ce_differential, mask_indices, wedge, wedge_sign)
from frolicher.exactalg import ONE, ZERO, Matrix, Scalar
from frolicher.modelfile import parse_model
from frolicher.randgen import random_model

masks = st.integers(0, (1 << 8) - 1)
exps = st.lists(st.integers(-4, 4), min_size=3, max_size=3).map(lambda e: CharExpr(tuple(e)))


@given(masks, masks)
def test_wedge_sign_graded_commutative(a, b):
    if a & b:
        assert wedge_sign(a, b) == 0
        return
    sgn = (-1) ** (a.bit_count() * b.bit_count())
    assert wedge_sign(a, b) == sgn * wedge_sign(b, a)


@given(masks, masks, masks)
def test_wedge_sign_associative(a, b, c):
    if a & b or (a | b) & c:
        return
    assert wedge_sign(a, b) * wedge_sign(a | b, c) == wedge_sign(b, c) * wedge_sign(a, b | c)


@given(exps, exps, exps)
def test_character_group_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * a.inverse() == CharExpr.trivial(3)
    assert (a / b) * b == a
    assert (a * b) ** 2 == a ** 2 * b ** 2


def _leibniz_ok(m, a, b):
    """d(a^b) = da^b + (-1)^|a| a^db on untwisted monomials."""
    w = wedge(TwistedElement(CharExpr.trivial(m.k), a), TwistedElement(CharExpr.trivial(m.k), b))
    if w is None:
        return True
    sab, ab = w
    lhs = {k: v * sab for k, v in m.d_mono(ab.mask).items()}
    rhs: dict = {}
    for src, other, left, sign in ((a, b, True, 1), (b, a, False, (-1) ** a.bit_count())):
        for k, v in m.d_mono(src).items():
            s = wedge_sign(k, other) if left else wedge_sign(other, k)
            if s:
                key = k | other
                rhs[key] = rhs.get(key, ZERO) + v * s * sign
    clean = lambda d: {k: v for k, v in d.items() if v}
    return clean(lhs) == clean(rhs)


@pytest.mark.parametrize("name", ["iwasawa", "example2", "nakamura-type"])
def test_leibniz_on_corpus(name):
    m = corpus_model(name)
    n = 2 * m.n
    for a in range(1 << n):
        for b in (1 << i for i in range(n)):
            assert _leibniz_ok(m, a, b)


@given(st.integers(0, 500))
def test_random_models_square_to_zero(seed):
    m = random_model(seed)
    a = assemble_bicomplex(m)  # verifies del^2, delbar^2 and anticommutation
    assert sum(a.dims.values()) == 1 << (2 * m.n)


def test_conjugate_synthesis():
    m = corpus_model("example2")
    assert m.n == 4 and len(m.names) == 8
    assert m.names[4:] == ("cx1", "cy1", "cy2", "cy3")
    s, e = m.conjugate_element(TwistedElement(CharExpr((1,)), 0b10))
    assert e.prefactor == CharExpr((-1,)) and mask_indices(e.mask) == (5,)


def test_conjugate_of_differential():
    # d(cy2) is the conjugate of d(y2) = y1^cy1, i.e. cy1^y1 = -y1^cy1
    m = corpus_model("example2")
    d = m.d_mono(1 << m.index["cy2"])
    assert d == {(1 << m.index["y1"]) | (1 << m.index["cy1"]): -ONE}


MODEL_HEAD = "[model]\nname = t\n"


def test_nonzero_square_rejected():
    # d(y3^y2) = y1^y4^y2 is not zero
    text = MODEL_HEAD + """[generators]
y1 : d = y2^y4
y2 : d = 0
y3 : d = y1^y4
y4 : d = 0
y5 : d = y3^y2
"""
    with pytest.raises(ModelError, match="survives"):
        parse_model(text)


def test_02_term_rejected():
    text = MODEL_HEAD + "[generators]\ny1 : d = 0\ny2 : d = cy1^cy1\ny3 : d = cy1^cy2\n"
    with pytest.raises(ModelError):
        parse_model(text)


def test_inhomogeneous_rejected():
    text = MODEL_HEAD + """[base_chars]
chi : dlog10 = 1/2*x1 ; dlog01 = -1/2*cx1 ; kind = unitary ; conj = chi^-1
[generators]
x1 : factor = abelian
y1 : char = chi
y2 : char = 1 ; d = y1^x1
[flags]
assumption12 = true
"""
    with pytest.raises(ModelError):
        parse_model(text)


def test_nonunitary_lattice_rejected():
    text = MODEL_HEAD + """[base_chars]
ex : dlog10 = 1/2*x1 ; dlog01 = 1/2*cx1 ; kind = general ; conj = ex
[lattice]
ex
[generators]
x1 : factor = abelian
"""
    with pytest.raises(ModelError):
        parse_model(text)


def test_dependent_dlogs_rejected():
    text = MODEL_HEAD + """[base_chars]
a : dlog10 = 1/2*x1 ; dlog01 = -1/2*cx1 ; kind = unitary ; conj = a^-1
b : dlog10 = 1*x1 ; dlog01 = -1*cx1 ; kind = unitary ; conj = b^-1
[generators]
x1 : factor = abelian
"""
    with pytest.raises(ModelError):
        parse_model(text)


def test_selection_must_be_closed():
    m = corpus_model("iwasawa")
    with pytest.raises(ClosureError):
        # w3 alone is not closed since d w3 = w1^w2
        assemble_bicomplex(m, lambda e: e.mask in (0, 1 << m.index["w3"]))


def test_bicomplex_axioms_checked():
    one = Matrix([[ONE]])
    basis = {(0, 0): ["a"], (1, 0): ["b"], (0, 1): ["c"], (1, 1): ["e"]}
    d10 = {(0, 0): one, (0, 1): one}
    d01 = {(0, 0): one, (1, 0): one}
    with pytest.raises(BBAError):
        Bicomplex(basis, d10, d01)
    d10[(0, 1)] = Matrix([[-ONE]])
    b = Bicomplex(basis, d10, d01)
    assert b.dims[(1, 1)] == 1


def test_ce_differential_iwasawa():
    # [e1, e2] = -e3 gives d w3 = w1 ^ w2
    d = ce_differential(["w1", "w2", "w3"], {("w1", "w2"): {"w3": -1}}, complex_parallelizable=True)
    assert d["w3"] == [(ONE, ("w1", "w2"))] and d["w1"] == []


def test_ce_differential_checks_jacobi():
    br = {("a", "b"): {"c": 1}, ("b", "c"): {"a": 1}, ("a", "c"): {"d": 1}, ("c", "d"): {"a": 1}}
    with pytest.raises(ModelError, match="Jacobi"):
        ce_differential(["a", "b", "c", "d"], br)
    with pytest.raises(ModelError):
        ce_differential(["a", "b"], {("a", "b"): {"a": 1}, ("b", "a"): {"a": 1}})


def test_ce_differential_rejects_mixed_type_when_parallelizable():
    with pytest.raises(ModelError):
        ce_differential(["a", "ca"], {("a", "ca"): {"a": Scalar(0, 1)}}, complex_parallelizable=True)
