import pytest

from frolicher.corpus import corpus_get, corpus_names
from frolicher.modelfile import ModelSyntaxError, load_model, model_key, parse_model, serialize_model


@pytest.mark.parametrize("name", corpus_names())
def test_roundtrip(name):
    m = corpus_get(name).model
    text = serialize_model(m)
    again = parse_model(text, m.name)
    assert model_key(again) == model_key(m)
    assert serialize_model(again) == text


def test_example2_shape():
    m = corpus_get("example2").model
    assert m.n == 4 and len(m.names) == 8
    assert m.char_names == ("chi",)
    assert "y2 : " in serialize_model(m) and "y1^cy1" in corpus_get("example2").text


def test_empty_generators_is_unit_algebra():
    m = parse_model("[model]\nname = unit\n[generators]\n")
    assert m.n == 0 and m.all_masks() == [0]


def test_malformed_scalar_location():
    text = "[model]\nname = bad\n[generators]\ny1 : d = 0\ny2 : d = 1//2*y1^cy1\n"
    with pytest.raises(ModelSyntaxError) as e:
        parse_model(text)
    assert e.value.line == 5
    assert e.value.col == text.splitlines()[4].index("//")  # 0-based
    assert "column 11" in str(e.value)


@pytest.mark.parametrize("text", [
    "[model]\n[nonsense]\n",
    "[generators]\ny1 : bogus = 3\n",
    "[generators]\ny1 d = 0\n",
    "x = 1\n",
])
def test_syntax_errors(text):
    with pytest.raises(ModelSyntaxError):
        parse_model(text)


def test_unknown_generator_is_semantic(tmp_path):
    from frolicher.algebra import ModelError

    with pytest.raises(ModelError):
        parse_model("[generators]\ny1 : d = y7^y1\n")


def test_load_uses_file_stem(tmp_path):
    p = tmp_path / "heis.model"
    p.write_text("[generators]\na : d = 0\nb : d = 0\nc : d = a^b\n[flags]\ncomplex_parallelizable = true\n")
    m = load_model(p)
    assert m.name == "heis" and m.flags["complex_parallelizable"]


def test_comments_and_lattice_vectors():
    text = """# comment
[model]
name = t  # trailing
[base_chars]
u : dlog10 = -1/2*x1 ; dlog01 = 1/2*cx1 ; kind = unitary ; conj = u^-1
[lattice]
[2]
[generators]
x1 : factor = abelian
"""
    m = parse_model(text)
    assert m.lattice.hnf == ((2,),)
    assert "u^2" in serialize_model(m)
