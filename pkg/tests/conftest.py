import functools

import pytest

from frolicher.checks import model_bicomplexes
from frolicher.corpus import corpus_get, corpus_names


@functools.lru_cache(maxsize=None)
def corpus_model(name):
    return corpus_get(name).model


@functools.lru_cache(maxsize=None)
def corpus_bicomplexes(name):
    m = corpus_model(name)
    if m.flags.get("complex_parallelizable") or m.flags.get("assumption12"):
        return model_bicomplexes(m)
    from frolicher import assemble_bicomplex
    return {"A": assemble_bicomplex(m)}


@functools.lru_cache(maxsize=None)
def twisted(name):
    """The model bicomplex a corpus entry is about (B when flagged, else A)."""
    bs = corpus_bicomplexes(name)
    return bs.get("B", bs["A"])


@pytest.fixture(params=corpus_names())
def corpus_name(request):
    return request.param


# one summary line per acceptance criterion, printed after the run
CRITERIA: dict = {}


def record_criterion(number: int, ok: bool, detail: str):
    CRITERIA[number] = (ok, detail)
    assert ok, detail


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        ok, detail = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
