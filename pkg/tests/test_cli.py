import subprocess
import sys

import pytest

from frolicher.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_rstep_example2(capsys):
    code, out = run(capsys, "rstep", "--model", "example2")
    assert code == 0
    assert "r = 1" in out.splitlines()


def test_rstep_machine(capsys):
    code, out = run(capsys, "rstep", "--model", "example2-nilfactor", "--machine")
    assert code == 0 and "r=3" in out.splitlines()


def test_options_before_command(capsys):
    before = run(capsys, "--machine", "--model", "iwasawa", "rstep")
    after = run(capsys, "rstep", "--model", "iwasawa", "--machine")
    assert before == after and "r=2" in before[1].splitlines()


def test_corpus_run_torus3(capsys):
    code, out = run(capsys, "corpus", "run", "torus3")
    assert code == 0 and "diffs: 0" in out


def test_corpus_list(capsys):
    code, out = run(capsys, "corpus", "list", "--machine")
    assert code == 0 and "entry.iwasawa=cos 3 expectations" in out


def test_pages_iwasawa(capsys):
    code, out = run(capsys, "pages", "--model", "iwasawa", "--machine")
    assert code == 0
    rec = dict(line.split("=", 1) for line in out.splitlines())
    d1 = [int(v) for k, v in rec.items() if k.startswith("rank_d1.")]
    d2 = [int(v) for k, v in rec.items() if k.startswith("rank_d2.")]
    assert sum(d1) > 0 and sum(d2) == 0


def test_output_is_deterministic(capsys):
    outs = [run(capsys, "dolbeault", "--model", "nakamura-type", "--reps")[1] for _ in range(2)]
    assert outs[0] == outs[1]
    outs = [run(capsys, "selfcheck", "--count", "2", "--seed", "5", "--machine")[1] for _ in range(2)]
    assert outs[0] == outs[1] and "FAIL" not in outs[0]


def test_parallel_selfcheck_matches_serial(capsys):
    a = run(capsys, "selfcheck", "--count", "2", "--machine")
    b = run(capsys, "selfcheck", "--count", "2", "--machine", "--parallel")
    assert a == b and a[0] == 0


def test_usage_errors(capsys):
    assert run(capsys, "rstep")[0] == 2
    assert run(capsys, "rstep", "--model", "no-such-thing")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "pipeline-cos", "--model", "example2")[0] == 2


def test_syntax_error_record(tmp_path, capsys):
    p = tmp_path / "bad.model"
    p.write_text("[generators]\ny1 : d = 1//2*y1\n")
    code, out = run(capsys, "validate", "--model", str(p), "--machine")
    assert code == 2
    assert out.startswith("error=syntax line=2 col=")


def test_failed_verdict_exits_1(capsys):
    # the published table of this entry does not match the computed one
    code, out = run(capsys, "corpus", "run", "example2", "--machine")
    assert code == 1 and "verdict.h(1,1)=FAIL" in out


@pytest.mark.parametrize("cmd", ["validate", "cohomology", "dolbeault", "euler", "pipeline-sps"])
def test_commands_on_example1(cmd, capsys):
    code, out = run(capsys, cmd, "--model", "example1-2pi")
    assert code == 0 and "FAIL" not in out


def test_model_file_path(tmp_path, capsys):
    p = tmp_path / "heis.model"
    p.write_text("[generators]\na : d = 0\nb : d = 0\nc : d = a^b\n[flags]\ncomplex_parallelizable = true\n")
    code, out = run(capsys, "pipeline-cos", "--model", str(p))
    assert code == 0 and "r: 2" in out


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "frolicher.cli", "rstep", "--model", "torus1"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "r = 1" in out.stdout
