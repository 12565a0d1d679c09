"""Command line front end.

Text tables go to standard output; ``--machine`` switches to one
``key=value`` record per line.  Exit status is 0 when every verdict passes,
1 on a failed verdict or corpus diff, and 2 on usage or parse errors.
"""
from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .algebra import ClosureError, ModelError, ModelSpec, assemble_bicomplex, tot
from .exactalg import ScalarSyntaxError
from .modelfile import ModelSyntaxError, load_model

__all__ = ["main", "build_parser"]


class UsageError(Exception):
    pass


class Out:
    """Collects a report and renders it as text or key=value records."""

    def __init__(self, machine: bool):
        self.machine = machine
        self.lines = []
        self.failed = False

    def title(self, text):
        if self.machine:
            self.lines.append(f"command={text}")
        else:
            self.lines.append(f"== {text} ==")

    def value(self, key, v):
        if isinstance(v, (list, tuple)):
            v = " ".join(str(x) for x in v) if self.machine else list(v)
        self.lines.append(f"{_key(key)}={v}" if self.machine else f"{key}: {v}")

    def verdict(self, key, ok):
        self.failed |= not ok
        word = "pass" if ok else "FAIL"
        self.lines.append(f"verdict.{_key(key)}={word}" if self.machine else f"[{word}] {key}")

    def table(self, name, cells: dict, P=None, Q=None):
        P = max((p for p, _ in cells), default=0) if P is None else P
        Q = max((q for _, q in cells), default=0) if Q is None else Q
        if self.machine:
            for p in range(P + 1):
                for q in range(Q + 1):
                    self.lines.append(f"{_key(name)}.{p}.{q}={cells.get((p, q), 0)}")
            return
        w = max([len(str(v)) for v in cells.values()] + [len(str(Q)), 1])
        self.lines.append(f"{name} (rows p, columns q)")
        self.lines.append("p\\q " + " ".join(str(q).rjust(w) for q in range(Q + 1)))
        for p in range(P + 1):
            self.lines.append(str(p).rjust(3) + " " + " ".join(str(cells.get((p, q), 0)).rjust(w)
                                                             for q in range(Q + 1)))

    def record(self, key, v):
        """Detail line: indented in text mode, a plain record in machine mode."""
        if self.machine:
            self.lines.append(f"{_key(key)}={v}")
        else:
            self.lines.append(f"  {key}: {v}")

    def render(self) -> str:
        return "\n".join(self.lines) + "\n"


def _key(s) -> str:
    return str(s).replace(" ", "_")


# ---------------------------------------------------------------------------
# model and complex selection
# ---------------------------------------------------------------------------

def _load(args) -> ModelSpec:
    spec = args.model
    if spec is None:
        raise UsageError("this command needs --model <path or corpus name>")
    path = Path(spec)
    if path.exists():
        return load_model(path)
    from .corpus import corpus_get
    try:
        return corpus_get(spec).model
    except KeyError as e:
        raise UsageError(f"no such model file or corpus entry: {spec}") from e


def _bicomplex(model: ModelSpec, which: str):
    from .solvmodel import build_B_CORR, build_B_MMTT, split_CD

    cos = model.flags.get("complex_parallelizable")
    sps = model.flags.get("assumption12")
    if which == "auto":
        which = "B" if (cos or sps) else "A"
    if which == "A":
        return assemble_bicomplex(model, None, f"A({model.name})")
    if which == "B":
        if cos:
            return build_B_MMTT(model)
        if sps:
            return build_B_CORR(model)
        raise UsageError("B needs the complex_parallelizable or assumption12 flag")
    if not sps:
        raise UsageError(f"{which} needs the assumption12 flag")
    sp = split_CD(model)
    return sp.C if which == "C" else sp.D


def _fmt_vec(b, k_cells, v) -> str:
    """Nonzero coordinates of a Tot-degree vector as a linear combination of basis names."""
    terms = []
    for (p, q, start, stop) in k_cells:
        for i in range(start, stop):
            c = v[i]
            if c:
                terms.append(f"({c})*{b.element_name(b.basis[(p, q)][i - start])}")
    return " + ".join(terms) or "0"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_validate(args, out: Out):
    m = _load(args)
    out.title(f"validate {m.name}")
    out.value("generators", list(m.names[: m.n]))
    out.value("complex dimension", m.n)
    out.value("base characters", list(m.char_names))
    out.value("flags", sorted(k for k, v in m.flags.items() if v) or ["none"])
    out.verdict("model invariants", True)
    A = assemble_bicomplex(m, None)
    out.verdict("A is a bicomplex", True)
    out.value("dim A", sum(A.dims.values()))
    if m.flags.get("complex_parallelizable") or m.flags.get("assumption12"):
        try:
            B = _bicomplex(m, "B")
        except ClosureError as e:
            out.verdict("B closed under both differentials", False)
            out.record("error", str(e))
            return
        out.verdict("B closed under both differentials", True)
        out.value("dim B", sum(B.dims.values()))


def cmd_cohomology(args, out: Out):
    from .hodge import cohomology

    m = _load(args)
    b = _bicomplex(m, args.complex)
    out.title(f"cohomology {m.name} {b.name}")
    T = tot(b)
    try:
        res = cohomology(T, "both")
        out.verdict("harmonic dims = rank dims", True)
    except ArithmeticError as e:
        out.verdict("harmonic dims = rank dims", False)
        out.record("error", str(e))
        res = cohomology(T, "rank")
    out.value("betti", res.dims)
    if args.reps:
        for k in range(T.top + 1):
            for j, v in enumerate(res.reps[k]):
                out.record(f"rep.{k}.{j}", _fmt_vec(b, T.cells[k], v))


def cmd_dolbeault(args, out: Out):
    from .specseq import pages_direct

    m = _load(args)
    b = _bicomplex(m, args.complex)
    out.title(f"dolbeault {m.name} {b.name}")
    st = pages_direct(b, 1)
    out.table("h", st.dims(1), b.P, b.Q)
    if args.reps:
        for (p, q), reps in sorted(st[1].reps.items()):
            for j, v in enumerate(reps):
                terms = [f"({c})*{b.element_name(b.basis[(p, q)][i])}"
                         for i, c in enumerate(_cell_part(st, p, q, v)) if c]
                out.record(f"rep.{p}.{q}.{j}", " + ".join(terms) or "0")


def _cell_part(st, p, q, v):
    for (pp, qq, start, stop) in st.tot.cells[p + q]:
        if (pp, qq) == (p, q):
            return v[start:stop]
    return ()


def _stacks(args, b):
    from .specseq import compare_stacks, pages_direct, pages_iterative

    st = pages_direct(b, args.rmax)
    it = pages_iterative(b, args.rmax)
    return st, not compare_stacks(st, it)


def cmd_pages(args, out: Out):
    m = _load(args)
    b = _bicomplex(m, args.complex)
    out.title(f"pages {m.name} {b.name}")
    st, agree = _stacks(args, b)
    for r in range(st.rmax + 1):
        out.table(f"E{r}", st.dims(r), b.P, b.Q)
        if r >= 1:
            out.table(f"rank d{r}", st.ranks(r), b.P, b.Q)
    out.verdict("direct and iterative pages agree", agree)


def cmd_rstep(args, out: Out):
    from .specseq import degeneracy_step

    m = _load(args)
    b = _bicomplex(m, args.complex)
    out.title(f"rstep {m.name} {b.name}")
    st, agree = _stacks(args, b)
    for r in range(1, st.rmax + 1):
        rk = sum(st.ranks(r).values())
        out.value(f"d{r} total rank", rk)
    r = degeneracy_step(st)
    if out.machine:
        out.value("r", r)
    else:
        out.lines.append(f"r = {r}")
    out.verdict("direct and iterative pages agree", agree)


def _report(out: Out, rep):
    for k, v in rep.values.items():
        out.value(k, v)
    for k, v in rep.verdicts.items():
        out.verdict(k, v)


def cmd_pipeline_cos(args, out: Out):
    from .solvmodel import pipeline_cos

    m = _load(args)
    out.title(f"pipeline-cos {m.name}")
    if not m.flags.get("complex_parallelizable"):
        raise UsageError("pipeline-cos needs the complex_parallelizable flag")
    _report(out, pipeline_cos(m))


def cmd_pipeline_sps(args, out: Out):
    from .solvmodel import pipeline_sps

    m = _load(args)
    out.title(f"pipeline-sps {m.name}")
    if not m.flags.get("assumption12"):
        raise UsageError("pipeline-sps needs the assumption12 flag")
    _report(out, pipeline_sps(m))


def cmd_euler(args, out: Out):
    from .hodge import betti
    from .solvmodel import euler_checks
    from .specseq import pages_direct

    m = _load(args)
    b = _bicomplex(m, args.complex)
    out.title(f"euler {m.name} {b.name}")
    h = pages_direct(b, 1).dims(1)
    bt = betti(tot(b))
    out.table("h", h, b.P, b.Q)
    out.value("betti", bt)
    for k, v in euler_checks(h, bt, m.n).items():
        out.verdict(k, v)


def cmd_corpus(args, out: Out):
    from .corpus import corpus_get, corpus_names, diff_entry, evaluate

    if args.action == "list":
        out.title("corpus list")
        for n in corpus_names():
            e = corpus_get(n)
            out.record(f"entry.{n}", f"{e.kind} {len(e.expected)} expectations")
        return
    if not args.name:
        raise UsageError("corpus run needs an entry name")
    try:
        entry = corpus_get(args.name)
    except KeyError as e:
        raise UsageError(str(e.args[0])) from e
    out.title(f"corpus run {entry.name}")
    got = evaluate(entry)
    diffs = {k for k, *_ in diff_entry(entry, got)}
    for key, ex in entry.expected.items():
        g = got.get(key, 0 if key.startswith(("h(", "B(")) else None)
        ok = key not in diffs
        if isinstance(ex.value, dict):
            shown = "table" if ok else f"expected {sorted(ex.value.items())} got {sorted(g.items())}"
        else:
            shown = f"{g}" if ok else f"expected {ex.op} {ex.value} got {g}"
        out.record(f"{key} [{ex.tag}]", shown)
        out.verdict(f"{key}", ok)
    out.value("diffs", len(diffs))


def _self_bicomplex(seed):
    from .checks import bicomplex_suite
    from .randgen import random_bicomplex

    return bicomplex_suite(random_bicomplex(seed))


def _self_model(seed):
    from .checks import bicomplex_suite, model_suite
    from .randgen import random_model

    m = random_model(seed, max_nil=2)
    res = model_suite(m)
    res.update({f"B: {k}": v for k, v in bicomplex_suite(_bicomplex(m, "B")).items()})
    return res


def cmd_selfcheck(args, out: Out):
    out.title(f"selfcheck seed={args.seed} count={args.count}")
    seeds = [args.seed + i for i in range(args.count)]
    jobs = [("bicomplex", _self_bicomplex), ("model", _self_model)]
    for label, fn in jobs:
        if args.parallel:
            with ProcessPoolExecutor() as ex:
                results = list(ex.map(fn, seeds))
        else:
            results = [fn(s) for s in seeds]
        agg: dict = {}
        for s, res in zip(seeds, results):
            for k, v in res.items():
                agg.setdefault(k, []).append((s, v))
        for k, vs in agg.items():
            bad = [s for s, v in vs if not v]
            out.verdict(f"{label}: {k}", not bad)
            if bad:
                out.record(f"failing seeds {label}: {k}", " ".join(map(str, bad)))


COMMANDS = {
    "validate": cmd_validate, "cohomology": cmd_cohomology, "dolbeault": cmd_dolbeault,
    "pages": cmd_pages, "rstep": cmd_rstep, "pipeline-cos": cmd_pipeline_cos,
    "pipeline-sps": cmd_pipeline_sps, "euler": cmd_euler, "corpus": cmd_corpus,
    "selfcheck": cmd_selfcheck,
}


def _common(sub: bool) -> argparse.ArgumentParser:
    # subcommand copies suppress defaults so options given before the command survive
    kw = {"default": argparse.SUPPRESS} if sub else {}
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", help="model file path or corpus entry name", **kw)
    common.add_argument("--machine", action="store_true", help="key=value output", **kw)
    common.add_argument("--reps", action="store_true", help="print representatives", **kw)
    common.add_argument("--rmax", type=int, help="last page to compute", **(kw or {"default": None}))
    common.add_argument("--seed", type=int, help="first seed for selfcheck", **(kw or {"default": 0}))
    common.add_argument("--count", type=int, help="instances per selfcheck family", **(kw or {"default": 10}))
    common.add_argument("--parallel", action="store_true", help="evaluate selfcheck instances in worker processes",
                        **kw)
    common.add_argument("--complex", choices=("auto", "A", "B", "C", "D"),
                        help="which bicomplex of the model to use (default: the twisted model when flagged)",
                        **(kw or {"default": "auto"}))
    common.add_argument("--timing", action="store_true", help="report elapsed time on stderr", **kw)
    return common


def build_parser() -> argparse.ArgumentParser:
    common, sub_common = _common(False), _common(True)
    p = argparse.ArgumentParser(prog="frolicher", parents=[common],
                                description="Exact Frolicher spectral sequences of solvmanifold models.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[sub_common])
        if name == "corpus":
            sp.add_argument("action", choices=("list", "run"))
            sp.add_argument("name", nargs="?")
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    out = Out(args.machine)
    t0 = time.perf_counter()
    code = 0
    try:
        COMMANDS[args.command](args, out)
        code = 1 if out.failed else 0
    except (ModelSyntaxError, ScalarSyntaxError) as e:
        line = getattr(e, "line", 0)
        col = getattr(e, "col", 0)
        out.lines.append(f"error=syntax line={line} col={col} message={e}" if out.machine
                         else f"syntax error at line {line}, column {col}: {e}")
        code = 2
    except UsageError as e:
        out.lines.append(f"error=usage message={e}" if out.machine else f"usage error: {e}")
        code = 2
    except ModelError as e:
        out.lines.append(f"error=model message={e}" if out.machine else f"model error: {e}")
        code = 2
    sys.stdout.write(out.render())
    sys.stdout.flush()
    if args.timing:
        print(f"elapsed {time.perf_counter() - t0:.3f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
