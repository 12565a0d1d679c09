"""Plain-text model files.

Example::

    [model]
    name = heisenberg-like
    [base_chars]
    chi : dlog10 = 1/2*x1 ; dlog01 = -1/2*cx1 ; kind = unitary ; conj = chi^-1
    [lattice]
    chi^2
    [generators]
    x1 : char = 1 ; d = 0 ; factor = abelian
    y1 : char = chi ; d = 0
    y2 : char = 1 ; d = y1^cy1
    [flags]
    assumption12 = true

Coefficients are Gaussian rationals (``(1/2+i)*x1^x2``) or names declared
in ``[scalars]``.  Conjugate generators carry a ``c`` prefix.
"""
from __future__ import annotations

import re
from pathlib import Path

from .algebra import CharDecl, CharExpr, GenDecl, ModelDescription, ModelSpec, build_model
from .exactalg import Scalar, ScalarSyntaxError

__all__ = ["ModelSyntaxError", "parse_model", "parse_model_text", "load_model", "serialize_model",
           "model_key"]

SECTIONS = ("model", "scalars", "base_chars", "lattice", "generators", "flags")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


class ModelSyntaxError(ValueError):
    def __init__(self, msg: str, line: int, col: int = 0):
        super().__init__(f"line {line}, column {col + 1}: {msg}")
        self.line = line
        self.col = col


def _split_top(s: str, seps: str):
    """Split at separator characters outside parentheses; yields ``(piece, offset)``."""
    depth = 0
    start = 0
    out = []
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in seps and depth == 0:
            out.append((s[start:i], start, ch))
            start = i + 1
    out.append((s[start:], start, None))
    return out


class _Ctx:
    def __init__(self, line: int, base_col: int, scalars: dict):
        self.line = line
        self.col = base_col
        self.scalars = scalars

    def err(self, msg, off=0):
        raise ModelSyntaxError(msg, self.line, self.col + off)


def _scalar(text: str, ctx: _Ctx, off: int) -> Scalar:
    t = text.strip()
    lead = len(text) - len(text.lstrip())
    if t in ctx.scalars:
        return ctx.scalars[t]
    if t.startswith("(") and t.endswith(")"):
        inner = t[1:-1]
        try:
            return Scalar.parse(inner)
        except ScalarSyntaxError as e:
            ctx.err(f"bad scalar: {e.args[0]}", off + lead + 1 + e.col)
    try:
        return Scalar.parse(t)
    except ScalarSyntaxError as e:
        ctx.err(f"bad scalar: {e.args[0]}", off + lead + e.col)


def _terms(text: str, ctx: _Ctx, off: int = 0):
    """Signed terms ``(Scalar, [names])`` of a linear combination of wedge monomials."""
    if text.strip() == "0":
        return []
    pieces = []
    for piece, start, sep in _split_top(text, "+-"):
        pieces.append((piece, start))
    # re-attach signs: the separator before each piece is its sign
    out = []
    sign = 1
    seps = [None] + [sep for _, _, sep in _split_top(text, "+-")][:-1]
    for (piece, start), sep in zip(pieces, seps):
        if sep == "-":
            sign = -1
        elif sep == "+":
            sign = 1
        if not piece.strip():
            if sep is None or start == 0:
                continue
            ctx.err("empty term", off + start)
        factors = _split_top(piece, "*")
        coef = Scalar(sign)
        mono = None
        for f, fstart, _ in factors:
            fs = f.strip()
            parts = [p.strip() for p in fs.split("^")]
            if fs and fs != "i" and not fs.startswith("(") and all(_NAME.match(p) for p in parts) \
                    and fs not in ctx.scalars:
                if mono is not None:
                    ctx.err("two monomials in one term", off + start + fstart)
                mono = parts
            else:
                coef = coef * _scalar(f, ctx, off + start + fstart)
        if mono is None:
            ctx.err("term without generators", off + start)
        out.append((coef, tuple(mono)))
    return out


def _charexpr(text: str, ctx: _Ctx, off: int = 0) -> dict:
    t = text.strip()
    if t == "1":
        return {}
    out: dict = {}
    for f, fstart, _ in _split_top(t, "*"):
        fs = f.strip()
        m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)(?:\s*\^\s*(-?\d+))?", fs)
        if not m:
            ctx.err(f"bad character factor {fs!r}", off + fstart)
        out[m.group(1)] = out.get(m.group(1), 0) + int(m.group(2) or 1)
    return out


def _fields(body: str, ctx: _Ctx, off: int) -> dict:
    out = {}
    for piece, start, _ in _split_top(body, ";"):
        if not piece.strip():
            continue
        if "=" not in piece:
            ctx.err("expected key = value", off + start)
        k, v = piece.split("=", 1)
        key = k.strip()
        if key in out:
            ctx.err(f"duplicate field {key!r}", off + start)
        out[key] = (v, off + start + len(k) + 1)
    return out


def parse_model_text(text: str, name: str = "model") -> ModelDescription:
    """Parse model text into an unvalidated :class:`ModelDescription`."""
    desc = ModelDescription(name=name)
    section = None
    scalars: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        lead = len(line) - len(line.lstrip())
        s = line.strip()
        if s.startswith("[") and not (section == "lattice" and re.fullmatch(r"\[[\s\d,+-]*\]", s)):
            m = re.fullmatch(r"\[\s*([A-Za-z_0-9]+)\s*\]", s)
            if not m or m.group(1) not in SECTIONS:
                raise ModelSyntaxError(f"unknown section header {s}", lineno, lead)
            section = m.group(1)
            continue
        ctx = _Ctx(lineno, 0, scalars)
        if section is None:
            ctx.err("content before the first section header", lead)
        if section in ("model", "scalars", "flags"):
            if "=" not in s:
                ctx.err("expected key = value", lead)
            k, v = line.split("=", 1)
            key = k.strip()
            voff = len(k) + 1
            if section == "model":
                if key != "name":
                    ctx.err(f"unknown model field {key!r}", lead)
                desc.name = v.strip()
            elif section == "scalars":
                if not _NAME.match(key):
                    ctx.err(f"bad scalar name {key!r}", lead)
                scalars[key] = _scalar(v, ctx, voff)
                desc.scalars[key] = scalars[key]
            else:
                val = v.strip().lower()
                if val not in ("true", "false"):
                    ctx.err("flag values are true or false", voff)
                desc.flags[key] = val == "true"
            continue
        if section == "lattice":
            if s.startswith("[") or s.startswith("("):
                try:
                    vec = [int(x) for x in s.strip("[]()").split(",") if x.strip()]
                except ValueError:
                    ctx.err("bad exponent vector", lead)
                desc.lattice.append(vec)
            else:
                desc.lattice.append(_charexpr(line, ctx))
            continue
        # base_chars and generators: "name : field ; field"
        if ":" not in line:
            ctx.err("expected 'name : fields'", lead)
        head, body = line.split(":", 1)
        nm = head.strip()
        if not _NAME.match(nm):
            ctx.err(f"bad name {nm!r}", lead)
        f = _fields(body, ctx, len(head) + 1)
        if section == "base_chars":
            decl = CharDecl(nm)
            for key, (v, voff) in f.items():
                if key in ("dlog10", "dlog01"):
                    form = {}
                    for c, mono in _terms(v, ctx, voff):
                        if len(mono) != 1:
                            ctx.err(f"{key} must be a 1-form", voff)
                        form[mono[0]] = form.get(mono[0], Scalar(0)) + c
                    setattr(decl, key, form)
                elif key == "kind":
                    decl.kind = v.strip()
                elif key == "conj":
                    decl.conj = _charexpr(v, ctx, voff)
                else:
                    ctx.err(f"unknown character field {key!r}", voff)
            desc.base_chars.append(decl)
        else:
            g = GenDecl(nm)
            for key, (v, voff) in f.items():
                if key == "char":
                    g.char = _charexpr(v, ctx, voff)
                elif key == "d":
                    g.d = _terms(v, ctx, voff)
                elif key == "bidegree":
                    m = re.fullmatch(r"\s*\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*", v)
                    if not m:
                        ctx.err("bidegree must look like (1,0)", voff)
                    g.bidegree = (int(m.group(1)), int(m.group(2)))
                elif key == "factor":
                    g.factor = v.strip()
                elif key in ("beta", "gamma"):
                    setattr(g, key, _charexpr(v, ctx, voff))
                else:
                    ctx.err(f"unknown generator field {key!r}", voff)
            desc.generators.append(g)
    return desc


def parse_model(text: str, name: str = "model") -> ModelSpec:
    return build_model(parse_model_text(text, name))


def load_model(path) -> ModelSpec:
    p = Path(path)
    return parse_model(p.read_text(), name=p.stem)


def _fmt_coef_term(c: Scalar, mono: str, first: bool) -> str:
    if c.is_real():
        v = c.real
        sign = "-" if v < 0 else "+"
        mag = abs(v)
        body = mono if mag == 1 else f"{mag}*{mono}"
    else:
        sign = "+"
        body = f"({c})*{mono}"
    if first:
        return body if sign == "+" else "-" + body
    return f" {sign} {body}"


def _fmt_form(items) -> str:
    out = ""
    for c, mono in items:
        out += _fmt_coef_term(c, mono, not out)
    return out or "0"


def serialize_model(model: ModelSpec) -> str:
    """Text form of a validated model; ``parse_model`` reads it back to an equal model."""
    cn = model.char_names
    lines = ["[model]", f"name = {model.name}"]
    if model.k:
        lines.append("[base_chars]")
        for b in model.base_chars:
            f = [f"kind = {b.kind}", f"conj = {b.conj.format(cn)}"]
            if b.dlog10:
                f.insert(0, "dlog10 = " + _fmt_form([(c, model.names[g]) for g, c in b.dlog10]))
            if b.dlog01:
                f.insert(len(f) - 2, "dlog01 = " + _fmt_form([(c, model.names[g]) for g, c in b.dlog01]))
            lines.append(f"{b.name} : " + " ; ".join(f))
    if model.lattice.generators:
        lines.append("[lattice]")
        for v in model.lattice.generators:
            lines.append(CharExpr(v).format(cn))
    lines.append("[generators]")
    for g in model.generators[: model.n]:
        terms = [(c, model.mono_name(m)) for m, c in g.differential]
        f = [f"char = {g.action_char.format(cn)}", "d = " + _fmt_form(terms)]
        if g.factor:
            f.append(f"factor = {g.factor}")
        if g.beta is not None:
            f.append(f"beta = {g.beta.format(cn)}")
        if g.gamma is not None:
            f.append(f"gamma = {g.gamma.format(cn)}")
        lines.append(f"{g.name} : " + " ; ".join(f))
    if model.flags:
        lines.append("[flags]")
        for k in sorted(model.flags):
            lines.append(f"{k} = {'true' if model.flags[k] else 'false'}")
    return "\n".join(lines) + "\n"


def model_key(model: ModelSpec) -> tuple:
    """Hashable normal form used to compare models."""
    return (
        model.names,
        tuple((b.name, b.dlog10, b.dlog01, b.kind, b.conj) for b in model.base_chars),
        tuple((g.action_char, g.differential, g.factor, g.beta, g.gamma) for g in model.generators),
        model.lattice.hnf,
        tuple(sorted(model.flags.items())),
    )
