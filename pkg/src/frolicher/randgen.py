"""Seeded random bicomplexes and random models.

Abstract bicomplexes are built as direct sums of the indecomposable shapes
(dots, squares and zig-zags) followed by a random change of basis in every
cell, so their spectral sequences are known in advance yet the matrices look
generic.  Random models are two-step nilpotent with characters, in the
``C^n x N`` or the complex parallelizable form.
"""
from __future__ import annotations

import random

from .algebra import Bicomplex, CharDecl, GenDecl, ModelDescription, ModelError, build_model
from .exactalg import ONE, ZERO, Matrix, Scalar, row_reduce

__all__ = ["random_scalar", "random_bicomplex", "random_model", "random_cos_model", "shape_prediction"]


def random_scalar(rng: random.Random, nonzero: bool = False, complex_: bool = True) -> Scalar:
    while True:
        re = rng.randint(-3, 3)
        im = rng.randint(-2, 2) if complex_ else 0
        den = rng.choice((1, 1, 2, 3))
        s = Scalar(re, im) / den
        if s or not nonzero:
            return s


def _random_invertible(rng: random.Random, n: int) -> Matrix:
    while True:
        m = Matrix([[random_scalar(rng) if rng.random() < 0.6 else ZERO for _ in range(n)]
                    for _ in range(n)], n)
        for i in range(n):
            if rng.random() < 0.5:
                m.rows[i][i] = m.rows[i][i] + ONE
        if m.rank() == n:
            return m


def random_bicomplex(seed: int, size: int = 4, shapes: int | None = None) -> Bicomplex:
    """A random bicomplex in the square ``[0, size]^2``, plus its shape list in ``.shapes``."""
    rng = random.Random(seed)
    P = Q = size
    nshapes = shapes if shapes is not None else rng.randint(3, 8)
    elems = {}  # label -> cell
    d10 = {}  # (src label) -> [(tgt label, coef)]
    d01 = {}
    shapes_out = []
    count = 0

    def new(cell):
        nonlocal count
        lab = count
        count += 1
        elems[lab] = cell
        return lab

    for _ in range(nshapes):
        kind = rng.choice(("dot", "square", "zigzag", "zigzag"))
        if kind == "dot":
            p, q = rng.randint(0, P), rng.randint(0, Q)
            new((p, q))
            shapes_out.append(("dot", (p, q)))
        elif kind == "square":
            p, q = rng.randint(0, P - 1), rng.randint(0, Q - 1)
            a, b, c, d = new((p, q)), new((p + 1, q)), new((p, q + 1)), new((p + 1, q + 1))
            d10[a] = [(b, ONE)]
            d01[a] = [(c, ONE)]
            d10[c] = [(d, -ONE)]
            d01[b] = [(d, ONE)]
            shapes_out.append(("square", (p, q)))
        else:
            m = rng.randint(0, 2)
            p = rng.randint(0, P - m)
            q = rng.randint(m, Q)
            left = rng.random() < 0.5 and q + 1 <= Q
            right = rng.random() < 0.5 and p + m + 1 <= P
            if m == 0 and not (left or right):
                left = q + 1 <= Q
                right = not left and p + 1 <= P
                if not (left or right):
                    new((p, q))
                    shapes_out.append(("dot", (p, q)))
                    continue
            a = [new((p + i, q - i)) for i in range(m + 1)]
            b = [new((p + i + 1, q - i)) for i in range(m)]
            for i in range(m):
                d10[a[i]] = [(b[i], ONE)]
                d01[a[i + 1]] = [(b[i], ONE)]
            if left:
                bl = new((p, q + 1))
                d01[a[0]] = [(bl, ONE)]
            if right:
                br = new((p + m + 1, q - m))
                d10[a[m]] = [(br, ONE)]
            shapes_out.append(("zigzag", (p, q), m, left, right))
    basis = {(p, q): [] for p in range(P + 1) for q in range(Q + 1)}
    for lab, cell in elems.items():
        basis[cell].append(lab)
    pos = {lab: (cell, basis[cell].index(lab)) for lab, cell in elems.items()}
    raw10, raw01 = {}, {}
    for (p, q), labs in basis.items():
        raw10[(p, q)] = Matrix.zeros(len(basis.get((p + 1, q), ())), len(labs))
        raw01[(p, q)] = Matrix.zeros(len(basis.get((p, q + 1), ())), len(labs))
        for j, lab in enumerate(labs):
            for tgt, c in d10.get(lab, ()):
                raw10[(p, q)].rows[pos[tgt][1]][j] = c
            for tgt, c in d01.get(lab, ()):
                raw01[(p, q)].rows[pos[tgt][1]][j] = c
    # change of basis: v_new = M v_old in every cell, d_new = M_t d M_s^-1
    M, Minv = {}, {}
    for cell, labs in basis.items():
        n = len(labs)
        M[cell] = _random_invertible(rng, n) if n else Matrix.zeros(0, 0)
        Minv[cell] = row_reduce(M[cell])[2] if n else Matrix.zeros(0, 0)
    n10, n01 = {}, {}
    for (p, q) in basis:
        n10[(p, q)] = M.get((p + 1, q), Matrix.zeros(0, 0)) @ raw10[(p, q)] @ Minv[(p, q)] \
            if (p + 1, q) in M else raw10[(p, q)]
        n01[(p, q)] = M.get((p, q + 1), Matrix.zeros(0, 0)) @ raw01[(p, q)] @ Minv[(p, q)] \
            if (p, q + 1) in M else raw01[(p, q)]
    labels = {c: [f"e{lab}" for lab in labs] for c, labs in basis.items()}
    b = Bicomplex(labels, n10, n01, None, f"random[{seed}]")
    b.shapes = shapes_out
    return b


def shape_prediction(b: Bicomplex) -> tuple:
    """``(E_1 dims, E_inf dims, degeneracy step)`` read off the shape list.

    A zig-zag ``a_0..a_m`` with bridges ``b_i`` contributes ``a_0`` to ``E_1``
    unless a left end kills it, and its right end ``b_m`` if present.  With
    only the right end, ``d_(m+1)`` cancels the two; otherwise the surviving
    class sits in the same cell on every page.
    """
    e1, einf = {}, {}
    r = 1

    def add(t, c):
        t[c] = t.get(c, 0) + 1

    for s in b.shapes:
        if s[0] == "dot":
            add(e1, s[1])
            add(einf, s[1])
        elif s[0] == "zigzag":
            _, (p, q), m, left, right = s
            if not left:
                add(e1, (p, q))
            if right:
                add(e1, (p + m + 1, q - m))
            if left and right:
                add(einf, (p + m + 1, q - m))
            elif not left and not right:
                add(einf, (p, q))
            elif right:
                r = max(r, m + 2)
    return e1, einf, r


def _charmap(e: int, f: int) -> dict:
    out = {}
    if e:
        out["ex"] = e
    if f:
        out["u"] = f
    return out


def random_model(seed: int, max_nil: int = 3):
    """Random unimodular model ``C x N`` with ``N`` at most two-step nilpotent.

    Generators ``y_i`` carry characters ``ex^a u^b``; with probability 0.8
    the last one is second layer with a single bracket term.
    """
    rng = random.Random(seed)
    for _ in range(200):
        m = rng.randint(1, max_nil)
        chars = [(rng.randint(-1, 1), rng.randint(-1, 1)) for _ in range(m)]
        ds = [[] for _ in range(m)]
        if m >= 2 and rng.random() < 0.8:
            opts = [(("y1", "cy1"), (2 * chars[0][0], 0))]
            if m >= 3:
                (e1, f1), (e2, f2) = chars[0], chars[1]
                opts += [(("y1", "y2"), (e1 + e2, f1 + f2)), (("y1", "cy2"), (e1 + e2, f1 - f2))]
            term, ch = rng.choice(opts)
            chars[-1] = ch
            ds[-1].append((random_scalar(rng, nonzero=True), term))
        if sum(c[0] for c in chars):
            continue
        desc = ModelDescription(name=f"random-model[{seed}]")
        desc.base_chars = [
            CharDecl("ex", {"x1": Scalar(1, 0) / 2}, {"cx1": Scalar(1, 0) / 2}, "general", {"ex": 1}),
            CharDecl("u", {"x1": Scalar(-1, 0) / 2}, {"cx1": Scalar(1, 0) / 2}, "unitary", {"u": -1}),
        ]
        desc.generators = [GenDecl("x1", {}, (), factor="abelian")] + [
            GenDecl(f"y{i + 1}", _charmap(*chars[i]), ds[i]) for i in range(m)]
        desc.lattice = [[0, rng.choice((1, 2))]] if rng.random() < 0.6 else []
        desc.flags = {"assumption12": True}
        try:
            return build_model(desc)
        except ModelError:
            continue
    raise RuntimeError("could not generate a random model")


def random_cos_model(seed: int):
    """Random complex parallelizable model ``C x_phi C^2`` style with a holomorphic character."""
    rng = random.Random(seed)
    a = rng.randint(1, 2)
    desc = ModelDescription(name=f"random-cos[{seed}]")
    desc.base_chars = [CharDecl("ez", {"x1": ONE}, {}, "holomorphic", {"ezb": 1}),
                       CharDecl("ezb", {}, {"cx1": ONE}, "antiholomorphic", {"ez": 1})]
    desc.generators = [
        GenDecl("x1", {}, ()),
        GenDecl("x2", {"ez": a}, [(Scalar(-a), ("x1", "x2"))]),
        GenDecl("x3", {"ez": -a}, [(Scalar(a), ("x1", "x3"))]),
    ]
    desc.lattice = [[1, -1]] if rng.random() < 0.5 else []
    desc.flags = {"complex_parallelizable": True}
    return build_model(desc)
