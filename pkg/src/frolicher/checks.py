"""Invariant suites shared by the test-suite and the ``selfcheck`` command.

Each function returns an ordered ``{verdict name: bool}`` dict.
"""
from __future__ import annotations

from .algebra import Bicomplex, Complex, ModelSpec, assemble_bicomplex, tot
from .hodge import check_pd_type, cohomology, hodge_decompose, induced_map, laplacian
from .randgen import shape_prediction
from .solvmodel import build_B_CORR, build_B_MMTT
from .specseq import (compare_stacks, degeneracy_step, frolicher_check, induced_page_maps,
                      page_pd_check, pages_direct, pages_iterative)

__all__ = ["adjoint_failures", "pd_complex_suite", "model_suite", "bicomplex_suite", "model_bicomplexes"]


def adjoint_failures(c: Complex, hd=None) -> list:
    """Basis pairs ``(k, i, j)`` with ``h(d e_i, e_j) != h(e_i, d* e_j)``.

    The basis is orthonormal, so ``h(x, y) = sum x_a conj(y_a)``.
    """
    hd = hd or laplacian(c, check_adjoint=False)
    bad = []
    for k in range(c.top):
        D = c.dmat(k)
        S = hd.dstar[k + 1]
        for i in range(c.dim(k)):
            for j in range(c.dim(k + 1)):
                if D.rows[j][i] != S.rows[i][j].conjugate():
                    bad.append((k, i, j))
    return bad


def pd_complex_suite(c: Complex) -> dict:
    out = {}
    pd = check_pd_type(c)
    out["PD type"] = pd.ok
    hd = laplacian(c, check_adjoint=False)
    out["adjointness on basis pairs"] = not adjoint_failures(c, hd)
    ok = True
    for k in range(c.top + 1):
        try:
            hodge_decompose(c, k, hd)
        except ArithmeticError:
            ok = False
    out["Hodge decomposition"] = ok
    rank = cohomology(c, "rank").dims
    out["harmonic dims = rank dims"] = [hd.harmonic[k].dim for k in range(c.top + 1)] == rank
    return out


def model_bicomplexes(model: ModelSpec) -> dict:
    """The twisted model ``B``, its untwisted part ``C`` and the untwisted algebra ``A``."""
    if model.flags.get("complex_parallelizable"):
        B = build_B_MMTT(model)
    else:
        B = build_B_CORR(model)
    trivial = [e for labs in B.basis.values() for e in labs if e.prefactor.is_trivial]
    C = B.restrict(trivial, f"C({model.name})")
    A = assemble_bicomplex(model, None, f"A({model.name})")
    return {"B": B, "C": C, "A": A}


def model_suite(model: ModelSpec, pages: bool = True) -> dict:
    """Hodge-theoretic and page-level invariants of a model's PD-type bicomplexes."""
    bs = model_bicomplexes(model)
    out = {}
    stacks = {}
    for key, b in bs.items():
        for name, v in pd_complex_suite(tot(b)).items():
            out[f"{key}: {name}"] = v
        if pages:
            stacks[key] = pages_direct(b)
    im = induced_map(tot(bs["C"]), tot(bs["A"]))
    out["H(C) -> H(A) injective"] = im.is_injective
    if pages:
        pm = induced_page_maps(stacks["C"], stacks["A"])
        out["E_r(C) -> E_r(A) injective at every r"] = all(pm.injective.values())
        for key, st in stacks.items():
            out[f"{key}: page duality at every r"] = all(page_pd_check(st).values())
    return out


def bicomplex_suite(b: Bicomplex) -> dict:
    """Direct and iterative pages agree; Frolicher identity; shape prediction when known."""
    out = {}
    st = pages_direct(b)
    it = pages_iterative(b)
    out["direct = iterative"] = not compare_stacks(st, it)
    out["Frolicher identity"] = frolicher_check(st).ok
    shapes = getattr(b, "shapes", None)
    if shapes is not None:
        e1, einf, r = shape_prediction(b)
        nz = lambda d: {c: v for c, v in d.items() if v}
        out["E_1 matches shapes"] = nz(st.dims(1)) == e1
        out["E_inf matches shapes"] = nz(st.dims(st.rmax)) == einf
        out["degeneracy step matches shapes"] = degeneracy_step(st) == r
    return out
