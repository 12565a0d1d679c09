"""Exact Frolicher spectral sequences for nilmanifold and solvmanifold models.

The main entry points::

    from frolicher import parse_model, build_B_CORR, pages_direct, degeneracy_step
    m = corpus_get("example2").model
    degeneracy_step(pages_direct(build_B_CORR(m)))
"""
from .exactalg import Matrix, Scalar, Subspace, image, kernel_basis, quotient_basis, solve
from .algebra import (BBAError, Bicomplex, ClosureError, Complex, ModelError, ModelSpec,
                      TwistedElement, assemble_bicomplex, build_model, ce_differential, tot)
from .modelfile import ModelSyntaxError, load_model, parse_model, serialize_model
from .hodge import check_pd_type, cohomology, hodge_decompose, induced_map, laplacian
from .specseq import (compare_stacks, degeneracy_step, frolicher_check, induced_page_maps, kunneth,
                      page_pd_check, pages_direct, pages_iterative)
from .solvmodel import (build_B_CORR, build_B_MMTT, euler_checks, pipeline_cos, pipeline_sps,
                        resolve_characters, split_CD)
from .corpus import corpus_get, corpus_names

__version__ = "0.1.0"

__all__ = [
    "Matrix",
    "Scalar",
    "Subspace",
    "image",
    "kernel_basis",
    "quotient_basis",
    "solve",
    "BBAError",
    "Bicomplex",
    "ClosureError",
    "Complex",
    "ModelError",
    "ModelSpec",
    "TwistedElement",
    "assemble_bicomplex",
    "build_model",
    "ce_differential",
    "tot",
    "ModelSyntaxError",
    "load_model",
    "parse_model",
    "serialize_model",
    "check_pd_type",
    "cohomology",
    "hodge_decompose",
    "induced_map",
    "laplacian",
    "compare_stacks",
    "degeneracy_step",
    "frolicher_check",
    "induced_page_maps",
    "kunneth",
    "page_pd_check",
    "pages_direct",
    "pages_iterative",
    "build_B_CORR",
    "build_B_MMTT",
    "euler_checks",
    "pipeline_cos",
    "pipeline_sps",
    "resolve_characters",
    "split_CD",
    "corpus_get",
    "corpus_names",
]
