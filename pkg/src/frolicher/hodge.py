"""Poincare duality, conjugate Hodge star, Laplacians and harmonic representatives.

For a complex with a product (a totalized model bicomplex) the basis is taken
orthonormal.  The conjugate-linear star is determined by the wedge pairing
``a ^ *b = h(a, b) vol``; the formal adjoint is ``d* = -*d*``.  Complexes
without a product use the conjugate transpose as adjoint.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import ClosureError, Complex
from .exactalg import ONE, Matrix, Subspace, image, kernel_basis, quotient_basis, row_reduce, solve

__all__ = ["PdReport", "HodgeData", "CohomologyResult", "InducedMap", "AdjointnessError",
           "check_pd_type", "bar_star", "laplacian", "hodge_decompose", "cohomology",
           "inclusion_matrices", "induced_map", "betti"]


class AdjointnessError(ArithmeticError):
    pass


@dataclass
class PdReport:
    ok: bool
    top: int
    volume: object = None
    failures: list = field(default_factory=list)
    pairings: dict = field(default_factory=dict)  # degree -> pairing matrix

    def __bool__(self):
        return self.ok


def _inverse(m: Matrix) -> Matrix:
    n = m.nrows
    r, rref, t = row_reduce(m)
    if r < n:
        raise ZeroDivisionError("singular matrix")
    return t


def check_pd_type(c: Complex) -> PdReport:
    """Check that the graded algebra has Poincare duality of its top degree."""
    n = c.top
    rep = PdReport(True, n)

    def fail(msg):
        rep.ok = False
        rep.failures.append(msg)

    if c.multiply is None:
        fail("no product structure")
        return rep
    if c.dim(0) != 1:
        fail(f"degree 0 has dimension {c.dim(0)}")
    if c.dim(n) != 1:
        fail(f"top degree {n} has dimension {c.dim(n)}")
    if rep.failures:
        return rep
    rep.volume = c.labels[n][0]
    unit = c.labels[0][0]
    r = c.multiply(unit, rep.volume)
    if r is None or r[1] != rep.volume or r[0] != 1:
        fail("degree-0 basis element is not a unit for the volume element")
    for i in range(n + 1):
        a, b = c.dim(i), c.dim(n - i)
        if a != b:
            fail(f"dim A^{i} = {a} but dim A^{n - i} = {b}")
            continue
        pm = Matrix.zeros(a, b)
        for s, la in enumerate(c.labels[i]):
            for t, lb in enumerate(c.labels[n - i]):
                out = c.multiply(la, lb)
                if out is None:
                    continue
                sg, lab = out
                if lab != rep.volume:
                    fail(f"product of degree {i} and {n - i} leaves the top degree basis")
                    continue
                pm.rows[s][t] = pm.rows[s][t] + sg
        rep.pairings[i] = pm
        if a and pm.rank() < a:
            fail(f"pairing A^{i} x A^{n - i} is degenerate")
    if c.dim(n - 1) and not c.dmat(n - 1).is_zero():
        fail("d does not vanish on degree top-1")
    if not c.dmat(0).is_zero():
        fail("d does not vanish on degree 0")
    return rep


def _star_matrices(c: Complex, pd: PdReport) -> dict:
    # *a_j = sum_k S[k][j] b_k with S = P^-1, extended conjugate-linearly
    return {i: _inverse(p) if p.nrows else p for i, p in pd.pairings.items()}


def bar_star(c: Complex, degree: int, x, pd: PdReport | None = None):
    """Conjugate-linear star ``A^degree -> A^(top-degree)``."""
    pd = pd or check_pd_type(c)
    if not pd.ok:
        raise ValueError("complex is not of Poincare duality type: " + "; ".join(pd.failures))
    s = _star_matrices(c, pd)[degree]
    return s.apply([v.conjugate() for v in x])


@dataclass
class HodgeData:
    complex: Complex
    dstar: dict  # degree k: A^k -> A^(k-1)
    laplacian: dict
    harmonic: dict  # degree -> Subspace
    pd: PdReport | None
    adjoint_checked: bool


def _dstar_pd(c: Complex, pd: PdReport) -> dict:
    n = c.top
    st = _star_matrices(c, pd)
    out = {}
    for k in range(n + 1):
        if k == 0:
            out[k] = Matrix.zeros(0, c.dim(0))
            continue
        # d* x = - S_{n-k+1} conj(D_{n-k} S_k conj(x))
        m = st[n - k + 1] @ (c.dmat(n - k) @ st[k]).conj()
        out[k] = -m
    return out


def laplacian(c: Complex, check_adjoint: bool = True) -> HodgeData:
    """Formal adjoint, Laplacian and harmonic space in every degree."""
    pd = None
    if c.multiply is not None:
        pd = check_pd_type(c)
        if not pd.ok:
            pd = None
    if pd is not None:
        dstar = _dstar_pd(c, pd)
        if check_adjoint:
            for k in range(1, c.top + 1):
                if dstar[k] != c.dmat(k - 1).H:
                    raise AdjointnessError(f"-*d* is not the adjoint of d in degree {k}")
    else:
        dstar = {k: (c.dmat(k - 1).H if k else Matrix.zeros(0, c.dim(0))) for k in range(c.top + 1)}
    lap = {}
    harm = {}
    for k in range(c.top + 1):
        dk = c.dmat(k)
        a = dstar[k + 1] @ dk if k < c.top else Matrix.zeros(c.dim(k), c.dim(k))
        b = c.dmat(k - 1) @ dstar[k] if k else Matrix.zeros(c.dim(k), c.dim(k))
        lap[k] = a + b
        harm[k] = kernel_basis(lap[k])
    return HodgeData(c, dstar, lap, harm, pd, pd is not None and check_adjoint)


def hodge_decompose(c: Complex, k: int, hd: HodgeData | None = None):
    """``(H^k, im d, im d*)`` as subspaces; verified to be a direct sum filling ``A^k``."""
    hd = hd or laplacian(c)
    n = c.dim(k)
    h = hd.harmonic[k]
    imd = image(c.dmat(k - 1)) if k else Subspace.zero(n)
    imds = image(hd.dstar[k + 1]) if k < c.top else Subspace.zero(n)
    if h.dim + imd.dim + imds.dim != n or (h + imd + imds).dim != n:
        raise ArithmeticError(f"Hodge decomposition fails in degree {k}")
    return h, imd, imds


@dataclass
class CohomologyResult:
    dims: list
    reps: dict  # degree -> list of vectors (harmonic when route='harmonic')
    route: str

    def __getitem__(self, k):
        return self.dims[k]


def cohomology(c: Complex, route: str = "both") -> CohomologyResult:
    """Cohomology by kernel/image ranks, by harmonic forms, or both (cross-checked)."""
    dims_rank, reps_rank = [], {}
    if route in ("rank", "both"):
        for k in range(c.top + 1):
            z = kernel_basis(c.dmat(k))
            b = image(c.dmat(k - 1)) if k else Subspace.zero(c.dim(k))
            dk, reps = quotient_basis(z, b)
            dims_rank.append(dk)
            reps_rank[k] = reps
        if route == "rank":
            return CohomologyResult(dims_rank, reps_rank, "rank")
    hd = laplacian(c)
    dims_h = [hd.harmonic[k].dim for k in range(c.top + 1)]
    reps_h = {k: list(hd.harmonic[k].basis) for k in range(c.top + 1)}
    for k in range(c.top + 1):
        for v in reps_h[k]:
            if any(c.dmat(k).apply(v)):
                raise ArithmeticError(f"harmonic form in degree {k} is not closed")
    if route == "both" and dims_h != dims_rank:
        raise ArithmeticError(f"harmonic dims {dims_h} disagree with rank dims {dims_rank}")
    return CohomologyResult(dims_h, reps_h, "harmonic" if route == "harmonic" else "both")


def betti(c: Complex) -> list:
    return cohomology(c, "rank").dims


def inclusion_matrices(sub: Complex, amb: Complex) -> dict:
    """Matrices of the label-preserving inclusion ``sub -> amb``."""
    out = {}
    for k in range(sub.top + 1):
        m = Matrix.zeros(amb.dim(k), sub.dim(k))
        for j, lab in enumerate(sub.labels[k]):
            i = amb.index[k].get(lab)
            if i is None:
                raise ClosureError(f"{lab} is not a basis element of the ambient complex", lab)
            m.rows[i][j] = ONE
        out[k] = m
    return out


@dataclass
class InducedMap:
    matrices: dict  # degree -> matrix in cohomology coordinates
    injective: dict  # degree -> bool
    surjective: dict
    sub_pd: bool
    amb_pd: bool

    @property
    def is_injective(self) -> bool:
        return all(self.injective.values())

    @property
    def is_isomorphism(self) -> bool:
        return self.is_injective and all(self.surjective.values())


def _class_coords(reps: list, bnd: Subspace, v):
    """Coordinates of ``v`` modulo ``bnd`` on the representative list."""
    n = bnd.ambient_dim
    cols = list(reps) + list(bnd.basis)
    if not cols:
        return ()
    x = solve(Matrix.from_columns(cols, n), v)
    if x is None:
        raise ArithmeticError("vector is not a cocycle in the span of the representatives")
    return tuple(x[: len(reps)])


def induced_map(sub: Complex, amb: Complex, inclusion: dict | None = None) -> InducedMap:
    """Map on cohomology induced by a chain map (label inclusion by default)."""
    inc = inclusion or inclusion_matrices(sub, amb)
    for k in range(sub.top + 1):
        lhs = amb.dmat(k) @ inc[k]
        rhs = inc[k + 1] @ sub.dmat(k) if k + 1 <= sub.top else Matrix.zeros(amb.dim(k + 1), sub.dim(k))
        if lhs != rhs:
            raise ArithmeticError(f"not a chain map in degree {k}")
    hs = cohomology(sub, "rank")
    ha = cohomology(amb, "rank")
    mats, inj, sur = {}, {}, {}
    for k in range(sub.top + 1):
        bnd = image(amb.dmat(k - 1)) if k else Subspace.zero(amb.dim(k))
        cols = [_class_coords(ha.reps[k], bnd, inc[k].apply(v)) for v in hs.reps[k]]
        m = Matrix.from_columns(cols, ha.dims[k]) if cols else Matrix.zeros(ha.dims[k], 0)
        mats[k] = m
        r = m.rank() if cols and ha.dims[k] else 0
        inj[k] = r == hs.dims[k]
        sur[k] = r == ha.dims[k]
    ps = sub.multiply is not None and check_pd_type(sub).ok
    pa = amb.multiply is not None and check_pd_type(amb).ok
    return InducedMap(mats, inj, sur, ps, pa)
