"""Frolicher spectral sequence of a bicomplex.

Two independent constructions:

* :func:`pages_direct` works inside the total complex with the column
  filtration ``F^p``: ``Z_r^{p,q} = {x in F^p : dx in F^{p+r}}`` and
  ``E_r = Z_r / (Z_{r-1}^{p+1,q-1} + d Z_{r-1}^{p-r+1,q+r-2})``.
* :func:`pages_iterative` starts from delbar-cohomology and extends zig-zags
  ``x_0, x_1, ...`` with ``delbar x_0 = 0`` and ``del x_{j-1} + delbar x_j = 0``
  one page at a time.

``d_r`` has bidegree ``(r, 1-r)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import Bicomplex, Complex, tot
from .exactalg import ONE, ZERO, Matrix, Subspace, image, kernel_basis, quotient_basis, solve
from .hodge import betti, check_pd_type, inclusion_matrices

__all__ = ["Page", "PageStack", "pages_direct", "pages_iterative", "degeneracy_step",
           "frolicher_check", "kunneth", "KunnethReport", "induced_page_maps", "PageMaps",
           "page_pd_check", "compare_stacks"]


@dataclass
class Page:
    r: int
    dims: dict  # (p, q) -> dim E_r^{p,q}
    d: dict  # (p, q) -> matrix of d_r out of (p, q)
    reps: dict = field(default_factory=dict)

    def total(self, k: int) -> int:
        return sum(v for (p, q), v in self.dims.items() if p + q == k)

    def is_zero_differential(self) -> bool:
        return all(m.is_zero() for m in self.d.values())


@dataclass
class PageStack:
    bicomplex: Bicomplex
    pages: list
    method: str
    tot: Complex | None = None
    quotients: dict = field(default_factory=dict)  # (r, p, q) -> _Quot (direct method)

    @property
    def rmax(self) -> int:
        return len(self.pages) - 1

    def __getitem__(self, r) -> Page:
        return self.pages[r]

    def dims(self, r: int) -> dict:
        return self.pages[r].dims

    def ranks(self, r: int) -> dict:
        return {c: m.rank() for c, m in self.pages[r].d.items()}


def _cells(b: Bicomplex):
    return [(p, q) for p in range(b.P + 1) for q in range(b.Q + 1)]


class _Quot:
    """Coordinates in ``span(reps) + den`` modulo ``den`` on the representative list."""

    def __init__(self, reps, den: Subspace):
        self.reps = list(reps)
        self.den = den
        n = den.ambient_dim
        cols = self.reps + list(den.basis)
        self.n = n
        self.mat = Matrix.from_columns(cols, n) if cols else None

    def coords(self, v):
        if not self.reps:
            if self.den.contains(v) if self.n else True:
                return ()
            raise ArithmeticError("vector is not in the numerator")
        x = solve(self.mat, v)
        if x is None:
            raise ArithmeticError("vector is not in the numerator")
        return tuple(x[: len(self.reps)])


# ---------------------------------------------------------------------------
# direct construction
# ---------------------------------------------------------------------------

class _Filtered:
    def __init__(self, b: Bicomplex):
        self.b = b
        self.T = tot(b)
        self._z = {}

    def cols(self, k: int, p: int, upto: int | None = None):
        """Tot^k coordinates in cells ``p <= p' < upto``."""
        if not 0 <= k <= self.T.top:
            return []
        out = []
        for (pp, q, s0, s1) in self.T.cells[k]:
            if pp >= p and (upto is None or pp < upto):
                out.extend(range(s0, s1))
        return out

    def Z(self, r: int, p: int, k: int) -> Subspace:
        key = (r, p, k)
        hit = self._z.get(key)
        if hit is not None:
            return hit
        n = self.T.dim(k)
        src = self.cols(k, p)
        if r <= 0 or not src:
            out = Subspace.coordinate(n, src)
        else:
            rows = self.cols(k + 1, 0, p + r)
            d = self.T.dmat(k)
            sub = d.submatrix(rows, src)
            ker = kernel_basis(sub)
            vs = []
            for v in ker.basis:
                w = [ZERO] * n
                for i, x in zip(src, v):
                    w[i] = x
                vs.append(w)
            out = Subspace(n, vs)
        self._z[key] = out
        return out

    def B(self, r: int, p: int, k: int) -> Subspace:
        """Denominator ``Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1}`` inside Tot^k."""
        a = self.Z(r - 1, p + 1, k)
        if k == 0:
            return a
        src = self.Z(r - 1, p - r + 1, k - 1)
        return a + image(self.T.dmat(k - 1), src)


def pages_direct(b: Bicomplex, rmax: int | None = None) -> PageStack:
    """Pages ``E_0 .. E_rmax`` from the filtration of the total complex."""
    rmax = b.P + 1 if rmax is None else rmax
    F = _Filtered(b)
    T = F.T
    pages = []
    quots = {}
    for r in range(rmax + 1):
        dims, reps = {}, {}
        for (p, q) in _cells(b):
            k = p + q
            num = F.Z(r, p, k)
            den = F.B(r, p, k)
            dk, rp = quotient_basis(num, den)
            dims[(p, q)] = dk
            reps[(p, q)] = rp
            quots[(r, p, q)] = _Quot(rp, den)
        dmaps = {}
        for (p, q) in _cells(b):
            tgt = (p + r, q - r + 1)
            k = p + q
            nt = dims.get(tgt, 0)
            cols = []
            for x in reps[(p, q)]:
                if tgt in dims:
                    cols.append(quots[(r,) + tgt].coords(T.dmat(k).apply(x)))
                else:
                    if any(T.dmat(k).apply(x)) and not F.Z(r, p + r, k + 1).contains(T.dmat(k).apply(x)):
                        raise ArithmeticError("d_r leaves the filtration")
                    cols.append(())
            dmaps[(p, q)] = Matrix.from_columns(cols, nt) if cols else Matrix.zeros(nt, 0)
        pages.append(Page(r, dims, dmaps, reps))
    _check_pages(pages, b)
    st = PageStack(b, pages, "direct", T, quots)
    return st


def _check_pages(pages, b):
    for pg in pages:
        r = pg.r
        for (p, q), m in pg.d.items():
            tgt = (p + r, q - r + 1)
            if tgt in pg.d and m.ncols and pg.d[tgt].nrows:
                if not (pg.d[tgt] @ m).is_zero():
                    raise ArithmeticError(f"d_{r} o d_{r} != 0 at {(p, q)}")
    for pg, nxt in zip(pages, pages[1:]):
        r = pg.r
        for (p, q), dim in pg.dims.items():
            out = pg.d[(p, q)].rank() if pg.d[(p, q)].ncols and pg.d[(p, q)].nrows else 0
            src = (p - r, q + r - 1)
            inc = pg.d[src].rank() if src in pg.d and pg.d[src].ncols and pg.d[src].nrows else 0
            if dim - out - inc != nxt.dims[(p, q)]:
                raise ArithmeticError(f"E_{r + 1}^{p},{q} is not the cohomology of d_{r}")


# ---------------------------------------------------------------------------
# iterative zig-zag construction
# ---------------------------------------------------------------------------

def _vadd(a, b, c=ONE):
    return tuple(x + c * y for x, y in zip(a, b))


def pages_iterative(b: Bicomplex, rmax: int | None = None) -> PageStack:
    """Pages by zig-zag extension, independent of the filtration code."""
    rmax = b.P + 1 if rmax is None else rmax
    cells = _cells(b)
    d10, d01 = b.d10, b.d01
    zero = {c: (ZERO,) * b.dim(*c) for c in cells}

    # E_0
    pages = []
    e0 = Page(0, {c: b.dim(*c) for c in cells}, {c: d01[c] for c in cells})
    pages.append(e0)
    if rmax == 0:
        return PageStack(b, pages, "iterative")

    # E_1: zig-zags of length 1; B_1 = im delbar with delbar witnesses
    zz: dict = {}  # cell -> list of zig-zags (tuples of vectors)
    bgen: dict = {}  # cell -> list of (vector, kind, witness)
    for (p, q) in cells:
        n = b.dim(p, q)
        ker = kernel_basis(d01[(p, q)]) if n else Subspace.zero(0)
        if q > 0 and b.dim(p, q - 1):
            src = d01[(p, q - 1)]
            gens = []
            for j in range(src.ncols):
                e = [ZERO] * src.ncols
                e[j] = ONE
                v = src.column(j)
                if any(v):
                    gens.append((v, "dbar", tuple(e)))
        else:
            gens = []
        bgen[(p, q)] = gens
        bsp = Subspace(n, [g[0] for g in gens])
        _, reps = quotient_basis(ker, bsp) if n else (0, [])
        zz[(p, q)] = [(tuple(x),) for x in reps]

    r = 1
    while True:
        # d_r in representative coordinates
        dims = {c: len(zz[c]) for c in cells}
        solvers = {}
        for c in cells:
            cols = [z[0] for z in zz[c]] + [g[0] for g in bgen[c]]
            n = b.dim(*c)
            solvers[c] = Matrix.from_columns(cols, n) if cols else None

        def decompose(cell, v):
            if solvers[cell] is None:
                if any(v):
                    raise ArithmeticError("zig-zag end outside the page numerator")
                return (), ()
            x = solve(solvers[cell], v)
            if x is None:
                raise ArithmeticError(f"zig-zag end at {cell} is not in Z_r + B_r")
            k = len(zz[cell])
            return x[:k], x[k:]

        ends = {}
        dmaps = {}
        for (p, q) in cells:
            tgt = (p + r, q - r + 1)
            cols = []
            ends[(p, q)] = []
            for z in zz[(p, q)]:
                last = (p + r - 1, q - r + 1)
                y = d10[last].apply(z[-1]) if tgt in zero else ()
                ends[(p, q)].append(y)
                if tgt in zero:
                    cols.append(decompose(tgt, y)[0])
                else:
                    cols.append(())
            nt = dims.get(tgt, 0)
            dmaps[(p, q)] = Matrix.from_columns(cols, nt) if cols else Matrix.zeros(nt, 0)
        pages.append(Page(r, dims, dmaps))
        if r == rmax:
            break

        # E_{r+1}
        new_zz, new_bgen = {}, {}
        for (p, q) in cells:
            src = (p - r, q + r - 1)
            bl = list(bgen[(p, q)])
            if src in zz:
                for z, y in zip(zz[src], ends[src]):
                    if any(y):
                        bl.append((y, "zz", z))
            new_bgen[(p, q)] = bl
        for (p, q) in cells:
            k = len(zz[(p, q)])
            out = dmaps[(p, q)]
            ker = kernel_basis(out) if out.nrows else Subspace.full(k)
            src = (p - r, q + r - 1)
            inc = image(dmaps[src]) if src in dmaps and dmaps[src].ncols and k else Subspace.zero(k)
            _, coefs = quotient_basis(ker, inc)
            tgt = (p + r, q - r + 1)
            lst = []
            for c in coefs:
                xs = [zero.get((p + j, q - j), ()) for j in range(r)]
                for ci, z in zip(c, zz[(p, q)]):
                    if ci:
                        xs = [_vadd(a, v, ci) for a, v in zip(xs, z)]
                if tgt not in zero:
                    lst.append(tuple(xs) + ((),))
                    continue
                y = d10[(p + r - 1, q - r + 1)].apply(xs[-1])
                cr, e = decompose(tgt, y)
                if any(cr):
                    raise ArithmeticError("kernel vector has nonzero d_r")
                xr = zero.get((p + r, q - r), ())
                for ej, (v, kind, w) in zip(e, bgen[tgt]):
                    if not ej:
                        continue
                    if kind == "dbar":
                        xr = _vadd(xr, w, -ej)
                    else:
                        s = len(w)
                        for t in range(s):
                            j = r - s + t
                            xs[j] = _vadd(xs[j], w[t], -ej)
                xs.append(xr)
                _check_zigzag(b, (p, q), xs)
                lst.append(tuple(xs))
            new_zz[(p, q)] = lst
        zz, bgen = new_zz, new_bgen
        r += 1
    return PageStack(b, pages, "iterative")


def _check_zigzag(b, cell, xs):
    p, q = cell
    if any(b.d01[(p, q)].apply(xs[0])):
        raise ArithmeticError("zig-zag head is not delbar-closed")
    for j in range(1, len(xs)):
        if (p + j, q - j) not in b.d01:
            break
        a = b.d10[(p + j - 1, q - j + 1)].apply(xs[j - 1])
        c = b.d01[(p + j, q - j)].apply(xs[j])
        if any(x + y for x, y in zip(a, c)):
            raise ArithmeticError(f"zig-zag relation fails at step {j}")


def compare_stacks(a: PageStack, b: PageStack) -> list:
    """Cells where page dimensions or d_r ranks disagree (empty when they match)."""
    bad = []
    for r in range(min(a.rmax, b.rmax) + 1):
        if a.dims(r) != b.dims(r):
            bad.append((r, "dims"))
        elif a.ranks(r) != b.ranks(r):
            bad.append((r, "ranks"))
    return bad


# ---------------------------------------------------------------------------
# verdicts
# ---------------------------------------------------------------------------

def degeneracy_step(stack: PageStack) -> int:
    """Least ``r >= 1`` with ``d_s = 0`` for ``r <= s <= rmax``; checked by dimension stability."""
    rm = stack.rmax
    r = rm
    while r >= 1 and stack[r].is_zero_differential():
        r -= 1
    r += 1
    if r > rm:
        raise ArithmeticError("the last computed page still has a nonzero differential")
    for s in range(r, rm + 1):
        if stack.dims(s) != stack.dims(r):
            raise ArithmeticError("pages change after the degeneracy step")
    if r > 1 and stack.dims(r - 1) == stack.dims(r):
        raise ArithmeticError("nonzero differential without a dimension drop")
    return r


@dataclass
class FrolicherReport:
    e1_totals: list
    einf_totals: list
    betti: list
    inequality: bool
    limit: bool

    @property
    def ok(self) -> bool:
        return self.inequality and self.limit


def frolicher_check(stack: PageStack, b: list | None = None) -> FrolicherReport:
    T = stack.tot or tot(stack.bicomplex)
    b = b if b is not None else betti(T)
    e1 = [stack[1].total(k) for k in range(T.top + 1)]
    ei = [stack[stack.rmax].total(k) for k in range(T.top + 1)]
    return FrolicherReport(e1, ei, b, all(x >= y for x, y in zip(e1, b)), ei == list(b))


# ---------------------------------------------------------------------------
# tensor products
# ---------------------------------------------------------------------------

def _conv(a: list, b: list) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


@dataclass
class KunnethReport:
    betti: list
    expected_betti: list
    e1: dict
    expected_e1: dict

    @property
    def ok(self) -> bool:
        return self.betti == self.expected_betti and self.e1 == self.expected_e1


def tensor_bicomplex(a: Bicomplex, b: Bicomplex, name: str = "") -> Bicomplex:
    """``a (x) b`` with ``d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy`` on both differentials."""
    basis = {}
    where = {}
    for (p1, q1), la in a.basis.items():
        for (p2, q2), lb in b.basis.items():
            cell = (p1 + p2, q1 + q2)
            lst = basis.setdefault(cell, [])
            for x in la:
                for y in lb:
                    where[(x, y)] = (cell, len(lst))
                    lst.append((x, y))
    d10, d01 = {}, {}
    for cell, labs in basis.items():
        p, q = cell
        m10 = Matrix.zeros(len(basis.get((p + 1, q), ())), len(labs))
        m01 = Matrix.zeros(len(basis.get((p, q + 1), ())), len(labs))
        for j, (x, y) in enumerate(labs):
            (ca, ia) = a.index[x]
            (cb, ib) = b.index[y]
            sign = -1 if (ca[0] + ca[1]) % 2 else 1
            for da, db, mat, step in ((a.d10, b.d10, m10, (1, 0)), (a.d01, b.d01, m01, (0, 1))):
                ta = (ca[0] + step[0], ca[1] + step[1])
                col = da[ca].column(ia) if da[ca].nrows else ()
                for i, c in enumerate(col):
                    if c:
                        _, row = where[(a.basis[ta][i], y)]
                        mat.rows[row][j] = mat.rows[row][j] + c
                tb = (cb[0] + step[0], cb[1] + step[1])
                col = db[cb].column(ib) if db[cb].nrows else ()
                for i, c in enumerate(col):
                    if c:
                        _, row = where[(x, b.basis[tb][i])]
                        mat.rows[row][j] = mat.rows[row][j] + c * sign
        d10[cell] = m10
        d01[cell] = m01
    return Bicomplex(basis, d10, d01, None, name or f"{a.name}(x){b.name}")


def kunneth(a: Bicomplex, b: Bicomplex):
    """Tensor product bicomplex and the Kunneth verdict on Betti numbers and E_1."""
    t = tensor_bicomplex(a, b)
    ba, bb, bt = betti(tot(a)), betti(tot(b)), betti(tot(t))
    exp_b = _conv(ba, bb)
    while len(bt) < len(exp_b):
        bt.append(0)
    ea = pages_direct(a, 1)[1].dims
    eb = pages_direct(b, 1)[1].dims
    exp_e1 = {}
    for (p1, q1), x in ea.items():
        for (p2, q2), y in eb.items():
            c = (p1 + p2, q1 + q2)
            exp_e1[c] = exp_e1.get(c, 0) + x * y
    et = pages_direct(t, 1)[1].dims
    et = {c: v for c, v in et.items() if v}
    exp_e1 = {c: v for c, v in exp_e1.items() if v}
    return t, KunnethReport(bt, exp_b, et, exp_e1)


# ---------------------------------------------------------------------------
# maps and duality on pages
# ---------------------------------------------------------------------------

@dataclass
class PageMaps:
    matrices: dict  # (r, p, q) -> matrix
    injective: dict  # r -> bool
    isomorphism: dict  # r -> bool


def induced_page_maps(sub: PageStack, amb: PageStack, inclusion: dict | None = None) -> PageMaps:
    """Maps ``E_r(sub) -> E_r(amb)`` induced by a label inclusion of bicomplexes."""
    inc = inclusion or inclusion_matrices(sub.tot, amb.tot)
    mats, inj, iso = {}, {}, {}
    for r in range(min(sub.rmax, amb.rmax) + 1):
        ok_i = ok_s = True
        for (p, q), reps in sub[r].reps.items():
            k = p + q
            na = amb.dims(r).get((p, q), 0)
            if (r, p, q) not in amb.quotients:
                cols = [()] * len(reps)
            else:
                qa = amb.quotients[(r, p, q)]
                cols = [qa.coords(inc[k].apply(x)) for x in reps]
            m = Matrix.from_columns(cols, na) if cols else Matrix.zeros(na, 0)
            mats[(r, p, q)] = m
            rk = m.rank() if m.nrows and m.ncols else 0
            ok_i &= rk == len(reps)
            ok_s &= rk == na
        inj[r] = ok_i
        iso[r] = ok_i and ok_s
    return PageMaps(mats, inj, iso)


def page_pd_check(stack: PageStack) -> dict:
    """Per page: does ``E_r`` carry a nondegenerate product pairing into its top cell?"""
    T = stack.tot
    b = stack.bicomplex
    if T is None or T.multiply is None or not check_pd_type(T).ok:
        return {r: False for r in range(stack.rmax + 1)}
    P, Q = b.P, b.Q
    out = {}
    for r in range(stack.rmax + 1):
        pg = stack[r]
        ok = pg.dims.get((0, 0)) == 1 and pg.dims.get((P, Q)) == 1
        if ok:
            qt = stack.quotients[(r, P, Q)]
            for (p, q), reps in pg.reps.items():
                dual = (P - p, Q - q)
                if len(reps) != pg.dims.get(dual, -1):
                    ok = False
                    break
                if not reps:
                    continue
                m = Matrix.zeros(len(reps), len(reps))
                for i, x in enumerate(reps):
                    for j, y in enumerate(pg.reps[dual]):
                        v = T.product(p + q, x, P + Q - p - q, y)
                        m.rows[i][j] = qt.coords(v)[0]
                if m.rank() < len(reps):
                    ok = False
                    break
        out[r] = ok
    return out
