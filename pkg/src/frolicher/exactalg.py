"""Exact linear algebra over the Gaussian rationals Q(i).

Everything here is bit-exact: scalars are pairs of arbitrary precision
rationals, matrices are dense grids of scalars and subspaces are kept in
reduced row-echelon form so that equal subspaces compare equal.

Integer lattice membership (used for "is this character trivial on the
lattice" questions) lives here too, decided by a Hermite normal form.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence

from gmpy2 import mpq

__all__ = [
    "Scalar", "ScalarSyntaxError", "ZERO", "ONE", "I",
    "Matrix", "Subspace", "IntLattice",
    "row_reduce", "kernel_basis", "rank", "solve", "subspace_calc",
    "image", "preimage", "quotient_basis",
    "lattice_member", "hermite_normal_form",
]


class ScalarSyntaxError(ValueError):
    """Malformed scalar literal; ``col`` is the 0-based offending offset."""

    def __init__(self, msg: str, text: str, col: int):
        super().__init__(f"{msg} in {text!r} at column {col + 1}")
        self.text = text
        self.col = col


def _to_mpq(x) -> mpq:
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


class Scalar:
    """A Gaussian rational ``re + im*i``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is type(_Q0) else _to_mpq(re)
        self.im = im if type(im) is type(_Q0) else _to_mpq(im)

    @classmethod
    def coerce(cls, x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, complex):
            raise TypeError("floating point complex values are not exact")
        if isinstance(x, float):
            raise TypeError("floats are not exact; use Fraction or a string")
        if isinstance(x, str):
            return cls.parse(x)
        return cls(x)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, o):
        if not isinstance(o, Scalar):
            o = Scalar.coerce(o)
        return Scalar(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        if not isinstance(o, Scalar):
            o = Scalar.coerce(o)
        return Scalar(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return Scalar.coerce(o) - self

    def __neg__(self):
        return Scalar(-self.re, -self.im)

    def __mul__(self, o):
        if not isinstance(o, Scalar):
            o = Scalar.coerce(o)
        a, b, c, d = self.re, self.im, o.re, o.im
        if not b:
            if not d:
                return Scalar(a * c, _Q0)
            return Scalar(a * c, a * d)
        if not d:
            return Scalar(a * c, b * c)
        return Scalar(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        a, b = self.re, self.im
        if not b:
            if not a:
                raise ZeroDivisionError("Scalar division by zero")
            return Scalar(1 / a, _Q0)
        n = a * a + b * b
        return Scalar(a / n, -b / n)

    def __truediv__(self, o):
        if not isinstance(o, Scalar):
            o = Scalar.coerce(o)
        return self * o.inverse()

    def __rtruediv__(self, o):
        return Scalar.coerce(o) * self.inverse()

    def conjugate(self) -> "Scalar":
        return Scalar(self.re, -self.im) if self.im else self

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, o):
        if not isinstance(o, Scalar):
            try:
                o = Scalar.coerce(o)
            except (TypeError, ValueError):
                return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((int(self.re.numerator), int(self.re.denominator),
                     int(self.im.numerator), int(self.im.denominator)))

    @property
    def real(self) -> Fraction:
        return Fraction(int(self.re.numerator), int(self.re.denominator))

    @property
    def imag(self) -> Fraction:
        return Fraction(int(self.im.numerator), int(self.im.denominator))

    def is_real(self) -> bool:
        return not self.im

    # -- text -------------------------------------------------------------
    def __str__(self):
        if not self.im:
            return str(self.real)
        im = self.imag
        if not self.re:
            if im == 1:
                return "i"
            if im == -1:
                return "-i"
            return f"{im}*i"
        sign = "+" if im > 0 else "-"
        mag = abs(im)
        tail = "i" if mag == 1 else f"{mag}*i"
        return f"{self.real}{sign}{tail}"

    def __repr__(self):
        return f"Scalar({str(self)!r})"

    _TERM = re.compile(r"\s*([+-]?)\s*(\d+(?:/\d+)?)?\s*(\*?\s*i)?\s*")

    @classmethod
    def parse(cls, text: str) -> "Scalar":
        """Parse literals such as ``3``, ``-1/2``, ``i``, ``2*i`` or ``1/2-3/4*i``."""
        s = text
        pos = 0
        re_part = Fraction(0)
        im_part = Fraction(0)
        seen = 0
        if not s.strip():
            raise ScalarSyntaxError("empty scalar", text, 0)
        while pos < len(s):
            if s[pos:].strip() == "":
                break
            m = cls._TERM.match(s, pos)
            sign, num, imag = m.group(1), m.group(2), m.group(3)
            if not num and not imag:
                raise ScalarSyntaxError("expected a number or 'i'", text, m.end(1) if sign else pos)
            if seen and not sign:
                raise ScalarSyntaxError("expected '+' or '-'", text, pos)
            if imag and imag.startswith("*") and not num:
                raise ScalarSyntaxError("dangling '*'", text, m.start(3))
            val = Fraction(num) if num else Fraction(1)
            if sign == "-":
                val = -val
            if imag:
                im_part += val
            else:
                re_part += val
            seen += 1
            if m.end() == pos:
                raise ScalarSyntaxError("unexpected character", text, pos)
            pos = m.end()
            if pos < len(s) and s[pos] not in "+-" and s[pos:].strip():
                raise ScalarSyntaxError("unexpected character", text, pos)
        return cls(re_part, im_part)


_Q0 = mpq(0)
ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)


def _s(x) -> Scalar:
    return x if isinstance(x, Scalar) else Scalar.coerce(x)


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------

class Matrix:
    """Dense matrix of :class:`Scalar`; rows x cols, possibly with a zero extent."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Sequence], ncols: int | None = None):
        rows = [[_s(x) for x in r] for r in rows]
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for a matrix without rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    @classmethod
    def _raw(cls, rows, ncols):
        m = cls.__new__(cls)
        m.rows = rows
        m.nrows = len(rows)
        m.ncols = ncols
        return m

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        return cls._raw([[ZERO] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        m = cls.zeros(n, n)
        for i in range(n):
            m.rows[i][i] = ONE
        return m

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int) -> "Matrix":
        rows = [[ZERO] * len(cols) for _ in range(nrows)]
        for j, c in enumerate(cols):
            for i, x in enumerate(c):
                rows[i][j] = _s(x)
        return cls._raw(rows, len(cols))

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list:
        return [self.column(j) for j in range(self.ncols)]

    def copy(self) -> "Matrix":
        return Matrix._raw([list(r) for r in self.rows], self.ncols)

    @property
    def T(self) -> "Matrix":
        return Matrix._raw([list(c) for c in zip(*self.rows)] if self.nrows else
                           [[] for _ in range(self.ncols)], self.nrows)

    def conj(self) -> "Matrix":
        return Matrix._raw([[x.conjugate() for x in r] for r in self.rows], self.ncols)

    @property
    def H(self) -> "Matrix":
        return self.T.conj()

    def __eq__(self, o):
        if not isinstance(o, Matrix):
            return NotImplemented
        return self.shape == o.shape and self.rows == o.rows

    def __add__(self, o: "Matrix") -> "Matrix":
        if self.shape != o.shape:
            raise ValueError(f"shape mismatch {self.shape} + {o.shape}")
        return Matrix._raw([[a + b if b else a for a, b in zip(r, s)]
                            for r, s in zip(self.rows, o.rows)], self.ncols)

    def __sub__(self, o: "Matrix") -> "Matrix":
        return self + (-o)

    def __neg__(self) -> "Matrix":
        return Matrix._raw([[-a if a else a for a in r] for r in self.rows], self.ncols)

    def scale(self, c) -> "Matrix":
        c = _s(c)
        return Matrix._raw([[a * c if a else a for a in r] for r in self.rows], self.ncols)

    def __matmul__(self, o: "Matrix") -> "Matrix":
        if self.ncols != o.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {o.shape}")
        out = []
        orows = o.rows
        n = o.ncols
        for r in self.rows:
            acc = [ZERO] * n
            for k, a in enumerate(r):
                if not a:
                    continue
                for j, b in enumerate(orows[k]):
                    if b:
                        acc[j] = acc[j] + a * b
            out.append(acc)
        return Matrix._raw(out, n)

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.ncols:
            raise ValueError("vector length mismatch")
        nz = [(k, x) for k, x in enumerate(v) if x]
        out = []
        for r in self.rows:
            acc = ZERO
            for k, x in nz:
                a = r[k]
                if a:
                    acc = acc + a * x
            out.append(acc)
        return tuple(out)

    def is_zero(self) -> bool:
        return not any(x for r in self.rows for x in r)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix._raw([[self.rows[i][j] for j in cols] for i in rows], len(cols))

    @staticmethod
    def hstack(*ms: "Matrix") -> "Matrix":
        n = ms[0].nrows
        if any(m.nrows != n for m in ms):
            raise ValueError("hstack row mismatch")
        return Matrix._raw([sum((m.rows[i] for m in ms), []) for i in range(n)],
                           sum(m.ncols for m in ms))

    @staticmethod
    def vstack(*ms: "Matrix") -> "Matrix":
        n = ms[0].ncols
        if any(m.ncols != n for m in ms):
            raise ValueError("vstack column mismatch")
        return Matrix._raw([list(r) for m in ms for r in m.rows], n)

    @staticmethod
    def block(blocks: Sequence[Sequence["Matrix"]]) -> "Matrix":
        return Matrix.vstack(*[Matrix.hstack(*row) for row in blocks])

    def rank(self) -> int:
        return rank(self)

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.rows)
        return f"Matrix({self.nrows}x{self.ncols}: [{body}])"


def _echelon(rows: list, ncols: int, track: list | None = None) -> list:
    """In-place Gauss-Jordan reduction; returns pivot columns.

    ``track`` rows (if given) receive the same row operations, which yields
    the transform of :func:`row_reduce`.  Rows are handled as sparse dicts
    internally; the matrices met in practice are mostly zeros.
    """
    sp = [{j: x for j, x in enumerate(r) if x} for r in rows]
    tk = [{j: x for j, x in enumerate(r) if x} for r in track] if track is not None else None
    pivots = []
    r = 0
    nrows = len(sp)
    for c in range(ncols):
        if r == nrows:
            break
        p = None
        for i in range(r, nrows):
            if c in sp[i]:
                p = i
                break
        if p is None:
            continue
        if p != r:
            sp[p], sp[r] = sp[r], sp[p]
            if tk is not None:
                tk[p], tk[r] = tk[r], tk[p]
        prow = sp[r]
        piv = prow[c]
        if piv != ONE:
            inv = piv.inverse()
            sp[r] = prow = {j: x * inv for j, x in prow.items()}
            if tk is not None:
                tk[r] = {j: x * inv for j, x in tk[r].items()}
        pitems = list(prow.items())
        titems = list(tk[r].items()) if tk is not None else None
        for i in range(nrows):
            if i == r:
                continue
            row = sp[i]
            f = row.get(c)
            if f is None:
                continue
            for j, x in pitems:
                y = row.get(j)
                y = -(f * x) if y is None else y - f * x
                if y:
                    row[j] = y
                else:
                    del row[j]
            if titems is not None:
                trow = tk[i]
                for j, x in titems:
                    y = trow.get(j)
                    y = -(f * x) if y is None else y - f * x
                    if y:
                        trow[j] = y
                    else:
                        del trow[j]
        pivots.append(c)
        r += 1
    for i, d in enumerate(sp):
        row = [ZERO] * ncols
        for j, x in d.items():
            row[j] = x
        rows[i] = row
    if tk is not None:
        w = len(track[0]) if track else 0
        for i, d in enumerate(tk):
            row = [ZERO] * w
            for j, x in d.items():
                row[j] = x
            track[i] = row
    return pivots


def row_reduce(m: Matrix):
    """Return ``(rank, rref, transform)`` with ``transform @ m == rref``."""
    rows = [list(r) for r in m.rows]
    track = Matrix.identity(m.nrows).rows
    piv = _echelon(rows, m.ncols, track)
    return len(piv), Matrix._raw(rows, m.ncols), Matrix._raw(track, m.nrows)


def rank(m: Matrix) -> int:
    if m.nrows == 0 or m.ncols == 0:
        return 0
    # eliminate along the shorter side
    if m.nrows > m.ncols:
        rows = [list(r) for r in m.T.rows]
        return len(_echelon(rows, m.nrows))
    rows = [list(r) for r in m.rows]
    return len(_echelon(rows, m.ncols))


def _rref_rows(vectors: Iterable[Sequence], dim: int) -> list:
    rows = [list(v) for v in vectors]
    for v in rows:
        if len(v) != dim:
            raise ValueError(f"vector of length {len(v)} in ambient dimension {dim}")
    piv = _echelon(rows, dim)
    return [tuple(rows[i]) for i in range(len(piv))]


def kernel_basis(m: Matrix) -> "Subspace":
    """Basis of ``{v : m v = 0}`` as a canonical :class:`Subspace`."""
    n = m.ncols
    rows = [list(r) for r in m.rows]
    piv = _echelon(rows, n)
    pivset = set(piv)
    basis = []
    for f in range(n):
        if f in pivset:
            continue
        v = [ZERO] * n
        v[f] = ONE
        for i, c in enumerate(piv):
            x = rows[i][f]
            if x:
                v[c] = -x
        basis.append(v)
    return Subspace(n, basis)


def solve(m: Matrix, b: Sequence):
    """One solution ``x`` of ``m x = b`` (free variables set to 0), or ``None``."""
    if len(b) != m.nrows:
        raise ValueError("right-hand side length mismatch")
    n = m.ncols
    rows = [list(r) + [_s(x)] for r, x in zip(m.rows, b)]
    piv = _echelon(rows, n + 1)
    if piv and piv[-1] == n:
        return None
    x = [ZERO] * n
    for i, c in enumerate(piv):
        x[c] = rows[i][n]
    return tuple(x)


# ---------------------------------------------------------------------------
# subspaces
# ---------------------------------------------------------------------------

class Subspace:
    """A linear subspace of ``Q(i)^n`` stored by its reduced echelon basis."""

    __slots__ = ("ambient_dim", "basis", "_pivots")

    def __init__(self, ambient_dim: int, vectors: Iterable[Sequence] = ()):
        self.ambient_dim = ambient_dim
        self.basis = tuple(_rref_rows(vectors, ambient_dim))
        self._pivots = tuple(next(j for j, x in enumerate(v) if x) for v in self.basis)

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, Matrix.identity(n).rows)

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, ())

    @classmethod
    def coordinate(cls, n: int, indices: Iterable[int]) -> "Subspace":
        vs = []
        for i in sorted(set(indices)):
            v = [ZERO] * n
            v[i] = ONE
            vs.append(v)
        return cls(n, vs)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def __eq__(self, o):
        if not isinstance(o, Subspace):
            return NotImplemented
        return self.ambient_dim == o.ambient_dim and self.basis == o.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    def matrix(self) -> Matrix:
        """Basis vectors as the columns of an ``ambient x dim`` matrix."""
        return Matrix.from_columns(self.basis, self.ambient_dim)

    def reduce(self, v: Sequence) -> tuple:
        """Canonical remainder of ``v`` modulo this subspace."""
        v = list(v)
        for b, p in zip(self.basis, self._pivots):
            f = v[p]
            if f:
                for j in range(p, self.ambient_dim):
                    if b[j]:
                        v[j] = v[j] - f * b[j]
        return tuple(v)

    def contains(self, v: Sequence) -> bool:
        if len(v) != self.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        return not any(self.reduce(v))

    def __contains__(self, v):
        return self.contains(v)

    def issubspace(self, o: "Subspace") -> bool:
        _check_ambient(self, o)
        return all(o.contains(b) for b in self.basis)

    def coordinates(self, v: Sequence) -> tuple | None:
        """Coefficients of ``v`` in the echelon basis, or ``None`` if ``v`` is outside."""
        if not self.contains(v):
            return None
        return tuple(v[p] for p in self._pivots)

    # operations dispatched by subspace_calc
    def __add__(self, o: "Subspace") -> "Subspace":
        _check_ambient(self, o)
        return Subspace(self.ambient_dim, self.basis + o.basis)

    def intersect(self, o: "Subspace") -> "Subspace":
        _check_ambient(self, o)
        n = self.ambient_dim
        if not self.basis or not o.basis:
            return Subspace.zero(n)
        # solve A a = B b
        a = self.matrix()
        b = o.matrix()
        k = kernel_basis(Matrix.hstack(a, -b))
        vs = [a.apply(v[: self.dim]) for v in k.basis]
        return Subspace(n, vs)

    def annihilator(self) -> Matrix:
        """Rows spanning the linear functionals that vanish on this subspace."""
        n = self.ambient_dim
        if not self.basis:
            return Matrix.identity(n)
        k = kernel_basis(Matrix(self.basis, n))
        return Matrix._raw([list(v) for v in k.basis], n)


def _check_ambient(a: Subspace, b: Subspace):
    if a.ambient_dim != b.ambient_dim:
        raise ValueError(f"ambient dimension mismatch: {a.ambient_dim} vs {b.ambient_dim}")


def image(f: Matrix, v: Subspace | None = None) -> Subspace:
    """``f(V)``, with ``V`` the whole source when omitted."""
    if v is None:
        return Subspace(f.nrows, f.T.rows)
    if v.ambient_dim != f.ncols:
        raise ValueError("ambient dimension mismatch")
    return Subspace(f.nrows, [f.apply(b) for b in v.basis])


def preimage(f: Matrix, w: Subspace) -> Subspace:
    """``{v : f v in W}``."""
    if w.ambient_dim != f.nrows:
        raise ValueError("ambient dimension mismatch")
    ann = w.annihilator()
    if ann.nrows == 0:
        return Subspace.full(f.ncols)
    return kernel_basis(ann @ f)


def quotient_basis(v: Subspace, w: Subspace):
    """``(dim V - dim W, representatives)`` with representatives drawn from V's basis."""
    _check_ambient(v, w)
    if not w.issubspace(v):
        raise ValueError("quotient_basis: W is not contained in V")
    acc = Subspace(v.ambient_dim, w.basis)
    reps = []
    for b in v.basis:
        if acc.contains(b):
            continue
        reps.append(b)
        acc = Subspace(v.ambient_dim, acc.basis + (b,))
    assert len(reps) == v.dim - w.dim
    return len(reps), reps


def subspace_calc(op: str, *args):
    """Dispatch ``sum | intersect | preimage | quotient_basis``."""
    if op == "sum":
        out = args[0]
        for a in args[1:]:
            out = out + a
        return out
    if op == "intersect":
        out = args[0]
        for a in args[1:]:
            out = out.intersect(a)
        return out
    if op == "preimage":
        return preimage(*args)
    if op == "quotient_basis":
        return quotient_basis(*args)
    raise ValueError(f"unknown subspace operation {op!r}")


# ---------------------------------------------------------------------------
# integer lattices
# ---------------------------------------------------------------------------

def hermite_normal_form(gens: Sequence[Sequence[int]], k: int) -> list:
    """Row-style HNF of the integer row span of ``gens`` (zero rows dropped)."""
    rows = [[int(x) for x in g] for g in gens]
    for g in rows:
        if len(g) != k:
            raise ValueError("generator length mismatch")
    out = []
    r = 0
    for c in range(k):
        # gcd-combine column c over rows[r:]
        live = [i for i in range(r, len(rows)) if rows[i][c]]
        if not live:
            continue
        while True:
            live = [i for i in range(r, len(rows)) if rows[i][c]]
            if len(live) <= 1:
                break
            piv = min(live, key=lambda i: abs(rows[i][c]))
            for i in live:
                if i == piv:
                    continue
                q = rows[i][c] // rows[piv][c]
                rows[i] = [a - q * b for a, b in zip(rows[i], rows[piv])]
        piv = live[0]
        rows[r], rows[piv] = rows[piv], rows[r]
        if rows[r][c] < 0:
            rows[r] = [-a for a in rows[r]]
        for i in range(r):
            q = rows[i][c] // rows[r][c]
            if q:
                rows[i] = [a - q * b for a, b in zip(rows[i], rows[r])]
        r += 1
    out = [tuple(row) for row in rows[:r]]
    return out


class IntLattice:
    """Integer sublattice of ``Z^k`` given by generators."""

    def __init__(self, k: int, generators: Iterable[Sequence[int]] = ()):
        self.k = k
        self.generators = tuple(tuple(int(x) for x in g) for g in generators)
        self.hnf = tuple(hermite_normal_form(self.generators, k))

    def __contains__(self, v):
        return lattice_member(v, self)

    def __eq__(self, o):
        return isinstance(o, IntLattice) and self.k == o.k and self.hnf == o.hnf

    def __hash__(self):
        return hash((self.k, self.hnf))

    def __repr__(self):
        return f"IntLattice(k={self.k}, hnf={list(self.hnf)})"


def lattice_member(v: Sequence[int], lat: IntLattice) -> bool:
    """True iff ``v`` is an integer combination of the lattice generators."""
    if len(v) != lat.k:
        raise ValueError(f"vector of length {len(v)} for a rank-{lat.k} lattice")
    v = [int(x) for x in v]
    for row in lat.hnf:
        c = next(j for j, x in enumerate(row) if x)
        if v[c] % row[c]:
            return False
        q = v[c] // row[c]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return not any(v)
