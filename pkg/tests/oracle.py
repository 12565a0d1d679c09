"""Independent oracle for page dimensions, Betti numbers and degeneracy steps.

Uses only matrix ranks over sympy's Gaussian rationals, with the total
differential reassembled from the bicomplex blocks.  Page dimensions come
from the rank identity

    dim E_r^{p,q} = z(r, p) - z(r-1, p+1) - dz(r-1, p-r+1) + dz(r, p-r+1)

where ``z(r, p) = dim {x in F^p : dx in F^(p+r)}`` in degree ``p+q`` and
``dz`` is the dimension of ``d`` of that space one degree lower.
"""
from functools import lru_cache

from sympy import QQ, QQ_I
from sympy.polys.matrices import DomainMatrix


def _q(x):
    return QQ(int(x.numerator), int(x.denominator))


def _conv(s):
    return QQ_I(_q(s.re), _q(s.im))


class Oracle:
    def __init__(self, b):
        self.b = b
        self.P, self.Q = b.P, b.Q
        self.top = b.P + b.Q
        self.cells = {}
        for k in range(self.top + 1):
            off = 0
            cl = []
            for p in range(self.P + 1):
                q = k - p
                if 0 <= q <= self.Q:
                    n = b.dim(p, q)
                    cl.append((p, q, off, off + n))
                    off += n
            self.cells[k] = cl
        self.dims = {k: (self.cells[k][-1][3] if self.cells[k] else 0) for k in range(self.top + 1)}
        self.D = {k: self._total(k) for k in range(self.top)}
        self.rank = lru_cache(maxsize=None)(self._rank)

    def _total(self, k):
        rows = [[QQ_I(0, 0)] * self.dims[k] for _ in range(self.dims[k + 1])]
        tgt = {(p, q): s for p, q, s, _ in self.cells[k + 1]}
        for p, q, s, e in self.cells[k]:
            for blk, cell in ((self.b.d10[(p, q)], (p + 1, q)), (self.b.d01[(p, q)], (p, q + 1))):
                if cell not in tgt:
                    continue
                t0 = tgt[cell]
                for i in range(blk.nrows):
                    for j in range(blk.ncols):
                        x = blk.rows[i][j]
                        if x:
                            rows[t0 + i][s + j] = _conv(x)
        return rows

    def _idx(self, k, lo, hi):
        out = []
        for p, q, s, e in self.cells.get(k, ()):
            if lo <= p < hi:
                out.extend(range(s, e))
        return out

    def _rank(self, k, col_lo, row_hi):
        """Rank of d on F^col_lo A^k followed by projection onto A^(k+1) / F^row_hi."""
        if k < 0 or k >= self.top:
            return 0
        cols = self._idx(k, col_lo, 10 ** 6)
        rows = self._idx(k + 1, -10 ** 6, row_hi)
        if not cols or not rows:
            return 0
        m = [[self.D[k][i][j] for j in cols] for i in rows]
        return DomainMatrix(m, (len(rows), len(cols)), QQ_I).rank()

    def fdim(self, p, k):
        return len(self._idx(k, p, 10 ** 6)) if 0 <= k <= self.top else 0

    def z(self, r, p, k):
        return self.fdim(p, k) - self.rank(k, p, p + r)

    def dz(self, r, p, k):
        # d(Z_r^p) in degree k+1; its kernel is ker d on F^p
        return self.rank(k, p, 10 ** 6) - (self.fdim(p, k) - self.z(r, p, k)) if k >= 0 else 0

    def page(self, r):
        out = {}
        for p in range(self.P + 1):
            for q in range(self.Q + 1):
                k = p + q
                if r == 0:
                    out[(p, q)] = self.b.dim(p, q)
                    continue
                v = (self.z(r, p, k) - self.z(r - 1, p + 1, k)
                     - self.dz(r - 1, p - r + 1, k - 1) + self.dz(r, p - r + 1, k - 1))
                out[(p, q)] = v
        return out

    def betti(self):
        return [self.dims[k] - self.rank(k, -10 ** 6, 10 ** 6) - self.rank(k - 1, -10 ** 6, 10 ** 6)
                for k in range(self.top + 1)]

    def rstep(self):
        last = self.P + 2
        inf = self.page(last)
        r = last
        while r > 1 and self.page(r - 1) == inf:
            r -= 1
        return r
