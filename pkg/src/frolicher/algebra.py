"""Character-twisted exterior bicomplexes.

A model consists of (1,0)-generators ``g_1..g_N`` (their conjugates are
synthesized), quadratic structure equations for ``d g_i``, a list of base
characters known through their logarithmic derivatives, and an integer
sublattice of exponent vectors describing which character products restrict
trivially to the lattice of the group.

Basis elements of the bicomplexes are :class:`TwistedElement` pairs
``(prefactor, monomial)`` where the prefactor is a product of base characters
and the monomial is a wedge of generators, encoded as a bit mask in
declaration order (declared generators first, then their conjugates).  The
differential is

    d(tau * m) = tau * (dlog(tau) ^ m + d m)

split by bidegree into the (1,0) part ``del10`` and the (0,1) part ``del01``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .exactalg import ZERO, IntLattice, Matrix, Scalar, lattice_member

__all__ = [
    "ModelError", "ClosureError", "BBAError",
    "CharExpr", "BaseCharacter", "GeneratorSpec", "ModelSpec", "TwistedElement",
    "CharDecl", "GenDecl", "ModelDescription",
    "build_model", "wedge", "wedge_sign", "ce_differential", "assemble_bicomplex",
    "Bicomplex", "Complex", "tot", "mask_of", "mask_indices",
]


class ModelError(ValueError):
    """A model description violates one of the structural requirements."""


class ClosureError(ModelError):
    """A selected basis is not closed under the differentials."""

    def __init__(self, msg, element=None, term=None):
        super().__init__(msg)
        self.element = element
        self.term = term


class BBAError(ArithmeticError):
    """del^2, delbar^2 or del delbar + delbar del fails to vanish."""


# ---------------------------------------------------------------------------
# bit-mask monomials
# ---------------------------------------------------------------------------

def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        if m >> i & 1:
            raise ValueError(f"repeated generator index {i}")
        m |= 1 << i
    return m


def mask_indices(mask: int) -> tuple:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def wedge_sign(a: int, b: int) -> int:
    """Sign of ``m_a ^ m_b`` relative to the sorted monomial ``m_(a|b)``; 0 if they overlap."""
    if a & b:
        return 0
    n = 0
    while b:
        low = b & -b
        n += (a >> low.bit_length()).bit_count()
        b ^= low
    return -1 if n & 1 else 1


# ---------------------------------------------------------------------------
# characters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CharExpr:
    """A product of base characters, stored as its integer exponent vector."""

    exps: tuple

    @classmethod
    def trivial(cls, k: int) -> "CharExpr":
        return cls((0,) * k)

    @classmethod
    def unit(cls, k: int, i: int, power: int = 1) -> "CharExpr":
        e = [0] * k
        e[i] = power
        return cls(tuple(e))

    def __mul__(self, o: "CharExpr") -> "CharExpr":
        return CharExpr(tuple(a + b for a, b in zip(self.exps, o.exps)))

    def __truediv__(self, o: "CharExpr") -> "CharExpr":
        return CharExpr(tuple(a - b for a, b in zip(self.exps, o.exps)))

    def __pow__(self, k: int) -> "CharExpr":
        return CharExpr(tuple(a * k for a in self.exps))

    def inverse(self) -> "CharExpr":
        return CharExpr(tuple(-a for a in self.exps))

    @property
    def is_trivial(self) -> bool:
        return not any(self.exps)

    def format(self, names: Sequence[str]) -> str:
        parts = []
        for n, e in zip(names, self.exps):
            if e == 1:
                parts.append(n)
            elif e:
                parts.append(f"{n}^{e}")
        return "*".join(parts) if parts else "1"

    def __repr__(self):
        return f"CharExpr{self.exps}"


KINDS = ("holomorphic", "antiholomorphic", "unitary", "general")


@dataclass(frozen=True)
class BaseCharacter:
    name: str
    dlog10: tuple  # ((generator index, Scalar), ...) on (1,0) generators
    dlog01: tuple  # same on (0,1) generators
    kind: str
    conj: CharExpr

    def dlog(self) -> dict:
        out = dict(self.dlog10)
        out.update(self.dlog01)
        return out


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    bidegree: tuple
    action_char: CharExpr
    differential: tuple  # ((mask, Scalar), ...)
    conjugate: int  # index of the conjugate generator
    factor: str | None = None
    beta: CharExpr | None = None
    gamma: CharExpr | None = None


@dataclass(frozen=True, order=True)
class TwistedElement:
    """``prefactor * monomial``; the prefactor is a :class:`CharExpr`."""

    prefactor: CharExpr = field(compare=True)
    mask: int = 0

    def degree(self) -> int:
        return self.mask.bit_count()


# -- declarations (what a model file or a caller hands to build_model) -------

@dataclass
class CharDecl:
    name: str
    dlog10: Mapping = field(default_factory=dict)  # generator name -> scalar
    dlog01: Mapping = field(default_factory=dict)  # conjugate generator name -> scalar
    kind: str = "general"
    conj: Mapping | None = None  # base name -> exponent


@dataclass
class GenDecl:
    name: str
    char: Mapping = field(default_factory=dict)  # base name -> exponent
    d: Sequence = ()  # ((scalar, (gen names...)), ...)
    bidegree: tuple = (1, 0)
    factor: str | None = None
    beta: Mapping | None = None
    gamma: Mapping | None = None


@dataclass
class ModelDescription:
    name: str = "model"
    base_chars: list = field(default_factory=list)
    lattice: list = field(default_factory=list)  # exponent maps or integer vectors
    generators: list = field(default_factory=list)
    flags: dict = field(default_factory=dict)
    scalars: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# model
# ---------------------------------------------------------------------------

class ModelSpec:
    """Validated model; immutable after construction."""

    def __init__(self, name, base_chars, generators, lattice, flags, description=None):
        self.name = name
        self.base_chars = tuple(base_chars)
        self.generators = tuple(generators)
        self.lattice = lattice
        self.flags = dict(flags)
        self.description = description
        self.n = len(self.generators) // 2
        self.k = len(self.base_chars)
        self.names = tuple(g.name for g in self.generators)
        self.index = {g.name: i for i, g in enumerate(self.generators)}
        self.holo_mask = (1 << self.n) - 1
        self.anti_mask = self.holo_mask << self.n
        self.full_mask = (1 << (2 * self.n)) - 1
        self._gen_d = [dict(g.differential) for g in self.generators]
        self._dlog = [b.dlog() for b in self.base_chars]
        self._mono_d: dict = {}

    # -- characters -------------------------------------------------------
    @property
    def char_names(self) -> tuple:
        return tuple(b.name for b in self.base_chars)

    def trivial_char(self) -> CharExpr:
        return CharExpr.trivial(self.k)

    def conj_char(self, c: CharExpr) -> CharExpr:
        out = [0] * self.k
        for e, b in zip(c.exps, self.base_chars):
            if e:
                for j, x in enumerate(b.conj.exps):
                    out[j] += e * x
        return CharExpr(tuple(out))

    def dlog(self, c: CharExpr) -> dict:
        """Logarithmic derivative of a character as ``{generator index: Scalar}``."""
        out: dict = {}
        for e, dl in zip(c.exps, self._dlog):
            if e:
                for g, x in dl.items():
                    y = out.get(g, ZERO) + x * e
                    if y:
                        out[g] = y
                    else:
                        out.pop(g, None)
        return out

    def is_unitary(self, c: CharExpr) -> bool:
        dl = self.dlog(c)
        for i in range(self.n):
            a = dl.get(i, ZERO)
            b = dl.get(i + self.n, ZERO)
            if b != -a.conjugate():
                return False
        return True

    def is_holomorphic(self, c: CharExpr) -> bool:
        return not any(g >= self.n for g in self.dlog(c))

    def is_trivial_on_lattice(self, c: CharExpr) -> bool:
        return lattice_member(c.exps, self.lattice)

    def mono_char(self, mask: int) -> CharExpr:
        """Total action character of a monomial."""
        out = [0] * self.k
        for i in mask_indices(mask):
            for j, x in enumerate(self.generators[i].action_char.exps):
                out[j] += x
        return CharExpr(tuple(out))

    # -- monomials --------------------------------------------------------
    def bidegree(self, mask: int) -> tuple:
        return ((mask & self.holo_mask).bit_count(), (mask & self.anti_mask).bit_count())

    def mono_name(self, mask: int) -> str:
        if not mask:
            return "1"
        return "^".join(self.names[i] for i in mask_indices(mask))

    def element_name(self, e: TwistedElement) -> str:
        m = self.mono_name(e.mask)
        if e.prefactor.is_trivial:
            return m
        return f"[{e.prefactor.format(self.char_names)}]{m}"

    def conj_mask(self, mask: int) -> tuple:
        """``(sign, mask)`` of the conjugate monomial."""
        idx = [self.generators[i].conjugate for i in mask_indices(mask)]
        out = 0
        sign = 1
        for i in idx:
            s = wedge_sign(out, 1 << i)
            sign *= s
            out |= 1 << i
        return sign, out

    def d_mono(self, mask: int) -> dict:
        """Untwisted differential of a monomial, ``{mask: Scalar}``."""
        hit = self._mono_d.get(mask)
        if hit is not None:
            return hit
        out: dict = {}
        idx = mask_indices(mask)
        for pos, g in enumerate(idx):
            dg = self._gen_d[g]
            if not dg:
                continue
            pre = mask & ((1 << g) - 1)
            post = mask & ~((1 << (g + 1)) - 1)
            base = -1 if pos & 1 else 1
            for t, c in dg.items():
                s1 = wedge_sign(pre, t)
                if not s1:
                    continue
                s2 = wedge_sign(pre | t, post)
                if not s2:
                    continue
                key = pre | t | post
                y = out.get(key, ZERO) + c * (base * s1 * s2)
                if y:
                    out[key] = y
                else:
                    out.pop(key, None)
        self._mono_d[mask] = out
        return out

    def d_element(self, e: TwistedElement) -> tuple:
        """``(del10, del01)`` images of a twisted element as ``{TwistedElement: Scalar}``."""
        d10: dict = {}
        d01: dict = {}
        tau = e.prefactor
        m = e.mask

        def put(target, key, c):
            y = target.get(key, ZERO) + c
            if y:
                target[key] = y
            else:
                target.pop(key, None)

        for g, c in self.dlog(tau).items():
            s = wedge_sign(1 << g, m)
            if s:
                put(d10 if g < self.n else d01, TwistedElement(tau, m | (1 << g)), c * s)
        for t, c in self.d_mono(m).items():
            p0, q0 = self.bidegree(m)
            p1, _ = self.bidegree(t)
            put(d10 if p1 > p0 else d01, TwistedElement(tau, t), c)
        return d10, d01

    def conjugate_element(self, e: TwistedElement) -> tuple:
        s, m = self.conj_mask(e.mask)
        return s, TwistedElement(self.conj_char(e.prefactor), m)

    def all_masks(self) -> list:
        return list(range(1 << (2 * self.n)))

    def __repr__(self):
        return f"ModelSpec({self.name!r}, n={self.n}, chars={self.char_names})"


def _char_from_map(m, names, where) -> CharExpr:
    if m is None:
        return None
    if isinstance(m, CharExpr):
        return m
    if isinstance(m, (list, tuple)):
        if len(m) != len(names):
            raise ModelError(f"{where}: exponent vector has length {len(m)}, expected {len(names)}")
        return CharExpr(tuple(int(x) for x in m))
    e = [0] * len(names)
    for k, v in m.items():
        if k not in names:
            raise ModelError(f"{where}: unknown base character {k!r}")
        e[names.index(k)] += int(v)
    return CharExpr(tuple(e))


def build_model(desc: ModelDescription) -> ModelSpec:
    """Validate a description and synthesize conjugate generators."""
    gnames = [g.name for g in desc.generators]
    if len(set(gnames)) != len(gnames):
        raise ModelError("duplicate generator names")
    for g in desc.generators:
        if tuple(g.bidegree) != (1, 0):
            raise ModelError(f"generator {g.name}: only (1,0)-generators are declared; "
                             "conjugates are synthesized")
        if g.name.startswith("c") and g.name[1:] in gnames:
            raise ModelError(f"generator {g.name} clashes with the conjugate of {g.name[1:]}")
    n = len(gnames)
    all_names = gnames + ["c" + x for x in gnames]
    index = {x: i for i, x in enumerate(all_names)}
    cnames = [b.name for b in desc.base_chars]
    if len(set(cnames)) != len(cnames):
        raise ModelError("duplicate base character names")
    k = len(cnames)

    def char(m, where):
        return _char_from_map(m, cnames, where) if m is not None else CharExpr.trivial(k)

    # generator differentials in mask form
    gdiffs = []
    for g in desc.generators:
        terms: dict = {}
        for coef, names in g.d:
            try:
                idx = [index[x] for x in names]
            except KeyError as exc:
                raise ModelError(f"d{g.name}: unknown generator {exc.args[0]!r}") from None
            if len(idx) != 2:
                raise ModelError(f"d{g.name}: term {'^'.join(names)} is not quadratic")
            if idx[0] == idx[1]:
                continue
            mask = mask_of(idx)
            s = 1
            if idx[0] > idx[1]:
                s = -1
            y = terms.get(mask, ZERO) + Scalar.coerce(coef) * s
            if y:
                terms[mask] = y
            else:
                terms.pop(mask, None)
        gdiffs.append(terms)

    def conj_term(mask):
        a, b = mask_indices(mask)
        ca = a + n if a < n else a - n
        cb = b + n if b < n else b - n
        s = wedge_sign(1 << ca, 1 << cb)
        return s, (1 << ca) | (1 << cb)

    conj_diffs = []
    for terms in gdiffs:
        out = {}
        for mask, c in terms.items():
            s, cm = conj_term(mask)
            out[cm] = c.conjugate() * s
        conj_diffs.append(out)

    # base characters
    bases = []
    for b in desc.base_chars:
        if b.kind not in KINDS:
            raise ModelError(f"character {b.name}: unknown kind {b.kind!r}")
        d10 = []
        for gname, c in b.dlog10.items():
            if gname not in index or index[gname] >= n:
                raise ModelError(f"character {b.name}: dlog10 must use (1,0)-generators, got {gname!r}")
            c = Scalar.coerce(c)
            if c:
                d10.append((index[gname], c))
        d01 = []
        for gname, c in b.dlog01.items():
            if gname not in index or index[gname] < n:
                raise ModelError(f"character {b.name}: dlog01 must use (0,1)-generators, got {gname!r}")
            c = Scalar.coerce(c)
            if c:
                d01.append((index[gname], c))
        conj = _char_from_map(b.conj, cnames, f"character {b.name} conj") if b.conj is not None else None
        bases.append([b.name, tuple(sorted(d10)), tuple(sorted(d01)), b.kind, conj])

    # conjugation rule: declared, or solved from the dlog data
    dl = [dict(x[1]) | dict(x[2]) for x in bases]

    def conj_form(form):
        out = {}
        for g, c in form.items():
            out[g + n if g < n else g - n] = c.conjugate()
        return out

    def combine(exps):
        out = {}
        for e, f in zip(exps, dl):
            for g, c in f.items():
                y = out.get(g, ZERO) + c * e
                if y:
                    out[g] = y
                else:
                    out.pop(g, None)
        return out

    for j, b in enumerate(bases):
        if b[4] is None:
            b[4] = _solve_char(dl, conj_form(dl[j]), cnames, n)
            if b[4] is None:
                raise ModelError(f"character {b[0]}: its conjugate is not a product of base characters; "
                                 "declare it")
    for j, b in enumerate(bases):
        if combine(b[4].exps) != conj_form(dl[j]):
            raise ModelError(f"character {b[0]}: declared conjugate {b[4].format(cnames)} "
                             "disagrees with the dlog data")
        # involution
        back = [0] * k
        for e, other in zip(b[4].exps, bases):
            for t, x in enumerate(other[4].exps):
                back[t] += e * x
        if tuple(back) != CharExpr.unit(k, j).exps:
            raise ModelError(f"character {b[0]}: conjugation is not an involution")
        kind = b[3]
        f10 = {g: c for g, c in dl[j].items() if g < n}
        f01 = {g: c for g, c in dl[j].items() if g >= n}
        if kind == "holomorphic" and f01:
            raise ModelError(f"character {b[0]}: holomorphic but dlog01 != 0")
        if kind == "antiholomorphic" and f10:
            raise ModelError(f"character {b[0]}: antiholomorphic but dlog10 != 0")
        if kind == "unitary":
            for i in range(n):
                if f01.get(i + n, ZERO) != -f10.get(i, ZERO).conjugate():
                    raise ModelError(f"character {b[0]}: unitary but dlog01 != -conj(dlog10)")
    _check_independent(dl, cnames, n)

    base_objs = [BaseCharacter(b[0], b[1], b[2], b[3], b[4]) for b in bases]

    def conj_char(c: CharExpr) -> CharExpr:
        out = [0] * k
        for e, b in zip(c.exps, base_objs):
            for t, x in enumerate(b.conj.exps):
                out[t] += e * x
        return CharExpr(tuple(out))

    gens = []
    for i, g in enumerate(desc.generators):
        ac = char(g.char, f"generator {g.name}")
        beta = _char_from_map(g.beta, cnames, f"generator {g.name} beta") if g.beta is not None else None
        gamma = _char_from_map(g.gamma, cnames, f"generator {g.name} gamma") if g.gamma is not None else None
        if g.factor not in (None, "abelian", "nil"):
            raise ModelError(f"generator {g.name}: factor must be 'abelian' or 'nil'")
        gens.append(GeneratorSpec(g.name, (1, 0), ac, tuple(sorted(gdiffs[i].items())), i + n,
                                  g.factor, beta, gamma))
    for i, g in enumerate(desc.generators):
        gens.append(GeneratorSpec("c" + g.name, (0, 1), conj_char(gens[i].action_char),
                                  tuple(sorted(conj_diffs[i].items())), i, gens[i].factor))

    lat_gens = [_char_from_map(v, cnames, "lattice").exps for v in desc.lattice]
    lattice = IntLattice(k, lat_gens)
    flags = {str(a): bool(b) for a, b in desc.flags.items()}
    model = ModelSpec(desc.name, base_objs, gens, lattice, flags, desc)
    _validate(model)
    return model


def _realify(form: dict, n: int) -> list:
    row = []
    for g in range(2 * n):
        c = form.get(g, ZERO)
        row.append(c.real)
        row.append(c.imag)
    return row


def _qrank(vectors: Sequence[Sequence[Fraction]]) -> int:
    if not vectors:
        return 0
    return Matrix(vectors).rank()


def _check_independent(dl, cnames, n):
    vecs = [_realify(f, n) for f in dl]
    if vecs and _qrank(vecs) < len(vecs):
        raise ModelError("base characters must have Q-linearly independent dlog data "
                         f"({', '.join(cnames)})")


def _solve_char(dl: list, target: dict, cnames, n) -> CharExpr | None:
    """Integer exponent vector ``e`` with ``sum e_j dlog_j == target``, or None."""
    from .exactalg import solve

    if not dl:
        return CharExpr(()) if not target else None
    cols = [_realify(f, n) for f in dl]
    m = Matrix.from_columns(cols, 4 * n)
    x = solve(m, _realify(target, n))
    if x is None:
        return None
    out = []
    for v in x:
        if v.im or v.re.denominator != 1:
            return None
        out.append(int(v.re))
    return CharExpr(tuple(out))


def _validate(model: ModelSpec):
    n = model.n
    for i, g in enumerate(model.generators):
        for mask, c in g.differential:
            p, q = model.bidegree(mask)
            if (p, q) not in ((2, 0), (1, 1), (0, 2)):
                raise ModelError(f"d{g.name}: bad term bidegree {(p, q)}")
            if i < n and (p, q) == (0, 2):
                raise ModelError(f"d{g.name}: a (0,2) term in the differential of a (1,0)-form "
                                 "is not allowed (non-integrable)")
            if model.mono_char(mask) != g.action_char:
                raise ModelError(
                    f"d{g.name}: term {model.mono_name(mask)} has action character "
                    f"{model.mono_char(mask).format(model.char_names)} but {g.name} has "
                    f"{g.action_char.format(model.char_names)} (not homogeneous)")
        if model.flags.get("complex_parallelizable") and i < n:
            for mask, _ in g.differential:
                if model.bidegree(mask) != (2, 0):
                    raise ModelError(f"d{g.name}: complex parallelizable models need (2,0) differentials")
    for b in model.base_chars:
        for gi, _ in b.dlog10 + b.dlog01:
            if not model.generators[gi].action_char.is_trivial:
                raise ModelError(f"character {b.name}: dlog involves {model.names[gi]}, "
                                 "which has a nontrivial action character")
            if model.generators[gi].differential:
                raise ModelError(f"character {b.name}: dlog involves non-closed generator {model.names[gi]}")
            if model.flags.get("assumption12") and model.generators[gi].factor != "abelian":
                raise ModelError(f"character {b.name}: dlog must live on the abelian factor")
    for g in model.generators[:n]:
        if g.factor == "abelian" and (g.differential or not g.action_char.is_trivial):
            raise ModelError(f"generator {g.name}: abelian-factor generators must be closed "
                             "with trivial action")
    for v in model.lattice.generators:
        if not model.is_unitary(CharExpr(v)):
            raise ModelError(f"lattice generator {CharExpr(v).format(model.char_names)} is not unitary; "
                             "a character trivial on a lattice must be unitary")
    # d^2 = 0 on generators
    for i, g in enumerate(model.generators):
        dd: dict = {}
        for mask, c in g.differential:
            for t, e in model.d_mono(mask).items():
                y = dd.get(t, ZERO) + c * e
                if y:
                    dd[t] = y
                else:
                    dd.pop(t, None)
        if dd:
            raise ModelError(f"d(d{g.name}) != 0: {model.mono_name(next(iter(dd)))} survives")


# ---------------------------------------------------------------------------
# products and Lie brackets
# ---------------------------------------------------------------------------

def wedge(a: TwistedElement, b: TwistedElement):
    """``(sign, a^b)`` or ``None`` when a generator repeats."""
    s = wedge_sign(a.mask, b.mask)
    if not s:
        return None
    return s, TwistedElement(a.prefactor * b.prefactor, a.mask | b.mask)


def ce_differential(names: Sequence[str], brackets: Mapping, *, complex_parallelizable=False) -> dict:
    """Chevalley-Eilenberg differentials from structure constants.

    ``brackets[(X, Y)] = {Z: c, ...}`` means ``[X, Y] = sum c Z`` on the
    frame dual to ``names``.  With ``d xi(X, Y) = -xi([X, Y])`` this gives
    ``d xi_Z = -sum_{X<Y} c^Z_{XY} xi_X ^ xi_Y``.  Returns
    ``{name: [(Scalar, (a, b)), ...]}``, the format of :class:`GenDecl`.
    """
    idx = {x: i for i, x in enumerate(names)}
    br: dict = {}
    for (x, y), out in brackets.items():
        if x not in idx or y not in idx:
            raise ModelError(f"bracket [{x},{y}] uses an unknown vector")
        if x == y:
            if any(Scalar.coerce(c) for c in out.values()):
                raise ModelError(f"[{x},{x}] must vanish")
            continue
        vec = {z: Scalar.coerce(c) for z, c in out.items()}
        for z in vec:
            if z not in idx:
                raise ModelError(f"bracket [{x},{y}] produces unknown vector {z}")
        i, j = idx[x], idx[y]
        if (j, i) in br:
            other = br[(j, i)]
            if any(other.get(z, ZERO) != -vec.get(z, ZERO) for z in set(other) | set(vec)):
                raise ModelError(f"brackets [{x},{y}] and [{y},{x}] are not antisymmetric")
            continue
        br[(i, j)] = vec
        br[(j, i)] = {z: -c for z, c in vec.items()}
    if complex_parallelizable:
        for (i, j), vec in br.items():
            for z, c in vec.items():
                if c and any(nm.startswith("c") and nm[1:] in idx for nm in (names[i], names[j], z)):
                    raise ModelError(
                        f"[{names[i]},{names[j]}] involves a conjugate direction; a (1,0)-form's "
                        "differential must be of type (2,0) in a complex parallelizable model")

    def bracket(i, j):
        return br.get((i, j), {})

    # Jacobi
    n = len(names)
    for a, b, c in combinations(range(n), 3):
        tot: dict = {}
        for (x, y, z) in ((a, b, c), (b, c, a), (c, a, b)):
            for w, cw in bracket(x, y).items():
                for u, cu in bracket(idx[w], z).items():
                    tot[u] = tot.get(u, ZERO) + cw * cu
        if any(v for v in tot.values()):
            raise ModelError(f"Jacobi identity fails on ({names[a]}, {names[b]}, {names[c]})")
    out = {x: [] for x in names}
    for (i, j), vec in br.items():
        if i < j:
            for z, c in vec.items():
                if c:
                    out[z].append((-c, (names[i], names[j])))
    return out


# ---------------------------------------------------------------------------
# bicomplexes
# ---------------------------------------------------------------------------

class Bicomplex:
    """Finite first-quadrant bicomplex with ``del10: (p,q)->(p+1,q)`` and ``del01: (p,q)->(p,q+1)``.

    ``basis[(p, q)]`` lists opaque basis labels (TwistedElements for model-built
    bicomplexes).  ``model`` is set when labels can be multiplied.
    """

    def __init__(self, basis: Mapping, d10: Mapping, d01: Mapping, model: ModelSpec | None = None,
                 name: str = "", top: int | None = None, verify: bool = True):
        cells = [c for c in basis]
        self.P = max([p for p, _ in cells], default=-1)
        self.Q = max([q for _, q in cells], default=-1)
        self.basis = {(p, q): tuple(basis.get((p, q), ()))
                      for p in range(self.P + 1) for q in range(self.Q + 1)}
        self.model = model
        self.name = name
        self.d10 = {}
        self.d01 = {}
        for p in range(self.P + 1):
            for q in range(self.Q + 1):
                src = self.dim(p, q)
                m = d10.get((p, q))
                self.d10[(p, q)] = m if m is not None else Matrix.zeros(self.dim(p + 1, q), src)
                m = d01.get((p, q))
                self.d01[(p, q)] = m if m is not None else Matrix.zeros(self.dim(p, q + 1), src)
                if self.d10[(p, q)].shape != (self.dim(p + 1, q), src):
                    raise ValueError(f"del10 at {(p, q)} has shape {self.d10[(p, q)].shape}")
                if self.d01[(p, q)].shape != (self.dim(p, q + 1), src):
                    raise ValueError(f"del01 at {(p, q)} has shape {self.d01[(p, q)].shape}")
        self.index = {}
        for cell, labels in self.basis.items():
            for i, lab in enumerate(labels):
                self.index[lab] = (cell, i)
        self.top = top if top is not None else (self.P + self.Q)
        if verify:
            self.verify()

    def dim(self, p: int, q: int) -> int:
        return len(self.basis.get((p, q), ()))

    @property
    def dims(self) -> dict:
        return {c: len(b) for c, b in self.basis.items()}

    def cells(self):
        return list(self.basis)

    def verify(self):
        """Exact check of the bidifferential axioms."""
        for (p, q) in self.basis:
            if not self.dim(p, q):
                continue
            a = self.d10[(p, q)]
            b = self.d01[(p, q)]
            if p + 2 <= self.P and not (self.d10[(p + 1, q)] @ a).is_zero():
                raise BBAError(f"del^2 != 0 at {(p, q)}")
            if q + 2 <= self.Q and not (self.d01[(p, q + 1)] @ b).is_zero():
                raise BBAError(f"delbar^2 != 0 at {(p, q)}")
            if p + 1 <= self.P and q + 1 <= self.Q:
                x = self.d01[(p + 1, q)] @ a
                y = self.d10[(p, q + 1)] @ b
                if not (x + y).is_zero():
                    raise BBAError(f"del delbar + delbar del != 0 at {(p, q)}")

    def element_name(self, lab) -> str:
        if self.model is not None and isinstance(lab, TwistedElement):
            return self.model.element_name(lab)
        return str(lab)

    def restrict(self, labels: Iterable, name: str = "") -> "Bicomplex":
        """Sub-bicomplex spanned by a subset of basis labels (must be closed)."""
        keep = set(labels)
        basis = {c: [l for l in b if l in keep] for c, b in self.basis.items()}
        d10, d01 = {}, {}
        for (p, q), labs in basis.items():
            for tgt, src, store, cell in ((self.d10, (p, q), d10, (p + 1, q)),
                                          (self.d01, (p, q), d01, (p, q + 1))):
                full = tgt[(p, q)]
                rows_keep = [i for i, l in enumerate(self.basis.get(cell, ())) if l in keep]
                cols_keep = [i for i, l in enumerate(self.basis[(p, q)]) if l in keep]
                rows_drop = [i for i, l in enumerate(self.basis.get(cell, ())) if l not in keep]
                for j in cols_keep:
                    for i in rows_drop:
                        if full[i, j]:
                            raise ClosureError(f"{self.element_name(self.basis[(p, q)][j])} leaves the "
                                               "selection", self.basis[(p, q)][j], self.basis[cell][i])
                store[(p, q)] = full.submatrix(rows_keep, cols_keep)
        out = Bicomplex({c: b for c, b in basis.items()}, d10, d01, self.model, name or self.name,
                        top=self.top, verify=False)
        return out

    def __repr__(self):
        return f"Bicomplex({self.name!r}, P={self.P}, Q={self.Q}, dim={sum(self.dims.values())})"


def _sort_key(model: ModelSpec, e: TwistedElement):
    return (mask_indices(e.mask), e.prefactor.exps)


def assemble_bicomplex(model: ModelSpec, selection=None, name: str = "") -> Bicomplex:
    """Build the bicomplex spanned by a selection of twisted elements.

    ``selection`` is ``None`` (the full untwisted exterior algebra), a
    predicate on untwisted :class:`TwistedElement` s, or an iterable of
    TwistedElements.  Raises :class:`ClosureError` if the selection is not
    closed under both differentials, :class:`BBAError` on axiom failure.
    """
    triv = model.trivial_char()
    if selection is None:
        elems = [TwistedElement(triv, m) for m in model.all_masks()]
    elif callable(selection):
        elems = [e for e in (TwistedElement(triv, m) for m in model.all_masks()) if selection(e)]
    else:
        elems = list(selection)
    n = model.n
    basis: dict = {(p, q): [] for p in range(n + 1) for q in range(n + 1)}
    seen = set()
    for e in elems:
        if e in seen:
            continue
        seen.add(e)
        basis[model.bidegree(e.mask)].append(e)
    for c in basis:
        basis[c].sort(key=lambda e: _sort_key(model, e))
    index = {}
    for c, labs in basis.items():
        for i, e in enumerate(labs):
            index[e] = i
    d10, d01 = {}, {}
    for (p, q), labs in basis.items():
        m10 = Matrix.zeros(len(basis.get((p + 1, q), ())), len(labs))
        m01 = Matrix.zeros(len(basis.get((p, q + 1), ())), len(labs))
        for j, e in enumerate(labs):
            a, b = model.d_element(e)
            for tgt, mat in ((a, m10), (b, m01)):
                for t, c in tgt.items():
                    i = index.get(t)
                    if i is None:
                        raise ClosureError(
                            f"selection not closed: d({model.element_name(e)}) has term "
                            f"{c}*{model.element_name(t)} outside the selection", e, t)
                    mat.rows[i][j] = c
        d10[(p, q)] = m10
        d01[(p, q)] = m01
    return Bicomplex(basis, d10, d01, model, name or model.name, top=2 * n)


# ---------------------------------------------------------------------------
# single complexes
# ---------------------------------------------------------------------------

class Complex:
    """Cochain complex ``C^0 -> ... -> C^top`` with optional basis labels and products.

    ``d[k]`` is the ``dims[k+1] x dims[k]`` matrix (``d[top]`` maps to zero).
    ``multiply(a, b)`` returns ``(Scalar, label)`` or ``None`` for basis labels.
    ``cells[k]`` lists ``(p, q, start, stop)`` for totalized bicomplexes.
    """

    def __init__(self, dims: Sequence[int], d: Sequence[Matrix], labels=None, multiply=None,
                 cells=None, top: int | None = None, name: str = ""):
        self.dims = list(dims)
        self.top = top if top is not None else len(self.dims) - 1
        while len(self.dims) < self.top + 1:
            self.dims.append(0)
        self.d = []
        for k in range(self.top + 1):
            tgt = self.dims[k + 1] if k + 1 <= self.top else 0
            m = d[k] if k < len(d) and d[k] is not None else Matrix.zeros(tgt, self.dims[k])
            if m.shape != (tgt, self.dims[k]):
                raise ValueError(f"d[{k}] has shape {m.shape}, expected {(tgt, self.dims[k])}")
            self.d.append(m)
        self.labels = labels
        self.multiply = multiply
        self.cells = cells
        self.name = name
        if labels is not None:
            self.index = [{l: i for i, l in enumerate(ls)} for ls in labels]

    def dmat(self, k: int) -> Matrix:
        """``d: C^k -> C^{k+1}``; zero maps outside the range."""
        if 0 <= k <= self.top:
            return self.d[k]
        src = self.dims[k] if 0 <= k <= self.top else 0
        tgt = self.dims[k + 1] if 0 <= k + 1 <= self.top else 0
        return Matrix.zeros(tgt, src)

    def dim(self, k: int) -> int:
        return self.dims[k] if 0 <= k <= self.top else 0

    def verify(self):
        for k in range(self.top):
            if not (self.dmat(k + 1) @ self.dmat(k)).is_zero():
                raise BBAError(f"d^2 != 0 in degree {k}")

    def product(self, i: int, x: Sequence, j: int, y: Sequence) -> tuple:
        """Product of vectors in degrees ``i`` and ``j`` (raises if not closed)."""
        if self.multiply is None:
            raise TypeError("complex has no product structure")
        out = [ZERO] * self.dim(i + j)
        idx = self.index[i + j] if i + j <= self.top else {}
        for a, xa in enumerate(x):
            if not xa:
                continue
            for b, yb in enumerate(y):
                if not yb:
                    continue
                r = self.multiply(self.labels[i][a], self.labels[j][b])
                if r is None:
                    continue
                s, lab = r
                t = idx.get(lab)
                if t is None:
                    raise ClosureError(f"product leaves the complex: {lab}", lab)
                out[t] = out[t] + xa * yb * s
        return tuple(out)

    def __repr__(self):
        return f"Complex({self.name!r}, dims={self.dims})"


def tot(b: Bicomplex) -> Complex:
    """Total complex with ``Tot^k = (+)_{p+q=k} A^{p,q}`` ordered by ``p`` and ``d = del10 + del01``."""
    top = b.top
    dims, labels, cells, offsets = [], [], [], []
    for k in range(top + 1):
        off = {}
        cl = []
        labs = []
        pos = 0
        for p in range(0, k + 1):
            q = k - p
            n = b.dim(p, q)
            if n:
                off[(p, q)] = pos
                cl.append((p, q, pos, pos + n))
                labs.extend(b.basis[(p, q)])
                pos += n
        dims.append(pos)
        labels.append(labs)
        cells.append(cl)
        offsets.append(off)
    ds = []
    for k in range(top + 1):
        tgt = dims[k + 1] if k < top else 0
        m = Matrix.zeros(tgt, dims[k])
        if k < top:
            for (p, q, s0, s1) in cells[k]:
                for mat, cell in ((b.d10[(p, q)], (p + 1, q)), (b.d01[(p, q)], (p, q + 1))):
                    if cell not in offsets[k + 1]:
                        continue
                    r0 = offsets[k + 1][cell]
                    for i, row in enumerate(mat.rows):
                        tr = m.rows[r0 + i]
                        for j, x in enumerate(row):
                            if x:
                                tr[s0 + j] = tr[s0 + j] + x
        ds.append(m)
    mult = wedge if b.model is not None else None
    c = Complex(dims, ds, labels, mult, cells, top=top, name=f"Tot {b.name}")
    c.verify()
    return c
