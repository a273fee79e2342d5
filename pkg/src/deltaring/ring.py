"""Finite commutative rings presented over Z/nZ.

A :class:`RingPresentation` is ``Z_n[x_1..x_l]`` modulo one monic univariate
rule ``x_i^{d_i} -> r_i(x_i)`` per variable. Its additive group is free of
rank ``prod(d_i)`` on the reduced monomials. Further quotients go through
:class:`Ideal` / :class:`QuotientRing`, and direct products through
:class:`ProductRing`.

Every ring stores elements as tuples of residues, one per coordinate. A
product ring can mix moduli (``Z_4C_2 x F_3``), so ideals are kept as
submodules of ``(Z/LZ)^k`` with ``L`` the lcm of the coordinate moduli. A
coordinate of modulus ``n_j`` is embedded by the scale ``L/n_j``.
"""

from __future__ import annotations

import math
import os
from contextlib import contextmanager
from dataclasses import dataclass
from functools import cached_property, reduce
from itertools import combinations, product
from typing import Iterator, Optional, Sequence

import numpy as np

from .zmod import CanonicalBasis, check_modulus, howell_array, is_invertible, solve_combination

DEFAULT_CAP = 1 << 20

_FAULTS: set[str] = set()


class PresentationError(ValueError):
    """A ring presentation is malformed."""


class CapExceeded(RuntimeError):
    """An exhaustive scan would exceed the enumeration cap."""

    def __init__(self, size: int, cap: int, what: str = "ring"):
        super().__init__(f"{what} has {size} elements, exceeding the enumeration cap of {cap}")
        self.size = size
        self.cap = cap


class NotAUnit(ArithmeticError):
    pass


class ForeignElement(ValueError):
    """Elements or ideals from different rings were combined."""


def default_cap() -> int:
    env = os.environ.get("DELTARING_CAP")
    return int(env) if env else DEFAULT_CAP


@contextmanager
def injected_fault(name: str = "mul"):
    """Corrupt the multiplication table of every ring built inside the block."""
    _FAULTS.add(name)
    try:
        yield
    finally:
        _FAULTS.discard(name)


def _lcm(values) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


def element_key(coeffs: Sequence[int]) -> tuple:
    """Canonical element order: support size, then support, then values."""
    support = tuple(i for i, c in enumerate(coeffs) if c)
    return (len(support), support, tuple(coeffs[i] for i in support))


@dataclass(frozen=True, eq=True)
class RingElement:
    ring: "FiniteRing"
    coeffs: tuple[int, ...]

    def _coerce(self, other) -> "RingElement":
        if isinstance(other, RingElement):
            if other.ring is not self.ring:
                raise ForeignElement("elements belong to different rings")
            return other
        if isinstance(other, int):
            return self.ring.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.ring.from_coeffs(a + b for a, b in zip(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return self.ring.from_coeffs(-a for a in self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self.ring.from_coeffs(other * a for a in self.coeffs)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RingElement(self.ring, self.ring._mul(self.coeffs, other.coeffs))

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __pow__(self, e: int):
        return power(self, e)

    def __bool__(self):
        return any(self.coeffs)

    def __str__(self):
        return self.ring.format(self.coeffs)

    def __repr__(self):
        return f"<{self} in {self.ring.name}>"


class FiniteRing:
    """Common machinery; subclasses define coordinates and multiplication."""

    commutative = True
    name = "R"
    #: set by constructors that know the ring is local; used as a unit test shortcut
    local_maximal_ideal: Optional["Ideal"] = None

    coord_moduli: tuple[int, ...]
    labels: tuple[str, ...]

    # subclass hooks -------------------------------------------------------
    def _mul(self, a: tuple, b: tuple) -> tuple:
        raise NotImplementedError

    def _reduce(self, v) -> tuple:
        raise NotImplementedError

    def _one(self) -> tuple:
        raise NotImplementedError

    def _coord_ranges(self) -> list[int]:
        """Number of residues a canonical representative can take per coordinate."""
        return list(self.coord_moduli)

    def _floor_rows(self) -> np.ndarray:
        """Embedded rows that are zero in this ring (nonempty only for quotients)."""
        return np.zeros((0, self.dim), dtype=np.int64)

    @property
    def struct(self) -> np.ndarray:
        """Structure tensor ``C[i, j] = b_i * b_j`` in coordinates (unreduced)."""
        raise NotImplementedError

    def format(self, coeffs) -> str:
        raise NotImplementedError

    # shared ---------------------------------------------------------------
    @cached_property
    def dim(self) -> int:
        return len(self.coord_moduli)

    @cached_property
    def modulus(self) -> int:
        return _lcm(self.coord_moduli)

    @cached_property
    def scales(self) -> np.ndarray:
        return np.array([self.modulus // m for m in self.coord_moduli], dtype=np.int64)

    @cached_property
    def size(self) -> int:
        return math.prod(self._coord_ranges())

    def embed(self, v) -> np.ndarray:
        return (np.asarray(v, dtype=np.int64) * self.scales) % self.modulus

    def unembed(self, w) -> tuple[int, ...]:
        return tuple(int(x) for x in np.asarray(w, dtype=np.int64) // self.scales)

    def from_coeffs(self, coeffs) -> RingElement:
        return RingElement(self, self._reduce(tuple(coeffs)))

    def scalar(self, c: int) -> RingElement:
        return self.from_coeffs(c * x for x in self._one())

    @property
    def one(self) -> RingElement:
        return RingElement(self, self._reduce(self._one()))

    @property
    def zero(self) -> RingElement:
        return RingElement(self, self._reduce((0,) * self.dim))

    def coordinate(self, j: int) -> RingElement:
        v = [0] * self.dim
        v[j] = 1
        return self.from_coeffs(v)

    def module_generators(self) -> list[RingElement]:
        """Additive generators ``b_j`` (the coordinate vectors)."""
        return [self.coordinate(j) for j in range(self.dim)]

    def regular_rows(self, a: Sequence[int]) -> np.ndarray:
        """Rows ``a * b_j`` in coordinates, reduced mod the coordinate moduli."""
        M = np.tensordot(np.asarray(a, dtype=np.int64), self.struct, axes=(0, 0))
        return M % np.array(self.coord_moduli, dtype=np.int64)

    def batch_mul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Row-wise products of two (N, dim) coordinate arrays."""
        C = self.struct
        out = np.empty_like(A)
        step = max(1, (1 << 22) // max(1, self.dim * self.dim))
        for s in range(0, A.shape[0], step):
            a, b = A[s:s + step], B[s:s + step]
            t = np.einsum("ni,ijk->njk", a, C)
            out[s:s + step] = np.einsum("njk,nj->nk", t, b)
        return self._batch_reduce(out)

    def _batch_reduce(self, V: np.ndarray) -> np.ndarray:
        return V % np.array(self.coord_moduli, dtype=np.int64)

    def elements(self, cap: Optional[int] = None, reverse: bool = False) -> Iterator[RingElement]:
        """All elements in canonical element order, each exactly once."""
        for v in self.element_tuples(cap, reverse):
            yield RingElement(self, v)

    def element_tuples(self, cap: Optional[int] = None, reverse: bool = False) -> Iterator[tuple]:
        cap = default_cap() if cap is None else cap
        if self.size > cap:
            raise CapExceeded(self.size, cap)
        ranges = self._coord_ranges()
        free = [j for j, r in enumerate(ranges) if r > 1]
        sizes = range(len(free), -1, -1) if reverse else range(len(free) + 1)
        for s in sizes:
            supports = combinations(free, s)
            if reverse:
                supports = reversed(list(supports))
            for support in supports:
                vals = product(*[range(1, ranges[j]) for j in support])
                if reverse:
                    vals = reversed(list(vals))
                for values in vals:
                    v = [0] * self.dim
                    for j, x in zip(support, values):
                        v[j] = x
                    yield tuple(v)

    def element_array(self, cap: Optional[int] = None) -> np.ndarray:
        cap = default_cap() if cap is None else cap
        if self.size > cap:
            raise CapExceeded(self.size, cap)
        grids = np.indices(self._coord_ranges()).reshape(self.dim, -1).T
        return grids.astype(np.int64)

    def gens(self) -> dict[str, RingElement]:
        return {}

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}, {self.size} elements>"


def _poly_coeffs(reduction, name: str, degree: int) -> tuple[int, ...]:
    if isinstance(reduction, int):
        coeffs = [reduction]
    elif isinstance(reduction, str):
        from .dsl import SpecError, parse_polynomial

        try:
            poly = parse_polynomial(reduction, [name])
        except SpecError as exc:
            raise PresentationError(f"reduction for {name}: {exc.message}") from None
        coeffs = [0] * (max((e[0] for e in poly), default=0) + 1)
        for (e,), c in poly.items():
            coeffs[e] += c
    else:
        coeffs = [int(c) for c in reduction]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) > degree:
        raise PresentationError(f"reduction for {name}^{degree} has degree {len(coeffs) - 1} >= {degree}")
    return tuple(coeffs) + (0,) * (degree - len(coeffs))


def _format_term(c: int, mono: str) -> str:
    if not mono:
        return str(c)
    return mono if c == 1 else f"{c}*{mono}"


class RingPresentation(FiniteRing):
    """``Z_n[x_1..x_l]`` modulo ``x_i^{d_i} = r_i(x_i)``, with the reduced monomial basis."""

    def __init__(self, n: int, rules: Sequence[tuple] = (), name: Optional[str] = None):
        self.n = check_modulus(n)
        names = [r[0] for r in rules]
        if len(set(names)) != len(names):
            raise PresentationError(f"duplicate variable in {names}")
        self.variables: tuple[tuple[str, int, tuple[int, ...]], ...] = ()
        vs = []
        for name_, degree, reduction in rules:
            if not str(name_).isidentifier():
                raise PresentationError(f"bad variable name {name_!r}")
            degree = int(degree)
            if degree < 1:
                raise PresentationError(f"degree of {name_} must be >= 1")
            red = tuple(c % self.n for c in _poly_coeffs(reduction, name_, degree))
            vs.append((name_, degree, red))
        self.variables = tuple(vs)
        degrees = [d for _, d, _ in self.variables]
        monos = list(product(*[range(d) for d in degrees]))
        monos.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
        self.monomials: tuple[tuple[int, ...], ...] = tuple(monos)
        self._index = {m: i for i, m in enumerate(self.monomials)}
        self.coord_moduli = (self.n,) * len(self.monomials)
        self.labels = tuple(self._mono_text(m) for m in self.monomials)
        self.name = name or self._default_name()
        self._table = self._build_table()

    def _mono_text(self, exps) -> str:
        parts = []
        for (v, _, _), e in zip(self.variables, exps):
            if e == 1:
                parts.append(v)
            elif e > 1:
                parts.append(f"{v}^{e}")
        return "*".join(parts)

    def _default_name(self) -> str:
        if not self.variables:
            return f"Z{self.n}"
        rels = []
        for v, d, red in self.variables:
            rhs = " + ".join(_format_term(c, self._mono_text(tuple(e if w == v else 0 for w, _, _ in self.variables)))
                             for e, c in enumerate(red) if c)
            rels.append(f"{v}^{d}" + (f"-({rhs})" if rhs else ""))
        return f"Z{self.n}[{','.join(v for v, _, _ in self.variables)}]/({', '.join(rels)})"

    def _powers(self) -> list[list[list[int]]]:
        n = self.n
        out = []
        for _, d, red in self.variables:
            pw = [[1] + [0] * (d - 1)]
            for _ in range(2 * d - 2):
                prev = pw[-1]
                nxt = [0] + prev[:-1]
                top = prev[-1]
                if top:
                    nxt = [(a + top * r) % n for a, r in zip(nxt, red)]
                pw.append(nxt)
            out.append(pw)
        return out

    def _build_table(self):
        n, k = self.n, len(self.monomials)
        pw = self._powers()
        table = []
        C = np.zeros((k, k, k), dtype=np.int64)
        for i, m1 in enumerate(self.monomials):
            row = []
            for j, m2 in enumerate(self.monomials):
                terms = {(): 1}
                for vi, (a, b) in enumerate(zip(m1, m2)):
                    uni = pw[vi][a + b]
                    terms = {ex + (e,): c * u % n for ex, c in terms.items() for e, u in enumerate(uni) if u}
                entry = [(self._index[ex], c) for ex, c in terms.items() if c % n]
                if "mul" in _FAULTS and i == j == 1:
                    entry = entry + [(0, 1)]
                for kk, c in entry:
                    C[i, j, kk] += c
                row.append(entry)
            table.append(row)
        self._struct = C % n
        return table

    @property
    def struct(self) -> np.ndarray:
        return self._struct

    def _mul(self, a, b):
        n = self.n
        out = [0] * len(a)
        table = self._table
        bnz = [(j, y) for j, y in enumerate(b) if y]
        for i, x in enumerate(a):
            if x:
                row = table[i]
                for j, y in bnz:
                    xy = x * y
                    for kk, c in row[j]:
                        out[kk] += xy * c
        return tuple(v % n for v in out)

    def _reduce(self, v):
        if len(v) != self.dim:
            raise ForeignElement(f"coefficient vector of length {len(v)} for a ring of dimension {self.dim}")
        return tuple(int(x) % self.n for x in v)

    def _one(self):
        return (1,) + (0,) * (self.dim - 1)

    def format(self, coeffs) -> str:
        terms = [_format_term(c, self.labels[i]) for i, c in enumerate(coeffs) if c]
        return " + ".join(terms) if terms else "0"

    def gens(self) -> dict[str, RingElement]:
        out = {}
        for vi, (v, d, _) in enumerate(self.variables):
            exps = tuple(1 if i == vi else 0 for i in range(len(self.variables)))
            if d == 1:
                out[v] = self.from_coeffs(self._reduce_exps_dict({exps: 1}))
            else:
                out[v] = self.coordinate(self._index[exps])
        return out

    def _reduce_exps_dict(self, poly: dict) -> tuple:
        """Coordinates of an arbitrary polynomial {exponents: coeff}."""
        acc = self.zero
        for exps, c in poly.items():
            term = self.scalar(c)
            for vi, e in enumerate(exps):
                if e:
                    term = term * power(self._var(vi), e)
            acc = acc + term
        return acc.coeffs

    def _var(self, vi: int) -> RingElement:
        v, d, red = self.variables[vi]
        exps = tuple(1 if i == vi else 0 for i in range(len(self.variables)))
        if d > 1:
            return self.coordinate(self._index[exps])
        return self.scalar(red[0])

    def polynomial(self, poly: dict) -> RingElement:
        """Element from a sparse polynomial ``{exponent tuple: coefficient}``."""
        return self.from_coeffs(self._reduce_exps_dict(poly))

    def parse(self, text: str) -> RingElement:
        from .dsl import parse_polynomial

        return self.polynomial(parse_polynomial(text, [v for v, _, _ in self.variables]))


def make_ring(n: int, rules: Sequence[tuple] = (), name: Optional[str] = None) -> RingPresentation:
    """Build ``Z_n[x..]/(x^d - r(x), ...)`` from ``(name, degree, reduction)`` rules.

    ``reduction`` is what ``name^degree`` rewrites to: an int, a coefficient
    sequence (constant term first) or a polynomial string in ``name``.
    """
    return RingPresentation(n, rules, name)


class Ideal:
    """An ideal, stored as the Howell basis of its preimage in coordinate space.

    For a quotient ring the preimage contains the quotient's own defining
    ideal, so ideal equality is basis equality in every case.
    """

    __slots__ = ("ring", "basis")

    def __init__(self, ring: FiniteRing, basis: CanonicalBasis):
        self.ring = ring
        self.basis = basis

    @classmethod
    def from_rows(cls, ring: FiniteRing, rows) -> "Ideal":
        """Ideal whose additive span is given; raises if it is not closed under multiplication."""
        rows = [ring.embed(ring._reduce(tuple(r))) for r in rows]
        ideal = _ideal_from_embedded(ring, rows)
        ideal.verify_closed()
        return ideal

    def verify_closed(self) -> None:
        ring = self.ring
        for w in self.basis.rows:
            a = ring.unembed(w)
            for r in ring.regular_rows(a):
                if not self.basis.contains(ring.embed(r)):
                    raise ValueError("span is not closed under ring multiplication")

    def __eq__(self, other):
        return isinstance(other, Ideal) and other.ring is self.ring and other.basis == self.basis

    def __hash__(self):
        return hash((id(self.ring), self.basis))

    def __le__(self, other: "Ideal") -> bool:
        return self.basis.is_subset_of(other.basis)

    def __lt__(self, other: "Ideal") -> bool:
        return self <= other and self.size < other.size

    @property
    def size(self) -> int:
        return self.basis.span_size // _floor_size(self.ring)

    def contains(self, a) -> bool:
        coeffs = a.coeffs if isinstance(a, RingElement) else tuple(a)
        return self.basis.contains(self.ring.embed(coeffs))

    __contains__ = contains

    def rows(self) -> list[RingElement]:
        """Module generators of the ideal as ring elements."""
        out = []
        for w in self.basis.rows:
            e = self.ring.from_coeffs(self.ring.unembed(w))
            if e and e not in out:
                out.append(e)
        return out

    def elements(self) -> Iterator[RingElement]:
        seen = set()
        for w in self.basis.elements():
            e = self.ring.from_coeffs(self.ring.unembed(w))
            if e.coeffs not in seen:
                seen.add(e.coeffs)
                yield e

    def is_zero(self) -> bool:
        return self.size == 1

    def is_unit_ideal(self) -> bool:
        return self.size == self.ring.size

    def __repr__(self):
        return f"<Ideal of size {self.size} in {self.ring.name}>"


def _floor_size(ring: FiniteRing) -> int:
    rows = ring._floor_rows()
    if rows.shape[0] == 0:
        return 1
    return CanonicalBasis(ring.modulus, tuple(tuple(int(x) for x in r) for r in rows), ring.dim).span_size


def _ideal_from_embedded(ring: FiniteRing, rows) -> Ideal:
    parts = [ring._floor_rows()] + [np.asarray(r, dtype=np.int64).reshape(-1, ring.dim) for r in rows]
    A = np.concatenate(parts, axis=0) % ring.modulus
    H = howell_array(A, ring.modulus)
    return Ideal(ring, CanonicalBasis(ring.modulus, tuple(tuple(int(x) for x in r) for r in H), ring.dim))


def _check_same(ring: FiniteRing, elems) -> list[RingElement]:
    out = []
    for g in elems:
        if isinstance(g, int):
            g = ring.scalar(g)
        if g.ring is not ring:
            raise ForeignElement(f"{g} does not belong to {ring.name}")
        out.append(g)
    return out


def ideal_closure(ring: FiniteRing, generators: Sequence) -> Ideal:
    """Smallest ideal containing the generators: the span of all ``g * b_j``."""
    gens = _check_same(ring, generators)
    rows = [ring.embed(ring.regular_rows(g.coeffs)) for g in gens]
    return _ideal_from_embedded(ring, rows)


def extend_ideal(ideal: Ideal, a: Sequence[int]) -> Ideal:
    """Closure of ``ideal + (a)``, for coordinate tuple ``a``."""
    ring = ideal.ring
    rows = np.concatenate([ideal.basis.array().reshape(-1, ring.dim), ring.embed(ring.regular_rows(a))])
    H = howell_array(rows % ring.modulus, ring.modulus)
    return Ideal(ring, CanonicalBasis(ring.modulus, tuple(tuple(int(x) for x in r) for r in H), ring.dim))


def zero_ideal(ring: FiniteRing) -> Ideal:
    return _ideal_from_embedded(ring, [])


def unit_ideal(ring: FiniteRing) -> Ideal:
    return ideal_closure(ring, [ring.one])


class QuotientRing(FiniteRing):
    """``parent / ideal`` with canonical coset representatives from the Howell basis."""

    def __init__(self, parent: FiniteRing, ideal: Ideal, name: Optional[str] = None):
        if ideal.ring is not parent:
            raise ForeignElement("ideal does not belong to the parent ring")
        self.parent = parent
        self.ideal = ideal
        self.coord_moduli = parent.coord_moduli
        self.labels = parent.labels
        self.name = name or f"{parent.name} % <ideal of size {ideal.size}>"
        self._rows = ideal.basis.array().reshape(-1, parent.dim)
        self._pivots = ideal.basis.pivots

    def _floor_rows(self):
        return self._rows

    @property
    def struct(self):
        return self.parent.struct

    def _coord_ranges(self):
        ranges = list(self.coord_moduli)
        scales = self.scales
        for row, c in zip(self.ideal.basis.rows, self._pivots):
            ranges[c] = row[c] // int(scales[c])
        return ranges

    def _reduce(self, v):
        w = self.parent.embed(self.parent._reduce(v))
        return self.parent.unembed(self.ideal.basis.reduce(w))

    def _batch_reduce(self, V):
        P = self.parent
        E = (P._batch_reduce(V) * P.scales) % P.modulus
        R = self.ideal.basis.reduce_many(E)
        return R // P.scales

    def _mul(self, a, b):
        return self._reduce(self.parent._mul(a, b))

    def _one(self):
        return self.parent._one()

    def format(self, coeffs):
        return self.parent.format(coeffs)

    def gens(self):
        return {k: RingElement(self, self._reduce(v.coeffs)) for k, v in self.parent.gens().items()}

    def lift(self, a: RingElement) -> RingElement:
        return RingElement(self.parent, a.coeffs)

    def parse(self, text: str) -> RingElement:
        return self.image(self.parent.parse(text))

    def image(self, a: RingElement) -> RingElement:
        return normal_form(self, a)


def quotient_ring(ring: FiniteRing, ideal: Ideal, name: Optional[str] = None) -> QuotientRing:
    """``ring / ideal``; quotients of quotients are flattened onto the original parent."""
    if ideal.ring is not ring:
        raise ForeignElement("ideal does not belong to this ring")
    if isinstance(ring, QuotientRing):
        lifted = Ideal(ring.parent, ideal.basis)
        return QuotientRing(ring.parent, lifted, name)
    return QuotientRing(ring, ideal, name)


def normal_form(q: QuotientRing, a: RingElement) -> RingElement:
    """Canonical representative in ``q`` of a parent element."""
    if a.ring is not q.parent and a.ring is not q:
        raise ForeignElement(f"{a} is not an element of {q.parent.name}")
    return RingElement(q, q._reduce(a.coeffs))


class ProductRing(FiniteRing):
    """Direct product with componentwise arithmetic."""

    def __init__(self, factors: Sequence[FiniteRing], name: Optional[str] = None):
        if not factors:
            raise PresentationError("a product needs at least one factor")
        self.factors = tuple(factors)
        self.offsets = []
        off = 0
        for f in self.factors:
            self.offsets.append((off, off + f.dim))
            off += f.dim
        self.coord_moduli = tuple(m for f in self.factors for m in f.coord_moduli)
        self.labels = tuple(lbl for f in self.factors for lbl in f.labels)
        self.name = name or " x ".join(f"({f.name})" for f in self.factors)

    def split(self, v) -> list[tuple]:
        return [tuple(v[a:b]) for a, b in self.offsets]

    def _mul(self, a, b):
        out = ()
        for f, x, y in zip(self.factors, self.split(a), self.split(b)):
            out += f._mul(x, y)
        return out

    def _reduce(self, v):
        if len(v) != self.dim:
            raise ForeignElement(f"coefficient vector of length {len(v)} for a ring of dimension {self.dim}")
        out = ()
        for f, x in zip(self.factors, self.split(v)):
            out += f._reduce(x)
        return out

    def _batch_reduce(self, V):
        return np.concatenate([f._batch_reduce(V[:, a:b]) for f, (a, b) in zip(self.factors, self.offsets)], axis=1)

    def _one(self):
        return tuple(x for f in self.factors for x in f._one())

    def _coord_ranges(self):
        return [r for f in self.factors for r in f._coord_ranges()]

    def _floor_rows(self):
        rows = []
        for f, (a, b) in zip(self.factors, self.offsets):
            fr = f._floor_rows()
            if fr.shape[0]:
                # factor-embedded rows use the factor's modulus; rescale into ours
                scale = self.modulus // f.modulus
                block = np.zeros((fr.shape[0], self.dim), dtype=np.int64)
                block[:, a:b] = fr * scale
                rows.append(block)
        if not rows:
            return np.zeros((0, self.dim), dtype=np.int64)
        return np.concatenate(rows) % self.modulus

    @cached_property
    def struct(self):
        C = np.zeros((self.dim,) * 3, dtype=np.int64)
        for f, (a, b) in zip(self.factors, self.offsets):
            C[a:b, a:b, a:b] = f.struct
        return C

    def format(self, coeffs):
        return "(" + ", ".join(f.format(x) for f, x in zip(self.factors, self.split(coeffs))) + ")"

    def inject(self, i: int, a: RingElement) -> RingElement:
        """Element that is ``a`` in factor ``i`` and zero elsewhere."""
        v = [0] * self.dim
        lo, hi = self.offsets[i]
        v[lo:hi] = a.coeffs
        return self.from_coeffs(v)

    def component(self, a: RingElement, i: int) -> RingElement:
        lo, hi = self.offsets[i]
        return RingElement(self.factors[i], tuple(a.coeffs[lo:hi]))


def product_ring(*factors: FiniteRing, name: Optional[str] = None) -> ProductRing:
    return ProductRing(factors, name)


# element operations -------------------------------------------------------

def mul(a: RingElement, b: RingElement) -> RingElement:
    if a.ring is not b.ring:
        raise ForeignElement("cannot multiply elements of different rings")
    return a * b


def add(a: RingElement, b: RingElement) -> RingElement:
    if a.ring is not b.ring:
        raise ForeignElement("cannot add elements of different rings")
    return a + b


def power(a: RingElement, e: int) -> RingElement:
    """``a**e`` by repeated squaring; ``a**0`` is 1."""
    if e < 0:
        return power(inverse(a), -e)
    ring = a.ring
    result = ring._one()
    result = ring._reduce(result)
    base = a.coeffs
    while e:
        if e & 1:
            result = ring._mul(result, base)
        e >>= 1
        if e:
            base = ring._mul(base, base)
    return RingElement(ring, result)


pow_ = power


def characteristic(ring: FiniteRing) -> int:
    """Additive order of 1."""
    one = ring._one()
    L = ring.modulus
    for c in range(1, L + 1):
        if L % c == 0 and not any(ring._reduce(tuple(c * x for x in one))):
            return c
    return L


def enumerate_elements(ring: FiniteRing, cap: Optional[int] = None) -> Iterator[RingElement]:
    return ring.elements(cap)


def is_unit(a: RingElement) -> bool:
    """Invertibility via the regular representation of ``a``."""
    ring = a.ring
    if isinstance(ring, RingPresentation):
        return is_invertible(ring.regular_rows(a.coeffs), ring.n)
    if isinstance(ring, ProductRing):
        return all(is_unit(ring.component(a, i)) for i in range(len(ring.factors)))
    return ideal_closure(ring, [a]).is_unit_ideal()


def inverse(a: RingElement) -> RingElement:
    """The unique ``b`` with ``a * b == 1``; raises :class:`NotAUnit` otherwise."""
    ring = a.ring
    rows = ring.embed(ring.regular_rows(a.coeffs))
    x = solve_combination(rows, ring.embed(ring._one()), ring.modulus, ring._floor_rows())
    if x is None:
        raise NotAUnit(f"{a} is not a unit of {ring.name}")
    return ring.from_coeffs(x)


def idempotents(ring: FiniteRing, cap: Optional[int] = None) -> list[RingElement]:
    E = ring.element_array(cap)
    sq = ring.batch_mul(E, E)
    hits = E[(sq == E).all(axis=1)]
    out = [RingElement(ring, tuple(int(x) for x in r)) for r in hits]
    return sorted(out, key=lambda e: element_key(e.coeffs))


def composition_length_bound(ring: FiniteRing) -> int:
    """Upper bound on the nilpotency index: number of prime factors of |R|."""
    n, count = ring.size, 0
    p = 2
    while n > 1:
        while n % p == 0:
            n //= p
            count += 1
        p += 1
    return max(count, 1)


def nilpotent_mask(ring: FiniteRing, E: np.ndarray) -> np.ndarray:
    bound = composition_length_bound(ring)
    P = E.copy()
    e = 1
    while e < bound:
        P = ring.batch_mul(P, P)
        e *= 2
    return ~P.any(axis=1)


def nilpotents(ring: FiniteRing, cap: Optional[int] = None) -> Ideal:
    """The nilradical, checked to be an ideal before it is returned."""
    E = ring.element_array(cap)
    mask = nilpotent_mask(ring, E)
    count = int(mask.sum())
    nil = E[mask]
    embedded = (nil * ring.scales) % ring.modulus
    ideal = _ideal_from_embedded(ring, [embedded])
    ideal = _ideal_from_embedded(ring, [ring.embed(ring.regular_rows(ring.unembed(w))) for w in ideal.basis.rows])
    if ideal.size != count:
        raise RuntimeError(f"nilpotent set of size {count} is not an ideal (closure has {ideal.size})")
    return ideal


def minimal_generators(ideal: Ideal, limit: int = 1 << 16) -> list[RingElement]:
    """Irredundant ideal generators picked greedily in canonical element order."""
    ring = ideal.ring
    target = ideal.basis
    chosen: list[RingElement] = []
    current = zero_ideal(ring)
    if current.basis == target:
        return []
    candidates = sorted((e for e in _ideal_candidates(ideal, limit)), key=lambda e: element_key(e.coeffs))
    for e in candidates:
        if current.contains(e):
            continue
        chosen.append(e)
        current = extend_ideal(current, e.coeffs)
        if current.basis == target:
            break
    i = 0
    while i < len(chosen):
        rest = chosen[:i] + chosen[i + 1:]
        if ideal_closure(ring, rest).basis == target:
            chosen = rest
        else:
            i += 1
    return chosen


def _ideal_candidates(ideal: Ideal, limit: int):
    if ideal.size <= limit:
        return list(ideal.elements())
    return ideal.rows()
