"""Path algebras kQ of finite acyclic quivers over small finite fields."""

from __future__ import annotations

import re
from dataclasses import dataclass
from graphlib import CycleError, TopologicalSorter
from itertools import combinations, combinations_with_replacement, permutations
from typing import Iterator, Optional, Sequence

import numpy as np

from .ring import CapExceeded, default_cap, element_key
from .units import is_prime


class QuiverError(ValueError):
    pass


class CyclicQuiver(QuiverError):
    def __init__(self, cycle: Sequence[int]):
        self.cycle = tuple(cycle)
        super().__init__("quiver has a directed cycle: " + " -> ".join(map(str, cycle)))


class QuiverParseError(QuiverError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


# finite fields as lookup tables -------------------------------------------------

class GF:
    """GF(q) with elements ``0..q-1``; for q = p^m the digits base p are polynomial coefficients in g."""

    _cache: dict[int, "GF"] = {}

    def __new__(cls, q: int):
        if q in cls._cache:
            return cls._cache[q]
        self = super().__new__(cls)
        self._build(q)
        cls._cache[q] = self
        return self

    def _build(self, q: int):
        from .dsl import prime_power
        from .families import conway_like_reduction

        pm = prime_power(q)
        if pm is None:
            raise ValueError(f"{q} is not a prime power")
        p, m = pm
        self.q, self.p, self.m = q, p, m
        digits = [[(v // p ** i) % p for i in range(m)] for v in range(q)]

        def encode(ds):
            return sum(d * p ** i for i, d in enumerate(ds))

        add = np.zeros((q, q), dtype=np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        red = conway_like_reduction(p, m) if m > 1 else (0,)
        for a in range(q):
            for b in range(q):
                add[a, b] = encode([(x + y) % p for x, y in zip(digits[a], digits[b])])
                prod = [0] * (2 * m - 1)
                for i, x in enumerate(digits[a]):
                    for j, y in enumerate(digits[b]):
                        prod[i + j] += x * y
                for d in range(2 * m - 2, m - 1, -1):
                    c = prod[d] % p
                    prod[d] = 0
                    if c:
                        for i, r in enumerate(red):
                            prod[d - m + i] += c * r
                mul[a, b] = encode([c % p for c in prod[:m]])
        self.add, self.mul = add, mul
        self.neg = np.array([int(np.flatnonzero(add[a] == 0)[0]) for a in range(q)], dtype=np.int64)
        self.inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            self.inv[a] = int(np.flatnonzero(mul[a] == 1)[0])
        self.is_prime_field = m == 1

    def format(self, c: int) -> str:
        if self.m == 1:
            return str(c)
        terms = []
        for i in range(self.m - 1, -1, -1):
            d = (c // self.p ** i) % self.p
            if not d:
                continue
            mono = "" if i == 0 else ("g" if i == 1 else f"g^{i}")
            terms.append(str(d) if not mono else (mono if d == 1 else f"{d}*{mono}"))
        return " + ".join(terms) if terms else "0"

    def __repr__(self):
        return f"GF({self.q})"


# quivers ------------------------------------------------------------------------

@dataclass(frozen=True)
class Quiver:
    vertices: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.vertices < 1:
            raise QuiverError("a quiver needs at least one vertex")
        for s, t in self.edges:
            if not (0 <= s < self.vertices and 0 <= t < self.vertices):
                raise QuiverError(f"edge {s}->{t} uses a vertex outside 0..{self.vertices - 1}")
        ts = TopologicalSorter({v: [] for v in range(self.vertices)})
        for s, t in self.edges:
            ts.add(t, s)
        try:
            ts.prepare()
        except CycleError as exc:
            raise CyclicQuiver(exc.args[1]) from None

    def __str__(self):
        return f"{self.vertices}; " + " ".join(f"{s}->{t}" for s, t in self.edges)

    @property
    def is_trivial(self) -> bool:
        return not self.edges


def parse_quiver(text: str) -> Quiver:
    """Parse ``"<V>; <src>-><tgt> ..."``; edges may continue over several lines, ``#`` starts a comment."""
    lines = text.splitlines() or [""]
    vertices = None
    edges = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if vertices is None:
            head, sep, rest = line.partition(";")
            if not sep or not head.strip().isdigit():
                raise QuiverParseError(lineno, f"expected '<vertex count>;', got {raw.strip()!r}")
            vertices = int(head)
            line = rest
        for tok in line.split():
            m = re.fullmatch(r"(\d+)->(\d+)", tok)
            if not m:
                raise QuiverParseError(lineno, f"bad edge {tok!r}, expected like 0->1")
            edges.append((int(m.group(1)), int(m.group(2))))
    if vertices is None:
        raise QuiverParseError(1, "missing vertex count")
    return Quiver(vertices, tuple(edges))


def has_length2_path(q: Quiver) -> bool:
    """True iff some vertex is the target of one edge and the source of another."""
    targets = {t for _, t in q.edges}
    return any(s in targets for s, _ in q.edges)


@dataclass(frozen=True)
class Path:
    """A path in traversal order; trivial paths have no edges and ``start == end``."""

    start: int
    end: int
    edges: tuple[int, ...] = ()

    @property
    def length(self) -> int:
        return len(self.edges)

    def label(self) -> str:
        if not self.edges:
            return f"e{self.start}"
        return "*".join(f"a{i}" for i in reversed(self.edges))


def path_basis(q: Quiver) -> list[Path]:
    """All paths, ordered by length and then by the edge index sequence."""
    out = [Path(v, v) for v in range(q.vertices)]
    layer = [Path(s, t, (i,)) for i, (s, t) in enumerate(q.edges)]
    while layer:
        out.extend(sorted(layer, key=lambda p: p.edges))
        layer = [Path(p.start, t, p.edges + (i,)) for p in layer for i, (s, t) in enumerate(q.edges) if s == p.end]
    return out


# the algebra --------------------------------------------------------------------

class PathAlgebra:
    """``kQ`` for ``k = GF(q)``; the product ``p * r`` is ``r`` followed by ``p``."""

    def __init__(self, quiver: Quiver, q: int):
        self.quiver = quiver
        self.field = GF(q)
        self.basis = path_basis(quiver)
        self.index = {p: i for i, p in enumerate(self.basis)}
        k = len(self.basis)
        table = np.full((k, k), -1, dtype=np.int64)
        for i, a in enumerate(self.basis):
            for j, b in enumerate(self.basis):
                if b.end != a.start:
                    continue
                if not a.edges:
                    table[i, j] = j
                elif not b.edges:
                    table[i, j] = i
                else:
                    table[i, j] = self.index[Path(b.start, a.end, b.edges + a.edges)]
        self.table = table
        self.pairs = [(i, j, int(table[i, j])) for i in range(k) for j in range(k) if table[i, j] >= 0]
        self.name = f"GF({q})Q[{quiver}]"

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return self.field.q ** self.dim

    @property
    def unit_count(self) -> int:
        V = self.quiver.vertices
        return (self.field.q - 1) ** V * self.field.q ** (self.dim - V)

    def element(self, coeffs) -> "PathElement":
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != self.dim or any(not 0 <= c < self.field.q for c in coeffs):
            raise ValueError(f"bad coefficient vector {coeffs} for {self.name}")
        return PathElement(self, coeffs)

    def basis_element(self, i: int) -> "PathElement":
        v = [0] * self.dim
        v[i] = 1
        return PathElement(self, tuple(v))

    def trivial(self, v: int) -> "PathElement":
        return self.basis_element(self.index[Path(v, v)])

    def edge(self, i: int) -> "PathElement":
        s, t = self.quiver.edges[i]
        return self.basis_element(self.index[Path(s, t, (i,))])

    @property
    def one(self) -> "PathElement":
        return PathElement(self, tuple(1 if not p.edges else 0 for p in self.basis))

    @property
    def zero(self) -> "PathElement":
        return PathElement(self, (0,) * self.dim)

    def batch_mul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        F = self.field
        out = np.zeros(np.broadcast_shapes(A.shape, B.shape), dtype=np.int64)
        for i, j, k in self.pairs:
            out[..., k] = F.add[out[..., k], F.mul[A[..., i], B[..., j]]]
        return out

    def batch_power(self, A: np.ndarray, e: int) -> np.ndarray:
        result = np.broadcast_to(np.array(self.one.coeffs, dtype=np.int64), A.shape).copy()
        base = A
        while e:
            if e & 1:
                result = self.batch_mul(result, base)
            e >>= 1
            if e:
                base = self.batch_mul(base, base)
        return result

    def format(self, coeffs) -> str:
        terms = []
        for c, p in zip(coeffs, self.basis):
            if not c:
                continue
            cf = self.field.format(c)
            if c == 1:
                terms.append(p.label())
            elif " " in cf:
                terms.append(f"({cf})*{p.label()}")
            else:
                terms.append(f"{cf}*{p.label()}")
        return " + ".join(terms) if terms else "0"

    def elements(self, cap: Optional[int] = None) -> np.ndarray:
        cap = default_cap() if cap is None else cap
        if self.size > cap:
            raise CapExceeded(self.size, cap, self.name)
        return np.indices((self.field.q,) * self.dim).reshape(self.dim, -1).T.astype(np.int64)

    def unit_blocks(self, cap: Optional[int] = None) -> Iterator[np.ndarray]:
        """Units in canonical element order, one array per support set."""
        cap = default_cap() if cap is None else cap
        if self.unit_count > cap:
            raise CapExceeded(self.unit_count, cap, f"units of {self.name}")
        V, k, q = self.quiver.vertices, self.dim, self.field.q
        trivial = tuple(range(V))
        for s in range(0, k - V + 1):
            for extra in combinations(range(V, k), s):
                support = trivial + extra
                vals = np.indices((q - 1,) * len(support)).reshape(len(support), -1).T + 1
                block = np.zeros((vals.shape[0], k), dtype=np.int64)
                block[:, list(support)] = vals
                yield block

    def __repr__(self):
        return f"<PathAlgebra {self.name}, dim {self.dim}>"


@dataclass(frozen=True)
class PathElement:
    algebra: PathAlgebra
    coeffs: tuple[int, ...]

    def _check(self, other) -> "PathElement":
        if not isinstance(other, PathElement) or other.algebra is not self.algebra:
            raise ValueError("elements of different path algebras")
        return other

    def __add__(self, other):
        other = self._check(other)
        F = self.algebra.field
        return PathElement(self.algebra, tuple(int(F.add[a, b]) for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        F = self.algebra.field
        return PathElement(self.algebra, tuple(int(F.neg[a]) for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._check(other))

    def __mul__(self, other):
        return pa_mul(self, other)

    def __pow__(self, e: int):
        A = np.array(self.coeffs, dtype=np.int64)
        return PathElement(self.algebra, tuple(int(x) for x in self.algebra.batch_power(A, e)))

    def scale(self, c: int) -> "PathElement":
        F = self.algebra.field
        return PathElement(self.algebra, tuple(int(F.mul[c, a]) for a in self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __str__(self):
        return self.algebra.format(self.coeffs)

    def __repr__(self):
        return f"<{self} in {self.algebra.name}>"


def pa_mul(a: PathElement, b: PathElement) -> PathElement:
    a._check(b)
    alg = a.algebra
    out = alg.batch_mul(np.array(a.coeffs, dtype=np.int64), np.array(b.coeffs, dtype=np.int64))
    return PathElement(alg, tuple(int(x) for x in out))


def pa_is_unit(a: PathElement) -> bool:
    """Invertible iff every trivial-path coefficient is nonzero."""
    V = a.algebra.quiver.vertices
    return all(a.coeffs[:V])


def brute_unit_mask(alg: PathAlgebra, cap: int = 1 << 12) -> np.ndarray:
    """For every element (in ``alg.elements()`` order), whether a two-sided inverse exists."""
    if alg.size > cap:
        raise CapExceeded(alg.size, cap, f"inverse table of {alg.name}")
    E = alg.elements(cap)
    q, k = alg.field.q, alg.dim
    weights = q ** np.arange(k - 1, -1, -1, dtype=np.int64)
    one = int(np.dot(alg.one.coeffs, weights))
    T = alg.batch_mul(E[:, None, :], E[None, :, :]) @ weights
    left = T == one
    return (left & left.T).any(axis=1)


@dataclass
class PathDeltaResult:
    algebra: str
    p: int
    structural: bool
    brute: Optional[bool]
    witness: Optional[str] = None
    abelian: Optional[bool] = None
    ea_rank: Optional[int] = None
    flagged: Optional[str] = None

    @property
    def agree(self) -> bool:
        return self.brute is None or self.brute == self.structural


def structural_delta(quiver: Quiver, q: int, p: int) -> bool:
    if p == 2:
        return (q == 3 and quiver.is_trivial) or (q == 2 and not has_length2_path(quiver))
    mersenne = (p + 1) & p == 0
    return quiver.is_trivial and (q == 2 or (q == p + 1 and mersenne))


def pa_is_delta_p(alg: PathAlgebra, p: int, cap: Optional[int] = None,
                  commute_limit: int = 256) -> PathDeltaResult:
    """Structural verdict from the quiver and field, plus a brute-force scan of the units.

    The brute verdict returns the least unit with ``u**p != 1``. When all units
    pass and there are at most ``commute_limit`` of them, pairwise commutation
    is checked and the rank of the (elementary abelian) unit group recorded.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    cap = default_cap() if cap is None else cap
    res = PathDeltaResult(alg.name, p, structural_delta(alg.quiver, alg.field.q, p), None)
    try:
        blocks = alg.unit_blocks(cap)
        one = np.array(alg.one.coeffs, dtype=np.int64)
        for block in blocks:
            bad = ~(alg.batch_power(block, p) == one).all(axis=1)
            if bad.any():
                w = min((tuple(int(x) for x in r) for r in block[bad]), key=element_key)
                res.brute, res.witness = False, alg.format(w)
                return res
    except CapExceeded as exc:
        res.flagged = f"structural verdict only: {exc}"
        return res
    res.brute = True
    if alg.unit_count <= commute_limit:
        U = np.concatenate(list(alg.unit_blocks(cap)))
        AB = alg.batch_mul(U[:, None, :], U[None, :, :])
        BA = alg.batch_mul(U[None, :, :], U[:, None, :])
        res.abelian = bool((AB == BA).all())
        if res.abelian:
            n, t = alg.unit_count, 0
            while n % p == 0:
                n //= p
                t += 1
            res.ea_rank = t if n == 1 else None
    return res


# quiver sweeps --------------------------------------------------------------------

def _canonical(V: int, edges) -> tuple:
    return min(tuple(sorted((perm[s], perm[t]) for s, t in edges)) for perm in permutations(range(V)))


def all_quivers(max_vertices: int = 4, max_edges: int = 4) -> list[Quiver]:
    """Acyclic quivers (parallel edges allowed) up to isomorphism, in a fixed order."""
    out = []
    for V in range(1, max_vertices + 1):
        pairs = [(i, j) for i in range(V) for j in range(i + 1, V)]
        seen = set()
        for E in range(max_edges + 1):
            for edges in combinations_with_replacement(pairs, E):
                key = _canonical(V, edges)
                if key not in seen:
                    seen.add(key)
                    out.append(Quiver(V, key))
    return out


def sweep_delta(fields: Sequence[int], p: int, max_vertices: int = 4, max_edges: int = 4,
                cap: Optional[int] = None) -> list[PathDeltaResult]:
    return [pa_is_delta_p(PathAlgebra(Q, q), p, cap)
            for Q in all_quivers(max_vertices, max_edges) for q in fields]


def random_element(alg: PathAlgebra, rng: np.random.Generator) -> PathElement:
    return PathElement(alg, tuple(int(x) for x in rng.integers(0, alg.field.q, alg.dim)))


def all_elements(alg: PathAlgebra, cap: Optional[int] = None) -> Iterator[PathElement]:
    for r in alg.elements(cap):
        yield PathElement(alg, tuple(int(x) for x in r))
