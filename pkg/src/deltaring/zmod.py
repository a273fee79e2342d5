"""Exact linear algebra over Z/nZ for composite n.

Submodules of (Z/nZ)^k are kept in Howell normal form, which is unique per
submodule. Equality of submodules therefore reduces to equality of the row
tuples of their :class:`CanonicalBasis`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np


class DimensionMismatch(ValueError):
    """Vectors or matrices of incompatible modulus or length were combined."""


def check_modulus(n: int) -> int:
    n = int(n)
    if n < 2:
        raise ValueError(f"modulus must be >= 2, got {n}")
    return n


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b)``."""
    r0, r1, s0, s1, t0, t1 = a, b, 1, 0, 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0 < 0:
        r0, s0, t0 = -r0, -s0, -t0
    return r0, s0, t0


def unit_normalizer(a: int, n: int) -> int:
    """Unit ``u`` of Z/nZ with ``u*a == gcd(a, n) (mod n)``."""
    g = math.gcd(a, n)
    n1 = n // g
    u = pow((a // g) % n1, -1, n1) if n1 > 1 else 1
    while math.gcd(u, n) != 1:
        u += n1
    return u % n


def _as_matrix(rows, n: int, dim: Optional[int]) -> np.ndarray:
    rows = [tuple(int(x) for x in r) for r in rows]
    lengths = {len(r) for r in rows}
    if dim is None:
        if not lengths:
            raise DimensionMismatch("cannot infer ambient dimension of an empty row set")
        dim = lengths.pop() if len(lengths) == 1 else -1
    if lengths - {dim} or dim < 0:
        raise DimensionMismatch(f"rows have lengths {sorted(lengths)}, expected {dim}")
    if not rows:
        return np.zeros((0, dim), dtype=np.int64)
    return np.array(rows, dtype=np.int64).reshape(len(rows), dim) % n


def howell_array(A: np.ndarray, n: int) -> np.ndarray:
    """Howell form of the row span of ``A`` (entries already in [0, n)).

    Pivoting picks the row whose entry has the smallest gcd with ``n``; when
    that gcd does not divide every entry below it (only possible for n with
    several prime factors), rows are merged with 2x2 unimodular transforms.
    After each pivot the annihilator row ``(n/g) * pivot_row`` is appended so
    the result satisfies the Howell property.
    """
    m, k = A.shape
    W = np.zeros((m + k, k), dtype=np.int64)
    W[:m] = A
    total = m
    r = 0
    for c in range(k):
        if r >= total:
            break
        col = W[r:total, c]
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        best = r + int(nz[np.argmin(np.gcd(col[nz], n))])
        if best != r:
            W[[r, best]] = W[[best, r]]
        g = math.gcd(int(W[r, c]), n)
        while True:
            bad = np.flatnonzero(W[r + 1:total, c] % g)
            if bad.size == 0:
                break
            i = r + 1 + int(bad[0])
            a, b = int(W[r, c]), int(W[i, c])
            d, s, t = xgcd(a, b)
            top, bot = W[r].copy(), W[i].copy()
            W[r] = (s * top + t * bot) % n
            W[i] = ((-b // d) * top + (a // d) * bot) % n
            g = math.gcd(int(W[r, c]), n)
        u = unit_normalizer(int(W[r, c]), n)
        if u != 1:
            W[r] = (W[r] * u) % n
        q = W[:total, c] // g
        q[r] = 0
        if q.any():
            W[:total] = (W[:total] - np.outer(q, W[r])) % n
        if g != 1:
            ann = (W[r] * (n // g)) % n
            if ann.any():
                W[total] = ann
                total += 1
        r += 1
    return W[:r].copy()


def reduce_array(rows: np.ndarray, pivots: Sequence[int], V: np.ndarray, n: int) -> np.ndarray:
    """Reduce each row of ``V`` against a Howell basis; returns coset representatives."""
    V = V % n
    for row, c in zip(rows, pivots):
        q = V[:, c] // row[c]
        if q.any():
            V = (V - np.outer(q, row)) % n
    return V


@dataclass(frozen=True)
class CanonicalBasis:
    """A submodule of (Z/nZ)^k in Howell normal form.

    Rows are ordered by pivot column, so two bases describe the same
    submodule exactly when they compare equal.
    """

    modulus: int
    rows: tuple[tuple[int, ...], ...]
    ambient_dim: int

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(r) if x) for r in self.rows)

    @property
    def span_size(self) -> int:
        size = 1
        for r, c in zip(self.rows, self.pivots):
            size *= self.modulus // r[c]
        return size

    def array(self) -> np.ndarray:
        if not self.rows:
            return np.zeros((0, self.ambient_dim), dtype=np.int64)
        return np.array(self.rows, dtype=np.int64)

    def key(self) -> bytes:
        return self.array().tobytes()

    def reduce(self, v: Sequence[int]) -> tuple[int, ...]:
        """Canonical representative of ``v`` modulo the span."""
        if len(v) != self.ambient_dim:
            raise DimensionMismatch(f"vector of length {len(v)} in ambient dimension {self.ambient_dim}")
        n = self.modulus
        w = [int(x) % n for x in v]
        for r, c in zip(self.rows, self.pivots):
            q = w[c] // r[c]
            if q:
                w = [(x - q * y) % n for x, y in zip(w, r)]
        return tuple(w)

    def reduce_many(self, V: np.ndarray) -> np.ndarray:
        return reduce_array(self.array(), self.pivots, np.asarray(V, dtype=np.int64), self.modulus)

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def is_subset_of(self, other: "CanonicalBasis") -> bool:
        return all(other.contains(r) for r in self.rows)

    def elements(self):
        """Iterate over the span; each element is produced once."""
        n = self.modulus
        ranges = [range(n // r[c]) for r, c in zip(self.rows, self.pivots)]
        from itertools import product

        for coeffs in product(*ranges):
            v = [0] * self.ambient_dim
            for a, r in zip(coeffs, self.rows):
                if a:
                    v = [(x + a * y) % n for x, y in zip(v, r)]
            yield tuple(v)


def _basis_from_array(H: np.ndarray, n: int, dim: int) -> CanonicalBasis:
    return CanonicalBasis(n, tuple(tuple(int(x) for x in r) for r in H), dim)


def howell_form(rows: Iterable[Sequence[int]], n: int, dim: Optional[int] = None) -> CanonicalBasis:
    """Unique Howell basis of the Z/nZ-span of ``rows``.

    Args:
        rows: Generating vectors, all of the same length.
        n: The modulus.
        dim: Ambient dimension; required when ``rows`` is empty.

    Raises:
        DimensionMismatch: if rows have different lengths.
    """
    n = check_modulus(n)
    A = _as_matrix(list(rows), n, dim)
    return _basis_from_array(howell_array(A, n), n, A.shape[1])


def howell_from_array(A: np.ndarray, n: int) -> CanonicalBasis:
    return _basis_from_array(howell_array(np.asarray(A, dtype=np.int64) % n, n), n, A.shape[1])


def span_contains(basis: CanonicalBasis, v: Sequence[int]) -> bool:
    """True iff ``v`` is a Z/nZ-combination of the basis rows."""
    return basis.contains(v)


def _square(matrix, n: int) -> np.ndarray:
    M = np.asarray(matrix, dtype=np.int64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {M.shape}")
    return M % n


def is_invertible(matrix, n: int) -> bool:
    """True iff the square matrix has a two-sided inverse over Z/nZ.

    A square matrix over a finite commutative ring is invertible exactly when
    its rows span the whole space, i.e. its Howell form is the identity.
    """
    n = check_modulus(n)
    M = _square(matrix, n)
    H = howell_array(M, n)
    return H.shape == M.shape and bool((H == np.eye(M.shape[0], dtype=np.int64)).all())


def solve_combination(rows, target: Sequence[int], n: int, extra_rows=()) -> Optional[tuple[int, ...]]:
    """Find ``x`` with ``sum(x[j] * rows[j]) == target`` modulo the span of ``extra_rows``.

    Returns None when no such combination exists.
    """
    R = np.asarray(rows, dtype=np.int64) % n
    m, k = R.shape
    if len(target) != k:
        raise DimensionMismatch(f"target of length {len(target)} for rows of length {k}")
    E = np.asarray(list(extra_rows), dtype=np.int64).reshape(-1, k) % n
    aug = np.zeros((m + E.shape[0], k + m), dtype=np.int64)
    aug[:m, :k] = R
    aug[:m, k:] = np.eye(m, dtype=np.int64)
    aug[m:, :k] = E
    H = howell_array(aug, n)
    piv = [int(np.flatnonzero(r)[0]) for r in H]
    t = np.zeros((1, k + m), dtype=np.int64)
    t[0, :k] = np.asarray(target, dtype=np.int64) % n
    red = reduce_array(H, piv, t, n)[0]
    if red[:k].any():
        return None
    return tuple(int(x) for x in (-red[k:]) % n)


def solve_linear(matrix, rhs: Sequence[int], n: int) -> Optional[tuple[int, ...]]:
    """Some ``x`` with ``matrix @ x == rhs`` over Z/nZ, or None."""
    n = check_modulus(n)
    M = _square(matrix, n)
    if len(rhs) != M.shape[0]:
        raise DimensionMismatch(f"rhs of length {len(rhs)} for a {M.shape[0]}x{M.shape[0]} matrix")
    return solve_combination(M.T, rhs, n)
