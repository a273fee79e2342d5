"""Ideal lattices, their Hasse diagrams, and antichain (Dedekind) counts."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Optional

import numpy as np

from .ring import (
    CapExceeded,
    FiniteRing,
    Ideal,
    extend_ideal,
    ideal_closure,
    minimal_generators,
    nilpotents,
    zero_ideal,
)
from .zmod import CanonicalBasis, howell_array

LATTICE_CAP = 1 << 16


@dataclass
class LatticeReport:
    ring_id: str
    ideals: list[Ideal]
    covers: list[tuple[int, int]] = field(default_factory=list)
    ring: Optional[FiniteRing] = None

    @property
    def count(self) -> int:
        return len(self.ideals)

    def index(self, ideal: Ideal) -> int:
        return self.ideals.index(ideal)


def _sort_key(ideal: Ideal):
    return (ideal.size, ideal.basis.rows)


def _socle_candidates(ideal: Ideal, radical_gens) -> list[tuple]:
    """Representatives of the nonzero elements of ``{a : a*g in I for all g}`` modulo I."""
    ring = ideal.ring
    n, d = ring.modulus, ring.dim
    k = len(radical_gens)
    I = ideal.basis.array().reshape(-1, d)
    rows = []
    for j in range(d):
        e = [0] * d
        e[j] = 1
        left = [ring.embed(ring._mul(tuple(e), g.coeffs)) for g in radical_gens]
        rows.append(np.concatenate(left + [ring.embed(e)]))
    for b in range(k):
        for r in I:
            v = np.zeros(k * d + d, dtype=np.int64)
            v[b * d:(b + 1) * d] = r
            rows.append(v)
    H = howell_array(np.array(rows, dtype=np.int64) % n, n)
    kernel = [r[k * d:] for r in H if not r[:k * d].any()]
    seen, out = set(), []
    for w in _quotient_reps(kernel, ideal.basis, n, d):
        red = ideal.basis.reduce(w)
        if any(red) and red not in seen:
            seen.add(red)
            out.append(ring.unembed(red))
    return out


def _quotient_reps(rows, sub: CanonicalBasis, n: int, d: int):
    """One vector per coset of ``sub`` in the span of the Howell rows ``rows``.

    With both modules in Howell form, ``sum a_c r_c`` for ``0 <= a_c < d_sub(c) / d(c)``
    meets every coset exactly once (``d`` is the pivot entry in column ``c``).
    """
    sub_piv = {c: r[c] for r, c in zip(sub.rows, sub.pivots)}
    ranges = []
    for r in rows:
        c = int(np.flatnonzero(r)[0])
        ranges.append(range(sub_piv.get(c, n) // int(r[c])))
    for coeffs in product(*ranges):
        v = np.zeros(d, dtype=np.int64)
        for a, r in zip(coeffs, rows):
            if a:
                v = v + a * r
        yield v % n


def _radical_generators(ring: FiniteRing):
    N = nilpotents(ring, LATTICE_CAP)
    return minimal_generators(N)


def _finish(ring: FiniteRing, found: dict, edges) -> LatticeReport:
    ideals = sorted(found.values(), key=_sort_key)
    pos = {I.basis: i for i, I in enumerate(ideals)}
    covers = sorted({(pos[u.basis], pos[l.basis]) for u, l in edges})
    return LatticeReport(ring.name, ideals, covers, ring)


def enumerate_ideals(ring: FiniteRing, cap: int = LATTICE_CAP, strategy: str = "socle",
                     reverse: bool = False) -> LatticeReport:
    """All ideals of ``ring`` by breadth-first extension from the zero ideal.

    Args:
        ring: A commutative finite ring.
        cap: Refuse rings with more elements than this.
        strategy: ``"socle"`` extends each ideal only by elements annihilated
            (modulo the ideal) by the nilradical, which produces exactly the
            covers; ``"all"`` extends by every ring element and leaves covers
            to :func:`covering_relations`.
        reverse: Visit extension candidates in reverse canonical order.

    Raises:
        CapExceeded: if ``ring.size > cap``.
    """
    if ring.size > cap:
        raise CapExceeded(ring.size, cap, "ideal lattice")
    if strategy not in ("socle", "all"):
        raise ValueError(f"unknown strategy {strategy!r}")
    bottom = zero_ideal(ring)
    found = {bottom.basis: bottom}
    queue = deque([bottom])
    edges = []
    if strategy == "all":
        elems = list(ring.element_tuples(cap, reverse=reverse))
        while queue:
            I = queue.popleft()
            for a in elems:
                if I.contains(a):
                    continue
                J = extend_ideal(I, a)
                if J.basis not in found:
                    found[J.basis] = J
                    queue.append(J)
        report = _finish(ring, found, [])
        report.covers = covering_relations(report)
        return report
    gens = _radical_generators(ring)
    while queue:
        I = queue.popleft()
        cands = _socle_candidates(I, gens)
        if reverse:
            cands.reverse()
        ups = {}
        for a in cands:
            J = extend_ideal(I, a)
            ups.setdefault(J.basis, J)
        ups = sorted(ups.values(), key=lambda J: J.size)
        for J in ups:
            if any(K.size < J.size and K <= J for K in ups):
                continue
            edges.append((J, I))
            if J.basis not in found:
                found[J.basis] = J
                queue.append(J)
    return _finish(ring, found, edges)


def covering_relations(report: LatticeReport) -> list[tuple[int, int]]:
    """Transitive reduction of inclusion among the report's ideals."""
    ideals = report.ideals
    m = len(ideals)
    below = [[j for j in range(m) if j != i and ideals[j].size < ideals[i].size and ideals[j] <= ideals[i]]
             for i in range(m)]
    out = []
    for i in range(m):
        inner = set(below[i])
        for j in below[i]:
            if not any(j in below[k] for k in inner if k != j):
                out.append((i, j))
    return sorted(out)


def ideal_label(ideal: Ideal) -> str:
    gens = minimal_generators(ideal)
    if not gens:
        return "(0)"
    return "(" + ", ".join(str(g) for g in gens) + ")"


def export_dot(report: LatticeReport) -> str:
    """DOT digraph of the Hasse diagram, edges pointing from larger to smaller ideals."""
    if not report.ideals or not report.ideals[0].is_zero() or not report.ideals[-1].is_unit_ideal():
        raise ValueError("report must contain the zero and unit ideal")
    lines = ["digraph lattice {", "  rankdir=TB;"]
    for i, I in enumerate(report.ideals):
        label = ideal_label(I).replace('"', '\\"')
        lines.append(f'  n{i} [label="{label}"];')
    for u, l in report.covers:
        lines.append(f"  n{u} -> n{l};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def maximal_chain_check(report: LatticeReport) -> bool:
    """Every ideal lies on a chain of covers from the zero ideal to the unit ideal."""
    m = report.count
    up = {i: [] for i in range(m)}
    down = {i: [] for i in range(m)}
    for u, l in report.covers:
        up[l].append(u)
        down[u].append(l)

    def reach(start, nbrs):
        seen, stack = {start}, [start]
        while stack:
            for v in nbrs[stack.pop()]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen

    return reach(0, up) == set(range(m)) and reach(m - 1, down) == set(range(m))


def is_monomial_ideal(ideal: Ideal) -> bool:
    ring = ideal.ring
    monos = [b for b in ring.module_generators() if ideal.contains(b)]
    return ideal_closure(ring, monos) == ideal


def count_monomial_ideals_via_lattice(l: int, cap: int = LATTICE_CAP) -> int:
    from .families import truncated_f2

    if l > 3:
        raise CapExceeded(2 ** (2 ** l), 256, "monomial sublattice (l <= 3)")
    report = enumerate_ideals(truncated_f2(l), cap)
    return sum(1 for I in report.ideals if is_monomial_ideal(I))


# antichains -------------------------------------------------------------------

MAX_DEDEKIND_L = 6


@dataclass
class AntichainFamily:
    ground_size: int
    count: int
    antichains: Optional[list[tuple[frozenset, ...]]] = None


def _rank_order(l: int) -> list[int]:
    return sorted(range(1 << l), key=lambda s: (bin(s).count("1"), s))


def _antichains(l: int):
    """Yield antichains as tuples of bitmasks, extending in rank order."""
    order = _rank_order(l)

    def comparable(a, b):
        return a & b == a or a & b == b

    def rec(start, chosen):
        yield tuple(chosen)
        for i in range(start, len(order)):
            s = order[i]
            if all(not comparable(s, c) for c in chosen):
                chosen.append(s)
                yield from rec(i + 1, chosen)
                chosen.pop()

    yield from rec(0, [])


def up_sets(l: int) -> np.ndarray:
    """Up-closed families of subsets of an l-set, as bitmasks over the 2^l subsets."""
    if l > 5:
        raise ValueError("up-set masks are limited to l <= 5")
    full = 1 << l
    above = [sum(1 << t for t in range(full) if t & s == s) for s in range(full)]
    out = []
    for ac in _antichains(l):
        m = 0
        for s in ac:
            m |= above[s]
        out.append(m)
    return np.array(sorted(out), dtype=np.uint64)


def _count_by_pairs(l: int) -> int:
    """Number of up-sets on l+1 points, as pairs ``A <= B`` of up-sets on l points."""
    U = up_sets(l)
    total = 0
    for a in U:
        total += int(np.count_nonzero((a & ~U) == 0))
    return total


def count_antichains(l: int) -> int:
    """Number of antichains of subsets of an l-set (Dedekind number M(l)), for 1 <= l <= 6.

    For l <= 5 the antichains are enumerated directly. For l == 6 the count
    uses that an up-set on l points is a pair of nested up-sets on l-1 points.
    """
    if l < 1:
        raise ValueError("l must be >= 1")
    if l > MAX_DEDEKIND_L:
        raise ValueError(f"l = {l} is out of desk scale; l = 7, 8 are known constants, not recomputed here")
    if l <= 5:
        return sum(1 for _ in _antichains(l))
    return _count_by_pairs(l - 1)


def antichain_family(l: int) -> AntichainFamily:
    count = count_antichains(l)
    explicit = None
    if l <= 4:
        explicit = [tuple(frozenset(i for i in range(l) if s >> i & 1) for s in ac) for ac in _antichains(l)]
    return AntichainFamily(l, count, explicit)


def is_antichain(sets) -> bool:
    return all(not (a <= b or b <= a) for a, b in combinations(sets, 2))
