"""Unit groups: enumeration, exponent, the u^p = 1 test and elementary abelian rank."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .ring import FiniteRing, RingElement, element_key, is_unit, power


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


def prime_factors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def units(ring: FiniteRing, cap: Optional[int] = None) -> Iterator[RingElement]:
    """Invertible elements in canonical element order.

    When the ring is known to be local, units are the elements outside the
    maximal ideal, which is a cheap membership test.
    """
    m = ring.local_maximal_ideal
    if m is not None:
        for v in ring.element_tuples(cap):
            if not m.basis.contains(ring.embed(v)):
                yield RingElement(ring, v)
        return
    for a in ring.elements(cap):
        if is_unit(a):
            yield a


def is_delta_p(ring: FiniteRing, p: int, cap: Optional[int] = None) -> tuple[bool, Optional[RingElement]]:
    """Whether every unit satisfies ``u**p == 1``; on failure the least offending unit."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    one = ring.one
    for u in units(ring, cap):
        if power(u, p) != one:
            return False, u
    return True, None


def unit_order(u: RingElement, group_order: int) -> int:
    one = u.ring.one
    order = group_order
    for q in prime_factors(group_order):
        while order % q == 0 and power(u, order // q) == one:
            order //= q
    return order


def unit_exponent(ring: FiniteRing, cap: Optional[int] = None) -> int:
    """lcm of the multiplicative orders of all units."""
    us = list(units(ring, cap))
    n = len(us)
    exp = 1
    for u in us:
        exp = math.lcm(exp, unit_order(u, n))
    return exp


def units_commute(us: list[RingElement]) -> bool:
    for i, a in enumerate(us):
        for b in us[i + 1:]:
            if a * b != b * a:
                return False
    return True


def elementary_abelian_rank(ring: FiniteRing, p: int, cap: Optional[int] = None) -> Optional[int]:
    """``t`` when the unit group is elementary abelian of order ``p**t``, else None."""
    us = list(units(ring, cap))
    n = len(us)
    t = 0
    while n % p == 0:
        n //= p
        t += 1
    if n != 1:
        return None
    one = ring.one
    if any(power(u, p) != one for u in us):
        return None
    if not ring.commutative and not units_commute(us):
        return None
    return t


@dataclass
class UnitGroupReport:
    ring_id: str
    order: int
    exponent: int
    abelian: bool
    delta_p: dict[int, bool] = field(default_factory=dict)
    ea_rank: Optional[tuple[int, int]] = None
    witness: Optional[RingElement] = None
    witness_prime: Optional[int] = None

    def __post_init__(self):
        has_false = any(not v for v in self.delta_p.values())
        if has_false != (self.witness is not None):
            raise ValueError("a witness is required exactly when some delta_p verdict is false")
        if self.witness is not None:
            p = self.witness_prime
            if power(self.witness, p) == self.witness.ring.one or not is_unit(self.witness):
                raise ValueError(f"witness {self.witness} does not refute u^{p} = 1")
        if self.ea_rank is not None:
            p, t = self.ea_rank
            if self.order != p ** t or p % self.exponent:
                raise ValueError("inconsistent elementary abelian rank")

    def to_json(self) -> str:
        rec = {
            "ring_id": self.ring_id,
            "order": self.order,
            "exponent": self.exponent,
            "abelian": self.abelian,
            "delta_p": {str(p): v for p, v in sorted(self.delta_p.items())},
            "ea_rank": list(self.ea_rank) if self.ea_rank else None,
            "witness": str(self.witness) if self.witness is not None else None,
        }
        return json.dumps(rec)


def unit_group_report(ring: FiniteRing, primes=(2,), cap: Optional[int] = None) -> UnitGroupReport:
    us = list(units(ring, cap))
    order = len(us)
    one = ring.one
    exponent = 1
    for u in us:
        exponent = math.lcm(exponent, unit_order(u, order))
    abelian = True if ring.commutative else units_commute(us)
    verdicts: dict[int, bool] = {}
    witness = witness_prime = None
    for p in primes:
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        bad = next((u for u in us if power(u, p) != one), None)
        verdicts[p] = bad is None
        if bad is not None and witness is None:
            witness, witness_prime = bad, p
    ea = None
    for p in prime_factors(order) or list(primes):
        t = round(math.log(order, p)) if order > 1 else 0
        if p ** t == order and exponent in (1, p) and abelian:
            ea = (p, t)
            break
    return UnitGroupReport(ring.name, order, exponent, abelian, verdicts, ea, witness, witness_prime)


def least_witness(candidates) -> Optional[RingElement]:
    """Deterministic merge of partial scans: the least witness in canonical order."""
    cands = [c for c in candidates if c is not None]
    return min(cands, key=lambda e: element_key(e.coeffs)) if cands else None
