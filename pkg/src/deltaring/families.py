"""Named ring families and the Delta_p classification predicates.

Constructors return presentations (or quotients/products of them) and, when
the ring is local, attach the maximal ideal so that unit scans can use the
cheap "not in m" test. Each classifier pairs a structural prediction with a
brute-force verdict computed whenever the ring fits the enumeration cap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Optional, Sequence

from .ring import (
    CapExceeded,
    FiniteRing,
    Ideal,
    ProductRing,
    QuotientRing,
    RingElement,
    RingPresentation,
    characteristic,
    default_cap,
    ideal_closure,
    is_unit,
    make_ring,
)
from .units import is_delta_p, is_prime


class FieldConstructionError(ValueError):
    pass


class WrongParent(ValueError):
    """An operation that needs a Z_4/Z_8 group-algebra parent got something else."""


class ConsistencyError(AssertionError):
    """A structural prediction disagreed with brute force."""


# small polynomial helpers over F_p (coefficients low -> high) ---------------

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a, b, p):
    a = _trim(a)
    b = _trim(b)
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b):
        f = a[-1] * inv % p
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - f * c) % p
        a = _trim(a)
    return a


def _irreducible(poly, p) -> bool:
    deg = len(poly) - 1
    for d in range(1, deg // 2 + 1):
        for tail in iproduct(range(p), repeat=d):
            if not _polymod(poly, list(tail) + [1], p):
                return False
    return True


def conway_like_reduction(p: int, m: int) -> tuple[int, ...]:
    """What ``x^m`` rewrites to for the first monic irreducible of degree ``m`` over F_p.

    Candidates are ordered by their tail coefficients read as a base-p number,
    which yields x^2+x+1 and x^3+x+1 over F_2 and x^2+1 over F_3.
    """
    for idx in range(1, p ** m):
        tail = [(idx // p ** i) % p for i in range(m)]
        if tail[0] == 0:
            continue
        if _irreducible(tail + [1], p):
            return tuple((-c) % p for c in tail)
    raise FieldConstructionError(f"no irreducible polynomial of degree {m} over F_{p}")


def _check_field(ring: FiniteRing) -> None:
    for a in ring.elements():
        if a and not is_unit(a):
            raise FieldConstructionError(f"{ring.name} is not a field: {a} is a nonzero non-unit")


def _set_local(ring: FiniteRing, gens: Sequence[RingElement], residue: int) -> FiniteRing:
    m = ideal_closure(ring, gens)
    if ring.size // m.size != residue:
        raise AssertionError(f"expected residue field of size {residue} in {ring.name}")
    ring.local_maximal_ideal = m
    return ring


# constructors --------------------------------------------------------------

def truncated_f2(l: int) -> RingPresentation:
    """``F_2[x_1..x_l]/(x_i^2)``; ``l == 0`` gives F_2 itself."""
    if l < 0:
        raise ValueError("l must be >= 0")
    names = ["x"] if l == 1 else [f"x{i + 1}" for i in range(l)]
    ring = make_ring(2, [(v, 2, 0) for v in names], name=f"truncated_f2({l})")
    return _set_local(ring, list(ring.gens().values()), 2)


def finite_field(q: int) -> RingPresentation:
    """GF(q) for a prime power q, on the generator ``g``."""
    from .dsl import prime_power

    pm = prime_power(q)
    if pm is None:
        raise FieldConstructionError(f"{q} is not a prime power")
    p, m = pm
    if m == 1:
        ring = make_ring(p, [], name=f"F{p}")
    else:
        ring = make_ring(p, [("g", m, conway_like_reduction(p, m))], name=f"GF({q})")
    ring.local_maximal_ideal = ideal_closure(ring, [])
    return ring


def f3() -> RingPresentation:
    return finite_field(3)


def gf(m: int, reduction=None) -> RingPresentation:
    """GF(2^m). Default reductions: x^2 -> x+1, x^3 -> x+1, then the first irreducible."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if m == 1:
        ring = make_ring(2, [], name="gf(1)")
    else:
        red = conway_like_reduction(2, m) if reduction is None else reduction
        ring = make_ring(2, [("x", m, red)], name=f"gf({m})")
        if reduction is not None:
            _check_field(ring)
    ring.local_maximal_ideal = ideal_closure(ring, [])
    return ring


def group_algebra(n: int, orders: Sequence[int]) -> RingPresentation:
    """``Z_n[C_{k_1} x ... x C_{k_r}]`` with generator rules ``x_i^{k_i} -> 1``."""
    orders = tuple(int(k) for k in orders)
    if any(k < 2 for k in orders):
        raise ValueError(f"cyclic factor orders must be >= 2, got {list(orders)}")
    names = ["x"] if len(orders) == 1 else [f"x{i + 1}" for i in range(len(orders))]
    ring = make_ring(n, [(v, k, 1) for v, k in zip(names, orders)],
                     name=f"group_algebra({n},[{','.join(map(str, orders))}])")
    # Z_{q^a} G with G a q-group is local with maximal ideal (q, x_i - 1)
    from .dsl import prime_power

    pm = prime_power(n)
    if pm is not None and all(prime_power(k) and prime_power(k)[0] == pm[0] for k in orders):
        q = pm[0]
        _set_local(ring, [ring.scalar(q)] + [g - 1 for g in ring.gens().values()], q)
    return ring


def _z_parent_check(ring: FiniteRing) -> None:
    ok = (isinstance(ring, RingPresentation) and ring.n in (4, 8) and ring.variables
          and all(d == 2 and red == (1, 0) for _, d, red in ring.variables))
    if not ok:
        raise WrongParent(f"{ring.name} is not Z_4 or Z_8 [x_1..x_l]/(x_i^2 - 1)")


def maximal_ideal_P(ring: FiniteRing) -> Ideal:
    """``(2, x_1 - 1, ..., x_l - 1)``, checked to have residue field F_2."""
    _z_parent_check(ring)
    P = ideal_closure(ring, [ring.scalar(2)] + [g - 1 for g in ring.gens().values()])
    if ring.size // P.size != 2:
        raise AssertionError("quotient by P is not F_2")
    return P


def _eta(e: RingElement) -> RingElement:
    return e * e + e * 2


def eta_ideal_J(ring: FiniteRing, P: Ideal) -> Ideal:
    """The ideal generated by ``eta*(eta+2)`` for all ``eta`` in P.

    With ``f(eta) = eta^2 + 2 eta`` one has ``f(a+b) = f(a) + f(b) + 2ab``, and
    ``4 eta = 2 f(eta) - 2 eta^2``, so ``{f(b_i)} + {2 b_i b_j}`` over a module
    basis ``b_i`` of P generates the same ideal.
    """
    if P.ring is not ring:
        raise WrongParent("P is not an ideal of this ring")
    _z_parent_check(ring)
    b = P.rows()
    gens = [_eta(x) for x in b]
    gens += [x * y * 2 for i, x in enumerate(b) for y in b[i:]]
    return ideal_closure(ring, gens)


def eta_ideal_J_bruteforce(ring: FiniteRing, P: Ideal) -> Ideal:
    """Closure of ``{eta*(eta+2) : eta in P}`` taken over every element of P."""
    return ideal_closure(ring, [_eta(e) for e in P.elements()])


def z_parent(char: int, l: int) -> RingPresentation:
    if char not in (4, 8):
        raise ValueError("char must be 4 or 8")
    if l < 1:
        raise ValueError("l must be >= 1")
    return group_algebra(char, [2] * l)


def z_family(char: int, l: int, cap: Optional[int] = None, verify: bool = True) -> QuotientRing:
    """``Z_char[x_1..x_l]/(x_i^2 - 1)`` modulo the eta ideal; always Delta_2."""
    cap = default_cap() if cap is None else cap
    size = char ** (2 ** l)
    if size > cap:
        raise CapExceeded(size, cap, f"parent of z_family({char},{l})")
    parent = z_parent(char, l)
    P = maximal_ideal_P(parent)
    J = eta_ideal_J(parent, P)
    q = QuotientRing(parent, J, name=f"z_family({char},{l})")
    q.local_maximal_ideal = Ideal(q, P.basis)
    if verify:
        ok, w = is_delta_p(q, 2, cap)
        if not ok:
            raise ConsistencyError(f"z_family({char},{l}) is not Delta_2: witness {w}")
    return q


def delta2_quotient_criterion(parent: FiniteRing, J_user: Ideal, cap: Optional[int] = None) -> bool:
    """Whether ``parent / J_user`` is Delta_2, decided by ``J_user`` containing the eta ideal.

    The brute-force verdict on the quotient is always computed too (within the
    cap) and a disagreement raises :class:`ConsistencyError`.
    """
    if J_user.ring is not parent:
        raise WrongParent("J_user is not an ideal of this parent")
    J = eta_ideal_J(parent, maximal_ideal_P(parent))
    predicted = J <= J_user
    q = QuotientRing(parent, J_user)
    try:
        brute, _ = is_delta_p(q, 2, cap)
    except CapExceeded:
        return predicted
    if brute != predicted:
        raise ConsistencyError(f"criterion says {predicted}, brute force says {brute}")
    return predicted


def is_mersenne(p: int) -> bool:
    """Prime with ``p + 1`` a power of two (2 is excluded)."""
    return is_prime(p) and p > 2 and (p + 1) & p == 0


# descriptors ----------------------------------------------------------------

@dataclass(frozen=True)
class FamilyDescriptor:
    tag: str
    params: tuple = ()
    factors: tuple["FamilyDescriptor", ...] = ()

    def __post_init__(self):
        t, p = self.tag, self.params
        if t in ("f2", "f3"):
            ok = p == ()
        elif t == "truncated_f2":
            ok = len(p) == 1 and p[0] >= 0
        elif t == "gf":
            ok = len(p) == 1 and p[0] >= 1
        elif t == "group_algebra":
            ok = len(p) == 2 and p[0] >= 2 and all(k >= 2 for k in p[1])
        elif t == "z_family":
            ok = len(p) == 2 and p[0] in (4, 8) and p[1] >= 1
        elif t == "product":
            ok = len(self.factors) >= 1
        elif t == "power":
            ok = len(p) == 1 and p[0] >= 1 and len(self.factors) == 1
        else:
            raise ValueError(f"unknown family tag {t!r}")
        if not ok:
            raise ValueError(f"parameters {p} out of range for {t}")

    def __str__(self):
        t, p = self.tag, self.params
        if t in ("f2", "f3"):
            return t
        if t == "group_algebra":
            return f"group_algebra({p[0]},[{','.join(map(str, p[1]))}])"
        if t == "z_family":
            return f"z_family({p[0]},{p[1]})"
        if t == "product":
            return "product(" + ", ".join(map(str, self.factors)) + ")"
        if t == "power":
            return f"{self.factors[0]}^{p[0]}"
        return f"{t}({p[0]})"

    def leaves(self) -> list["FamilyDescriptor"]:
        """Flattened list of non-product factors (powers expanded)."""
        if self.tag == "product":
            return [x for f in self.factors for x in f.leaves()]
        if self.tag == "power":
            return self.factors[0].leaves() * self.params[0]
        return [self]

    def characteristic(self) -> int:
        t, p = self.tag, self.params
        if t in ("f2", "truncated_f2", "gf"):
            return 2
        if t == "f3":
            return 3
        if t in ("group_algebra", "z_family"):
            return p[0]
        return math.lcm(*[f.characteristic() for f in self.leaves()])

    def size(self) -> int:
        t, p = self.tag, self.params
        if t == "f2":
            return 2
        if t == "f3":
            return 3
        if t == "truncated_f2":
            return 2 ** (2 ** p[0])
        if t == "gf":
            return 2 ** p[0]
        if t == "group_algebra":
            return p[0] ** math.prod(p[1])
        if t == "z_family":
            return p[0] ** (2 ** p[1])  # upper bound: the parent
        return math.prod(f.size() for f in self.leaves())


def build_family(desc: FamilyDescriptor, cap: Optional[int] = None) -> FiniteRing:
    cap = default_cap() if cap is None else cap
    t, p = desc.tag, desc.params
    if t == "f2":
        return truncated_f2(0)
    if t == "f3":
        return f3()
    if t == "truncated_f2":
        return truncated_f2(p[0])
    if t == "gf":
        return gf(p[0])
    if t == "group_algebra":
        return group_algebra(p[0], p[1])
    if t == "z_family":
        return z_family(p[0], p[1], cap)
    return ProductRing([build_family(f, cap) for f in desc.leaves()], name=str(desc))


TABLE_ROWS = {
    2: "prod F2[x1..xl]/(xi^2)",
    3: "prod F3",
    6: "prod F3 x prod F2[x1..xl]/(xi^2)",
    4: "prod Z4[x1..xl]/(r(r+2) : r in P)",
    8: "prod Z8[x1..xl]/(r(r+2) : r in P)",
    12: "prod F3 x prod Z4[x1..xl]/(r(r+2) : r in P)",
    24: "prod F3 x prod Z8[x1..xl]/(r(r+2) : r in P)",
}


def _predict_delta2(d: FamilyDescriptor) -> bool:
    t, p = d.tag, d.params
    if t in ("f2", "f3", "truncated_f2", "z_family"):
        return True
    if t == "gf":
        return p[0] == 1
    if t == "group_algebra":
        n, orders = p
        if not orders:
            return n in (2, 3, 4, 6, 8, 12, 24)
        if n in (2, 3, 6):
            return all(k == 2 for k in orders)
        if n in (4, 12):
            return orders == (2,)
        return False
    return all(_predict_delta2(f) for f in d.leaves())


def _predict_delta_odd(d: FamilyDescriptor, p: int) -> bool:
    """Product of copies of F_2 and F_{p+1} (F_2 has trivial units, so it never fails)."""
    t, q = d.tag, d.params
    if t == "f2" or (t == "truncated_f2" and q[0] == 0):
        return True
    if t == "gf":
        return q[0] == 1 or 2 ** q[0] == p + 1
    if t == "group_algebra":
        n, orders = q
        if n != 2:
            return False
        return not orders or (all(k == p for k in orders) and is_mersenne(p))
    if t in ("product", "power"):
        return all(_predict_delta_odd(f, p) for f in d.leaves())
    return False


@dataclass
class Classification:
    descriptor: str
    p: int
    predicted: bool
    brute: Optional[bool] = None
    witness: Optional[str] = None
    table_row: Optional[str] = None
    characteristic: Optional[int] = None
    notes: list[str] = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return self.brute is not None

    @property
    def agree(self) -> bool:
        return self.brute is None or self.brute == self.predicted


def _brute(desc: FamilyDescriptor, p: int, cap: int, out: Classification) -> Classification:
    try:
        ring = build_family(desc, cap)
        out.characteristic = characteristic(ring)
        ok, w = is_delta_p(ring, p, cap)
    except CapExceeded as exc:
        out.notes.append(f"unverified: {exc}")
        return out
    out.brute = ok
    out.witness = None if w is None else str(w)
    if not out.agree:
        out.notes.append("prediction and brute force disagree")
    return out


def classify_delta2(desc: FamilyDescriptor, cap: Optional[int] = None) -> Classification:
    """Predicted Delta_2 verdict from the classification, plus brute force within the cap."""
    cap = default_cap() if cap is None else cap
    char = desc.characteristic()
    pred = _predict_delta2(desc)
    row = TABLE_ROWS.get(char) if 24 % char == 0 else None
    out = Classification(str(desc), 2, pred, table_row=row, characteristic=char)
    if row is None:
        out.notes.append(f"characteristic {char} does not divide 24")
    if desc.tag in ("product", "power"):
        out.notes.append("products of quotients only; general quotients of products are not enumerated")
    return _brute(desc, 2, cap, out)


def odd_p_classifier(desc: FamilyDescriptor, p: int, cap: Optional[int] = None) -> Classification:
    if not is_prime(p) or p == 2:
        raise ValueError(f"{p} is not an odd prime")
    cap = default_cap() if cap is None else cap
    out = Classification(str(desc), p, _predict_delta_odd(desc, p), characteristic=desc.characteristic())
    return _brute(desc, p, cap, out)
