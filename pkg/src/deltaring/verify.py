"""The end-to-end verification suite behind ``deltaring verify-paper``.

Each check recomputes a published count or classification from scratch and
compares it with the expected value. Checks never raise; an exception is
recorded as a failure of that check.
"""

from __future__ import annotations

import time
import traceback
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .families import (
    classify_delta2,
    delta2_quotient_criterion,
    eta_ideal_J,
    eta_ideal_J_bruteforce,
    finite_field,
    group_algebra,
    maximal_ideal_P,
    odd_p_classifier,
    truncated_f2,
    z_family,
    z_parent,
)
from .lattice import (
    count_antichains,
    enumerate_ideals,
    export_dot,
    ideal_label,
    is_monomial_ideal,
)
from .path_algebra import (
    PathAlgebra,
    all_quivers,
    brute_unit_mask,
    pa_is_delta_p,
    parse_quiver,
)
from .ring import ideal_closure, make_ring, power, product_ring
from .units import elementary_abelian_rank, is_delta_p, unit_order, units

LATTICE_COUNTS = {1: 3, 2: 7, 3: 47, 4: 4979}
DEDEKIND = {1: 3, 2: 6, 3: 20, 4: 168, 5: 7581, 6: 7828354}
HASSE_L2_LABELS = {"(0)", "(x1*x2)", "(x1)", "(x2)", "(x1 + x2)", "(x1, x2)", "(1)"}
EXAMPLE_QUIVER = "5; 0->1 2->1 2->3 4->3"


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""
    counts: dict = field(default_factory=dict)
    witnesses: list[str] = field(default_factory=list)
    seconds: float = 0.0


@dataclass
class Context:
    fast: bool = False
    seed: int = 0
    cap: Optional[int] = None


def _result(name, ok, detail="", counts=None, witnesses=None) -> CheckResult:
    return CheckResult(name, bool(ok), detail, counts or {}, witnesses or [])


# individual checks ------------------------------------------------------------

def check_lattice_counts(ctx: Context) -> CheckResult:
    top = 3 if ctx.fast else 4
    got = {l: enumerate_ideals(truncated_f2(l)).count for l in range(1, top + 1)}
    want = {l: LATTICE_COUNTS[l] for l in got}
    detail = "ideal counts " + ", ".join(str(got[l]) for l in sorted(got))
    return _result("ideal-lattice-counts", got == want, detail, {f"l={l}": c for l, c in got.items()})


def check_dedekind(ctx: Context) -> CheckResult:
    top = 5 if ctx.fast else 6
    got = {l: count_antichains(l) for l in range(1, top + 1)}
    want = {l: DEDEKIND[l] for l in got}
    detail = "antichain counts " + ", ".join(str(got[l]) for l in sorted(got))
    return _result("dedekind-numbers", got == want, detail, {f"l={l}": c for l, c in got.items()})


def check_hasse_l2(ctx: Context) -> CheckResult:
    report = enumerate_ideals(truncated_f2(2))
    monomial = sum(1 for I in report.ideals if is_monomial_ideal(I))
    labels = {ideal_label(I) for I in report.ideals}
    dot = export_dot(report)
    edges = dot.count("->")
    ok = len(report.covers) == 8 and edges == 8 and monomial == 6 and labels == HASSE_L2_LABELS
    return _result("hasse-diagram-l2", ok, f"{len(report.covers)} covers, {monomial} monomial ideals",
                   {"covers": len(report.covers), "monomial": monomial, "ideals": report.count},
                   sorted(labels))


def check_zn(ctx: Context) -> CheckResult:
    wrong = []
    for n in range(2, 101):
        ok, _ = is_delta_p(make_ring(n), 2, ctx.cap)
        if ok != (24 % n == 0):
            wrong.append(n)
    return _result("zn-delta2-iff-n-divides-24", not wrong, f"mismatches: {wrong}" if wrong else "n = 2..100",
                   {"mismatches": len(wrong)})


def _group_algebra_grid(cap):
    for n in (2, 3, 4, 6, 8, 12, 24):
        for r in (1, 2, 3):
            if n ** (2 ** r) > (cap or (1 << 20)):
                continue
            yield n, r


def check_group_algebras(ctx: Context) -> CheckResult:
    bad = []
    tested = 0
    for n, r in _group_algebra_grid(ctx.cap):
        R = group_algebra(n, [2] * r)
        ok, w = is_delta_p(R, 2, ctx.cap)
        predicted = n in (2, 3, 6) or (n in (4, 12) and r == 1)
        tested += 1
        if ok != predicted:
            bad.append(f"n={n} r={r}")
    wits = []
    for n, orders, text, square in ((8, [2], "1 + 2*x", "5 + 4*x"),
                                    (24, [2], "1 + 6*x", "13 + 12*x"),
                                    (4, [2, 2], "1 + x1 + x2", "3 + 2*x1 + 2*x2 + 2*x1*x2")):
        R = group_algebra(n, orders)
        _, w = is_delta_p(R, 2, ctx.cap)
        got = (str(w), str(power(w, 2)) if w is not None else None)
        wits.append(f"{R.name}: {got[0]} -> {got[1]}")
        if got != (text, square):
            bad.append(f"witness in {R.name}: {got}")
    return _result("group-algebra-delta2", not bad, "; ".join(bad) or f"{tested} algebras match",
                   {"algebras": tested, "failures": len(bad)}, wits)


def check_fields(ctx: Context) -> CheckResult:
    """Delta_2 exactly for F2, F3 (q <= 16); Delta_3 for F4; Delta_7 for F8; Delta_5 fails for every q <= 32."""
    from .dsl import prime_power

    qs = [q for q in range(2, 33) if prime_power(q)]
    fields = {q: finite_field(q) for q in qs}
    bad = []
    d2 = [q for q in qs if q <= 16 and is_delta_p(fields[q], 2)[0]]
    if d2 != [2, 3]:
        bad.append(f"Delta_2 holds for {d2}")
    if not is_delta_p(fields[4], 3)[0]:
        bad.append("F4 not Delta_3")
    if not is_delta_p(fields[8], 7)[0]:
        bad.append("F8 not Delta_7")
    d5 = [q for q in qs if is_delta_p(fields[q], 5)[0]]
    if d5:
        bad.append(f"Delta_5 holds for F_q, q in {d5}")
    return _result("finite-field-delta-p", not bad, "; ".join(bad) or "all field verdicts as expected",
                   {"fields": len(qs)})


def check_odd_group_algebras(ctx: Context) -> CheckResult:
    bad, wits = [], []
    f2c3 = group_algebra(2, [3])
    if not is_delta_p(f2c3, 3)[0] or elementary_abelian_rank(f2c3, 3) != 1:
        bad.append("F2C3 is not Delta_3 of rank 1")
    if not is_delta_p(group_algebra(2, [7]), 7)[0]:
        bad.append("F2C7 is not Delta_7")
    f2c5 = group_algebra(2, [5])
    ok, w = is_delta_p(f2c5, 5)
    if ok:
        bad.append("F2C5 is Delta_5")
    else:
        n = sum(1 for _ in units(f2c5))
        order = unit_order(w, n)
        wits.append(f"{w} of order {order}")
        if 15 % order or order == 5:
            bad.append(f"witness {w} has order {order}")
    return _result("odd-p-group-algebras", not bad, "; ".join(bad) or "F2C3, F2C7, F2C5 as expected",
                   witnesses=wits)


def _random_ideal(parent, P_rows, rng: np.random.Generator):
    """Closure of one to three random elements of the maximal ideal (or, rarely, of anything)."""
    gens = []
    for _ in range(int(rng.integers(1, 4))):
        if rng.random() < 0.1:
            gens.append(parent.from_coeffs(rng.integers(0, parent.n, parent.dim)))
        else:
            acc = parent.zero
            for b in P_rows:
                acc = acc + b * int(rng.integers(0, parent.n))
            gens.append(acc)
    return ideal_closure(parent, gens)


def check_quotient_criterion(ctx: Context) -> CheckResult:
    rng = np.random.default_rng(ctx.seed)
    disagreements = 0
    tested = 0
    p1 = z_parent(4, 1)
    for I in enumerate_ideals(p1).ideals:
        tested += 1
        try:
            delta2_quotient_criterion(p1, I, ctx.cap)
        except AssertionError:
            disagreements += 1
    full = tested
    p2 = z_parent(4, 2)
    P_rows = maximal_ideal_P(p2).rows()
    for _ in range(120):
        tested += 1
        try:
            delta2_quotient_criterion(p2, _random_ideal(p2, P_rows, rng), ctx.cap)
        except AssertionError:
            disagreements += 1
    return _result("z4-quotient-criterion", disagreements == 0,
                   f"{disagreements} disagreements over {tested} ideals",
                   {"full_lattice": full, "random": tested - full, "disagreements": disagreements})


def check_eta_ideal(ctx: Context) -> CheckResult:
    bad = []
    for l in (1, 2, 3):
        R = z_parent(4, l)
        J = eta_ideal_J(R, maximal_ideal_P(R))
        if J.is_zero() != (l == 1):
            bad.append(f"Z4 l={l}: J size {J.size}")
    for c in (4, 8):
        for l in (1, 2):
            R = z_parent(c, l)
            P = maximal_ideal_P(R)
            if eta_ideal_J(R, P) != eta_ideal_J_bruteforce(R, P):
                bad.append(f"Z{c} l={l}: generating set differs from brute closure")
    return _result("eta-ideal-J", not bad, "; ".join(bad) or "zero at l=1, nonzero at l=2,3; closures agree")


def check_path_algebras(ctx: Context) -> CheckResult:
    bad = []
    quivers = all_quivers(4, 4)
    unit_checks = 0
    for Q in quivers:
        for q in (2, 3, 4, 5, 7, 8, 9):
            alg = PathAlgebra(Q, q)
            if alg.size > 1 << 10:
                continue
            unit_checks += 1
            E = alg.elements()
            crit = (E[:, :Q.vertices] != 0).all(axis=1)
            if (brute_unit_mask(alg, 1 << 10) != crit).any():
                bad.append(f"unit criterion fails for {alg.name}")
    sweeps = 0
    for Q in quivers:
        for q in (2, 3):
            res = pa_is_delta_p(PathAlgebra(Q, q), 2, ctx.cap)
            sweeps += 1
            if res.brute is None or not res.agree:
                bad.append(f"Delta_2 verdicts differ for {res.algebra}")
    ex = pa_is_delta_p(PathAlgebra(parse_quiver(EXAMPLE_QUIVER), 2), 2, ctx.cap)
    if not (ex.structural and ex.brute):
        bad.append("example quiver over F2 is not Delta_2")
    return _result("path-algebras", not bad, "; ".join(bad[:5]) or f"{unit_checks} unit tables, {sweeps} sweeps",
                   {"unit_tables": unit_checks, "sweeps": sweeps, "quivers": len(quivers)})


def _commute_all(ring, us) -> bool:
    U = np.array([u.coeffs for u in us], dtype=np.int64)
    n = U.shape[0]
    A = np.repeat(U, n, axis=0)
    B = np.tile(U, (n, 1))
    return bool((ring.batch_mul(A, B) == ring.batch_mul(B, A)).all())


def check_delta2_abelian(ctx: Context) -> CheckResult:
    rings = [make_ring(n) for n in (2, 3, 4, 6, 8, 12, 24)]
    rings += [truncated_f2(l) for l in (1, 2, 3)]
    rings += [group_algebra(n, [2] * r) for n, r in ((2, 1), (2, 2), (3, 1), (3, 2), (4, 1), (6, 1), (12, 1))]
    rings += [z_family(c, l, ctx.cap) for c, l in ((4, 1), (4, 2), (8, 1), (8, 2))]
    rings += [finite_field(q) for q in (2, 3)]
    tested, bad = 0, []
    for R in rings:
        if not is_delta_p(R, 2, ctx.cap)[0]:
            continue
        us = list(units(R, ctx.cap))
        if len(us) > 256:
            continue
        tested += 1
        if not _commute_all(R, us):
            bad.append(R.name)
    for Q in all_quivers(4, 4):
        alg = PathAlgebra(Q, 2)
        res = pa_is_delta_p(alg, 2, ctx.cap)
        if res.brute and alg.unit_count <= 256:
            tested += 1
            if not res.abelian:
                bad.append(alg.name)
    return _result("delta2-units-commute", not bad, f"{tested} rings checked" if not bad else f"noncommuting: {bad}",
                   {"rings": tested, "failures": len(bad)})


def check_classifications(ctx: Context) -> CheckResult:
    from .dsl import parse_family

    cases = [
        ("group_algebra(6,[2])", 2, True),
        ("group_algebra(24,[2])", 2, False),
        ("product(f3^2, truncated_f2(1))", 2, True),
        ("product(f3, z_family(4,1))", 2, True),
        ("z_family(8,1)", 2, True),
        ("group_algebra(2,[7])", 7, True),
        ("product(f2, gf(2)^2)", 3, True),
        ("group_algebra(2,[5])", 5, False),
        ("f3", 3, False),
    ]
    bad = []
    for text, p, want in cases:
        d = parse_family(text)
        c = classify_delta2(d, ctx.cap) if p == 2 else odd_p_classifier(d, p, ctx.cap)
        if c.predicted != want or c.brute != want:
            bad.append(f"{text} p={p}: predicted {c.predicted}, brute {c.brute}")
    direct = sum(1 for _ in units(group_algebra(12, [2])))
    split = product_ring(group_algebra(4, [2]), group_algebra(3, [2]))
    via_product = sum(1 for _ in units(split))
    if direct != via_product:
        bad.append(f"Z12C2 has {direct} units, Z4C2 x Z3C2 has {via_product}")
    return _result("family-classification", not bad, "; ".join(bad) or f"{len(cases)} descriptors agree",
                   {"descriptors": len(cases), "z12c2_units": direct})


CHECKS: list[tuple[str, Callable[[Context], CheckResult]]] = [
    ("ideal-lattice-counts", check_lattice_counts),
    ("dedekind-numbers", check_dedekind),
    ("hasse-diagram-l2", check_hasse_l2),
    ("zn-delta2-iff-n-divides-24", check_zn),
    ("group-algebra-delta2", check_group_algebras),
    ("finite-field-delta-p", check_fields),
    ("odd-p-group-algebras", check_odd_group_algebras),
    ("z4-quotient-criterion", check_quotient_criterion),
    ("eta-ideal-J", check_eta_ideal),
    ("path-algebras", check_path_algebras),
    ("delta2-units-commute", check_delta2_abelian),
    ("family-classification", check_classifications),
]


def run_check(name: str, fn: Callable[[Context], CheckResult], ctx: Context) -> CheckResult:
    start = time.perf_counter()
    try:
        res = fn(ctx)
    except Exception as exc:  # a crashing check is a failing check
        last = traceback.format_exception_only(type(exc), exc)[-1].strip()
        res = CheckResult(name, False, f"error: {last}")
    res.seconds = time.perf_counter() - start
    return res


def verify_paper(fast: bool = False, seed: int = 0, cap: Optional[int] = None) -> list[CheckResult]:
    ctx = Context(fast, seed, cap)
    return [run_check(name, fn, ctx) for name, fn in CHECKS]
