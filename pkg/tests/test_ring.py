import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deltaring.dsl import build_ring
from deltaring.families import group_algebra, truncated_f2
from deltaring.ring import (
    CapExceeded,
    ForeignElement,
    NotAUnit,
    PresentationError,
    characteristic,
    enumerate_elements,
    ideal_closure,
    idempotents,
    injected_fault,
    inverse,
    is_unit,
    make_ring,
    mul,
    nilpotents,
    normal_form,
    power,
    product_ring,
    quotient_ring,
    unit_ideal,
    zero_ideal,
)

from oracles import PolyRing, brute_units, from_library, saturate_ideal


@pytest.fixture
def z4c2():
    return make_ring(4, [("x", 2, 1)])


@pytest.fixture
def dual2():
    return make_ring(2, [("t", 2, 0)])


@pytest.fixture
def gf4():
    return make_ring(2, [("x", 2, "x + 1")])


def test_make_ring_examples(z4c2, dual2, gf4):
    assert z4c2.labels == ("", "x") and z4c2.size == 16
    assert dual2.labels == ("", "t") and dual2.size == 4
    assert gf4.size == 4
    assert all(is_unit(a) for a in gf4.elements() if a)


def test_make_ring_rejects_bad_rules():
    with pytest.raises(PresentationError):
        make_ring(4, [("x", 2, (1, 0, 1))])
    with pytest.raises(PresentationError):
        make_ring(4, [("x", 2, "y + 1"), ("y", 2, 0)])
    with pytest.raises(PresentationError):
        make_ring(4, [("x", 2, 0), ("x", 3, 0)])


def test_monomial_order_is_graded():
    R = make_ring(3, [("x", 2, 0), ("y", 3, 0)])
    assert R.labels == ("", "x", "y", "x*y", "y^2", "x*y^2")


def test_mul_examples(z4c2, dual2):
    x = z4c2.gens()["x"]
    assert x * x == z4c2.one
    t = dual2.gens()["t"]
    assert mul(1 + t, 1 + t) == dual2.one
    z8 = make_ring(8, [("s", 2, 1)])
    s = z8.gens()["s"]
    assert str((1 + 2 * s) * (1 + 2 * s)) == "5 + 4*s"


def test_mixed_rings_rejected(z4c2, dual2):
    with pytest.raises(ForeignElement):
        mul(z4c2.one, dual2.one)
    with pytest.raises(ForeignElement):
        ideal_closure(z4c2, [dual2.one])


def test_pow_examples(z4c2, gf4):
    x = z4c2.gens()["x"]
    assert power(x, 2) == z4c2.one
    assert power(x, 0) == z4c2.one
    z4 = make_ring(4)
    assert power(z4.scalar(2), 2) == z4.zero
    assert power(1 + gf4.gens()["x"], 3) == gf4.one


def test_gf4_power_against_table(gf4):
    from oracles import gf_mul_table

    elems, omul = gf_mul_table(2, 2, (1, 1))
    for a in elems:
        acc = (1, 0)
        for _ in range(3):
            acc = omul(acc, a)
        assert power(gf4.from_coeffs(a), 3).coeffs == acc


def test_ideal_closure_examples(z4c2):
    assert ideal_closure(z4c2, []).is_zero()
    assert ideal_closure(z4c2, [z4c2.one]).is_unit_ideal()
    x = z4c2.gens()["x"]
    P = ideal_closure(z4c2, [z4c2.scalar(2), x - 1])
    assert P.size == 8
    pr = PolyRing(4, z4c2.variables)
    ref = saturate_ideal(pr, [from_library(z4c2, z4c2.scalar(2)), from_library(z4c2, x - 1)])
    assert len(ref) == 8
    assert {pr.key(from_library(z4c2, e)) for e in P.elements()} == ref


def test_quotient_examples(z4c2):
    x = z4c2.gens()["x"]
    assert quotient_ring(z4c2, zero_ideal(z4c2)).size == 16
    assert quotient_ring(z4c2, unit_ideal(z4c2)).size == 1
    P = ideal_closure(z4c2, [z4c2.scalar(2), x - 1])
    F2 = quotient_ring(z4c2, P)
    assert F2.size == 2
    assert normal_form(F2, 3 + x) == F2.zero
    assert normal_form(F2, z4c2.one) == F2.one
    for row in P.rows():
        assert normal_form(F2, row) == F2.zero


def test_quotient_of_quotient_flattens(z4c2):
    x = z4c2.gens()["x"]
    Q = quotient_ring(z4c2, ideal_closure(z4c2, [z4c2.scalar(2)]))
    QQ = quotient_ring(Q, ideal_closure(Q, [Q.image(x - 1)]))
    assert QQ.size == 2 and QQ.parent is z4c2


def test_normal_form_rejects_foreign(z4c2, dual2):
    F2 = quotient_ring(z4c2, ideal_closure(z4c2, [z4c2.scalar(2)]))
    with pytest.raises(ForeignElement):
        normal_form(F2, dual2.one)


def test_characteristic_examples(z4c2):
    assert characteristic(z4c2) == 4
    assert characteristic(quotient_ring(z4c2, ideal_closure(z4c2, [z4c2.scalar(2)]))) == 2
    assert characteristic(make_ring(3)) == 3
    assert characteristic(product_ring(make_ring(4), make_ring(6))) == 12


def test_enumerate_examples(dual2, z4c2):
    assert len(list(enumerate_elements(dual2))) == 4
    assert len(list(enumerate_elements(z4c2))) == 16
    z8 = make_ring(8, [("x", 2, 1), ("y", 2, 1)])
    assert sum(1 for _ in z8.element_tuples()) == 4096
    with pytest.raises(CapExceeded, match="4096"):
        list(enumerate_elements(z8, cap=1000))


def test_enumeration_order_is_canonical(z4c2):
    elems = [e.coeffs for e in z4c2.elements()]
    assert elems[:4] == [(0, 0), (1, 0), (2, 0), (3, 0)]
    assert len(set(elems)) == 16


def test_unit_examples(z4c2, dual2):
    assert is_unit(z4c2.one) and not is_unit(z4c2.zero)
    assert is_unit(z4c2.gens()["x"])
    t = dual2.gens()["t"]
    assert is_unit(1 + t) and inverse(1 + t) == 1 + t


def test_inverse_examples(gf4):
    z4 = make_ring(4)
    assert inverse(z4.one) == z4.one
    assert inverse(z4.scalar(3)) == z4.scalar(3)
    x = gf4.gens()["x"]
    assert inverse(x) == x + 1
    with pytest.raises(NotAUnit):
        inverse(z4.scalar(2))


def test_idempotent_examples(dual2):
    assert [str(e) for e in idempotents(dual2)] == ["0", "1"]
    assert len(idempotents(make_ring(3, [("s", 2, 1)]))) == 4
    assert len(idempotents(product_ring(make_ring(2), make_ring(2)))) == 4


def test_nilpotent_examples(dual2, z4c2):
    assert nilpotents(make_ring(3)).is_zero()
    t = dual2.gens()["t"]
    assert nilpotents(dual2) == ideal_closure(dual2, [t])
    x = z4c2.gens()["x"]
    N = nilpotents(z4c2)
    assert N == ideal_closure(z4c2, [z4c2.scalar(2), x - 1]) and N.size == 8


SMALL_RINGS = [
    ("Z4C2", lambda: make_ring(4, [("x", 2, 1)])),
    ("F2[t]/t^2", lambda: make_ring(2, [("t", 2, 0)])),
    ("Z6[x]/(x^2-x-1)", lambda: make_ring(6, [("x", 2, (1, 1))])),
    ("Z3[x]/(x^3)", lambda: make_ring(3, [("x", 3, 0)])),
    ("F2[x,y]/(x^2,y^2-1)", lambda: make_ring(2, [("x", 2, 0), ("y", 2, 1)])),
    ("Z8[x]/(x^2-2)", lambda: make_ring(8, [("x", 2, 2)])),
]


@pytest.mark.parametrize("name,factory", SMALL_RINGS)
def test_multiplication_matches_rewriting_oracle(name, factory):
    R = factory()
    pr = PolyRing(R.n, R.variables)
    elems = list(R.elements())
    for a in elems:
        for b in elems[:: max(1, len(elems) // 16)]:
            assert from_library(R, a * b) == pr.mul(from_library(R, a), from_library(R, b))


@pytest.mark.parametrize("name,factory", SMALL_RINGS)
def test_units_match_inverse_search(name, factory):
    R = factory()
    pr = PolyRing(R.n, R.variables)
    ref = {pr.key(u) for u in brute_units(pr)}
    got = {pr.key(from_library(R, a)) for a in R.elements() if is_unit(a)}
    assert got == ref


@pytest.mark.parametrize("name,factory", SMALL_RINGS)
def test_unit_multiplicativity_and_permutation(name, factory):
    R = factory()
    elems = list(R.elements())
    flags = {a: is_unit(a) for a in elems}
    for a, b in itertools.product(elems, repeat=2):
        assert flags[a * b] == (flags[a] and flags[b])
    for u in (a for a in elems if flags[a]):
        assert len({u * a for a in elems}) == len(elems)


LOCAL = ["Z4C2", "F2[t]/t^2", "Z3[x]/(x^3)", "F2[x,y]/(x^2,y^2-1)", "Z8[x]/(x^2-2)"]


@pytest.mark.parametrize("name,factory", [r for r in SMALL_RINGS if r[0] in LOCAL])
def test_local_units_are_complement_of_nilradical(name, factory):
    R = factory()
    N = nilpotents(R)
    assert len(idempotents(R)) == 2
    for a in R.elements():
        assert is_unit(a) == (a not in N)


@st.composite
def ring_and_elements(draw):
    n = draw(st.sampled_from([2, 3, 4, 6, 8, 12]))
    degs = draw(st.lists(st.integers(1, 3), min_size=1, max_size=2))
    rules = []
    for i, d in enumerate(degs):
        red = tuple(draw(st.integers(0, n - 1)) for _ in range(d))
        rules.append((f"v{i}", d, red))
    R = make_ring(n, rules)
    pick = st.lists(st.integers(0, n - 1), min_size=R.dim, max_size=R.dim)
    a, b, c = (R.from_coeffs(draw(pick)) for _ in range(3))
    return R, a, b, c


@settings(max_examples=150, deadline=None)
@given(ring_and_elements())
def test_ring_axioms(data):
    R, a, b, c = data
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * R.one == a
    assert a - a == R.zero
    assert power(a, 5) == a * a * a * a * a


@settings(max_examples=60, deadline=None)
@given(ring_and_elements())
def test_closure_idempotent_and_quotient_sizes(data):
    R, a, b, _ = data
    I = ideal_closure(R, [a, b])
    assert ideal_closure(R, I.rows()) == I
    Q = quotient_ring(R, I)
    assert I.size * Q.size == R.size
    assert normal_form(Q, a) == Q.zero
    for e in [a + b, a * b, R.one]:
        nf = normal_form(Q, e)
        assert normal_form(Q, Q.lift(nf)) == nf
    assert characteristic(R) == R.n and R.n % characteristic(Q) == 0


def test_product_ring_componentwise():
    A, B = make_ring(4), make_ring(3, [("s", 2, 1)])
    P = product_ring(A, B)
    assert P.size == 4 * 9
    u = P.inject(0, A.scalar(3)) + P.inject(1, B.one)
    assert is_unit(u) and power(u, 2) == P.one
    assert not is_unit(P.inject(0, A.one))
    assert P.component(u * u, 0) == A.one


def test_batch_mul_matches_scalar_mul():
    R = group_algebra(4, [2, 2])
    rng = np.random.default_rng(1)
    A = rng.integers(0, 4, (50, R.dim))
    B = rng.integers(0, 4, (50, R.dim))
    C = R.batch_mul(A, B)
    for a, b, c in zip(A, B, C):
        assert (R.from_coeffs(a) * R.from_coeffs(b)).coeffs == tuple(c)


def test_dsl_quotient_matches_residue_field():
    Q = build_ring("Z4[x]/(x^2-1)%(2, x-1)")
    assert Q.size == 2 and characteristic(Q) == 2


def test_local_hint_matches_full_scan():
    for R in (truncated_f2(2), group_algebra(4, [2]), group_algebra(8, [2])):
        m = R.local_maximal_ideal
        assert m is not None
        for a in R.elements():
            assert is_unit(a) == (a not in m)


def test_injected_fault_changes_the_table():
    clean = make_ring(4, [("x", 2, 1)])
    with injected_fault("mul"):
        broken = make_ring(4, [("x", 2, 1)])
    bx, cx = broken.gens()["x"], clean.gens()["x"]
    assert str(cx * cx) == "1"
    assert str(bx * bx) != "1"
