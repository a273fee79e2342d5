import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deltaring.dsl import parse_family
from deltaring.families import (
    ConsistencyError,
    FamilyDescriptor,
    FieldConstructionError,
    WrongParent,
    build_family,
    classify_delta2,
    conway_like_reduction,
    delta2_quotient_criterion,
    eta_ideal_J,
    eta_ideal_J_bruteforce,
    f3,
    finite_field,
    gf,
    group_algebra,
    is_mersenne,
    maximal_ideal_P,
    odd_p_classifier,
    truncated_f2,
    z_family,
    z_parent,
)
from deltaring.ring import Ideal, QuotientRing, ideal_closure, idempotents, is_unit, make_ring, power
from deltaring.units import elementary_abelian_rank, is_delta_p, unit_exponent, units

from oracles import PolyRing, brute_units, from_library, gf_mul_table, saturate_ideal


def test_truncated_examples():
    assert truncated_f2(0).size == 2
    R = truncated_f2(1)
    assert R.size == 4 and is_delta_p(R, 2)[0]
    R = truncated_f2(2)
    assert R.size == 16 and len(list(units(R))) == 8 and elementary_abelian_rank(R, 2) == 3
    R = truncated_f2(3)
    assert R.size == 256 and all(power(u, 2) == R.one for u in units(R))


def test_group_algebra_examples():
    assert group_algebra(4, [2]).size == 16
    R = group_algebra(2, [3])
    assert R.size == 8 and len(list(units(R))) == 3 == len(brute_units(PolyRing(2, R.variables)))
    assert len(idempotents(group_algebra(3, [2]))) == 4
    with pytest.raises(ValueError):
        group_algebra(4, [1])
    with pytest.raises(ValueError):
        group_algebra(1, [2])


def test_gf_examples():
    R = gf(2)
    assert R.size == 4 and len(list(units(R))) == 3 and is_delta_p(R, 3)[0]
    R = gf(3)
    assert R.size == 8 and is_delta_p(R, 7)[0]
    R = gf(4)
    assert R.size == 16 and unit_exponent(R) == 15
    # 15 is not prime, so the failure shows as elements of order 3 and 5
    assert not is_delta_p(R, 3)[0] and not is_delta_p(R, 5)[0]


def test_gf_rejects_reducible_reduction():
    with pytest.raises(FieldConstructionError):
        gf(2, reduction=(1, 0))  # x^2 = 1 is (x+1)^2
    assert gf(2, reduction=(1, 1)).size == 4


@pytest.mark.parametrize("p,m", [(2, 2), (2, 3), (2, 4), (3, 2), (5, 2)])
def test_default_reductions_give_fields(p, m):
    red = conway_like_reduction(p, m)
    elems, mul = gf_mul_table(p, m, red)
    zero = (0,) * m
    one = (1,) + (0,) * (m - 1)
    for a in elems:
        if a != zero:
            assert any(mul(a, b) == one for b in elems)
    assert finite_field(p ** m).size == p ** m


def test_maximal_ideal_examples():
    for char, l, size in ((4, 1, 8), (4, 2, 128), (8, 1, 32)):
        R = z_parent(char, l)
        P = maximal_ideal_P(R)
        assert P.size == size == R.size // 2
        pr = PolyRing(R.n, R.variables)
        gens = [from_library(R, g) for g in [R.scalar(2)] + [x - R.one for x in R.gens().values()]]
        assert len(saturate_ideal(pr, gens)) == size
    with pytest.raises(WrongParent):
        maximal_ideal_P(group_algebra(3, [2]))
    with pytest.raises(WrongParent):
        maximal_ideal_P(group_algebra(4, [3]))


def test_eta_ideal_examples():
    R = z_parent(4, 1)
    assert eta_ideal_J(R, maximal_ideal_P(R)).is_zero()
    R = z_parent(4, 2)
    J = eta_ideal_J(R, maximal_ideal_P(R))
    assert not J.is_zero()
    assert [str(e) for e in J.elements()] == ["0", "2 + 2*x1 + 2*x2 + 2*x1*x2"]
    R = z_parent(8, 1)
    Q = QuotientRing(R, eta_ideal_J(R, maximal_ideal_P(R)))
    assert is_delta_p(Q, 2)[0]


def test_eta_ideal_over_z8_is_not_zero_at_l1():
    # (x + 1)(x + 3) = 4 + 4x in Z8[x]/(x^2 - 1), and x + 1 lies in P
    R = z_parent(8, 1)
    J = eta_ideal_J(R, maximal_ideal_P(R))
    assert [str(e) for e in J.elements()] == ["0", "4 + 4*x"]
    assert not is_delta_p(R, 2)[0]


@pytest.mark.parametrize("char,l", [(4, 1), (4, 2), (8, 1)])
def test_eta_ideal_matches_oracle(char, l):
    R = z_parent(char, l)
    P = maximal_ideal_P(R)
    J = eta_ideal_J(R, P)
    assert J == eta_ideal_J_bruteforce(R, P)
    pr = PolyRing(R.n, R.variables)
    gens = []
    for e in P.elements():
        a = from_library(R, e)
        gens.append(pr.mul(a, pr.add(a, {(0,) * l: 2})))
    assert len(saturate_ideal(pr, gens)) == J.size


def test_eta_ideal_rejects_foreign_P():
    R = z_parent(4, 1)
    with pytest.raises(WrongParent):
        eta_ideal_J(R, maximal_ideal_P(z_parent(4, 1)))


@pytest.mark.parametrize("char,l,size", [(4, 1, 16), (4, 2, 128), (8, 1, 32)])
def test_z_family_examples_are_local_delta2(char, l, size):
    R = z_family(char, l)
    assert R.size == size
    assert is_delta_p(R, 2)[0]
    assert len(idempotents(R)) == 2
    # the local shortcut agrees with a plain scan
    assert sum(1 for _ in units(R)) == sum(1 for a in R.elements() if is_unit(a))


def test_z_family_cap():
    from deltaring.ring import CapExceeded

    with pytest.raises(CapExceeded):
        z_family(8, 3)
    with pytest.raises(CapExceeded):
        z_family(4, 2, cap=100)


def test_quotient_criterion_examples():
    R = z_parent(4, 2)
    P = maximal_ideal_P(R)
    J = eta_ideal_J(R, P)
    assert delta2_quotient_criterion(R, J)
    assert not delta2_quotient_criterion(R, ideal_closure(R, []))
    assert delta2_quotient_criterion(R, P)
    with pytest.raises(WrongParent):
        delta2_quotient_criterion(R, eta_ideal_J(z_parent(4, 1), maximal_ideal_P(z_parent(4, 1))))


def test_quotient_criterion_on_every_ideal_of_z4c2():
    from deltaring.lattice import enumerate_ideals

    R = z_parent(4, 1)
    rep = enumerate_ideals(R)
    for I in rep.ideals:
        assert delta2_quotient_criterion(R, I) == is_delta_p(QuotientRing(R, I), 2)[0]


def test_mersenne():
    assert is_mersenne(3) and is_mersenne(7) and is_mersenne(31)
    assert not is_mersenne(11) and not is_mersenne(2) and not is_mersenne(15)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 5000))
def test_mersenne_against_definition(p):
    prime = all(p % d for d in range(2, int(p ** 0.5) + 1))
    assert is_mersenne(p) == (prime and p > 2 and bin(p + 1).count("1") == 1)


def _cls(text, p=2):
    d = parse_family(text)
    return classify_delta2(d) if p == 2 else odd_p_classifier(d, p)


def test_classify_examples():
    c = _cls("group_algebra(6,[2])")
    assert c.predicted and c.brute and c.agree
    c = _cls("group_algebra(24,[2])")
    assert not c.predicted and not c.brute and c.witness == "1 + 6*x"
    R = group_algebra(24, [2])
    assert str(power(R.gens()["x"] * R.scalar(6) + R.one, 2)) == "13 + 12*x"
    c = _cls("group_algebra(2,[7])", 7)
    assert c.predicted and c.brute


def test_odd_p_examples():
    c = _cls("product(f2, gf(2)^2)", 3)
    assert c.predicted and c.brute
    c = _cls("group_algebra(2,[5])", 5)
    assert not c.predicted and not c.brute
    R = group_algebra(2, [5])
    w = R.parse(c.witness)
    assert power(w, 15) == R.one and power(w, 5) != R.one
    c = _cls("f3", 3)
    assert not c.predicted and not c.brute and c.witness == "2"


def test_classification_scope_note():
    assert _cls("product(f3^2, truncated_f2(1))").notes
    assert not _cls("f3").notes


DESCRIPTORS = [
    "f2", "f3", "truncated_f2(1)", "truncated_f2(2)", "truncated_f2(3)", "gf(2)", "gf(3)", "gf(4)",
    "group_algebra(2,[2])", "group_algebra(2,[2,2])", "group_algebra(3,[2])", "group_algebra(3,[2,2])",
    "group_algebra(4,[2])", "group_algebra(4,[2,2])", "group_algebra(6,[2])", "group_algebra(8,[2])",
    "group_algebra(12,[2])", "group_algebra(24,[2])", "group_algebra(2,[3])", "group_algebra(2,[4])",
    "group_algebra(5,[2])", "z_family(4,1)", "z_family(4,2)", "z_family(8,1)",
    "product(f3, z_family(4,2))", "product(f3^2, truncated_f2(1))", "product(f2, gf(2)^2)", "gf(2)^3",
]


@pytest.mark.parametrize("text", DESCRIPTORS)
def test_prediction_agrees_with_brute_force(text):
    c = _cls(text)
    assert c.brute is not None and c.agree, (text, c)
    for p in (3, 5, 7):
        c = _cls(text, p)
        assert c.brute is None or c.agree, (text, p, c)


@pytest.mark.parametrize("text", DESCRIPTORS)
def test_descriptor_round_trip(text):
    d = parse_family(text)
    assert str(d) == text
    assert parse_family(str(d)) == d


def test_descriptor_validation():
    with pytest.raises(ValueError):
        FamilyDescriptor("z_family", (6, 1))
    with pytest.raises(ValueError):
        FamilyDescriptor("gf", (0,))
    with pytest.raises(ValueError):
        FamilyDescriptor("mystery")


def test_unverified_when_over_cap():
    c = classify_delta2(parse_family("group_algebra(4,[2,2,2])"), cap=1000)
    assert c.brute is None and not c.predicted and c.agree


def test_group_algebra_delta2_case_list():
    expected = {(2, 1): True, (2, 2): True, (2, 3): True, (3, 1): True, (3, 2): True, (3, 3): True,
                (4, 1): True, (4, 2): False, (6, 1): True, (6, 2): True, (8, 1): False, (12, 1): True,
                (12, 2): False, (24, 1): False}
    for (n, r), want in expected.items():
        R = group_algebra(n, [2] * r)
        assert is_delta_p(R, 2)[0] == want, (n, r)


def test_product_consistency_z12():
    a = sum(1 for _ in units(group_algebra(12, [2])))
    b = build_family(parse_family("product(group_algebra(4,[2]), group_algebra(3,[2]))"))
    assert a == sum(1 for _ in units(b)) == 32


def test_f3_units():
    assert f3().size == 3 == make_ring(3).size
    assert [str(u) for u in units(f3())] == ["1", "2"]


def test_criterion_cross_check_raises_on_disagreement(monkeypatch):
    import deltaring.families as fam

    R = z_parent(4, 1)
    # pretend the polarization generators produced a too-large ideal
    monkeypatch.setattr(fam, "eta_ideal_J", lambda ring, P: Ideal.from_rows(ring, P.basis.rows))
    with pytest.raises(ConsistencyError):
        delta2_quotient_criterion(R, ideal_closure(R, []))
