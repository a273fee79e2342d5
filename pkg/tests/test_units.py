import pytest

from deltaring.dsl import build_ring
from deltaring.families import finite_field, gf, group_algebra, truncated_f2
from deltaring.ring import CapExceeded, is_unit, make_ring, power, product_ring
from deltaring.units import (
    UnitGroupReport,
    elementary_abelian_rank,
    is_delta_p,
    least_witness,
    unit_exponent,
    unit_group_report,
    units,
)

from oracles import PolyRing, brute_units, zn_units


def test_units_examples():
    assert len(list(units(make_ring(24)))) == 8 == len(zn_units(24))
    assert [str(u) for u in units(truncated_f2(1))] == ["1", "1 + x"]
    z4c2 = group_algebra(4, [2])
    got = {str(u) for u in units(z4c2)}
    # e, sigma, 3sigma, e + 2sigma, 3e, 3e + 2sigma, 2e + sigma, 2e + 3sigma
    assert got == {"1", "x", "3*x", "1 + 2*x", "3", "3 + 2*x", "2 + x", "2 + 3*x"}


def test_delta_examples():
    assert is_delta_p(make_ring(24), 2) == (True, None)
    ok, w = is_delta_p(group_algebra(8, [2]), 2)
    assert not ok and str(w) == "1 + 2*x"
    assert is_delta_p(gf(2), 3)[0]
    ok, w = is_delta_p(group_algebra(4, [2, 2]), 2)
    assert not ok and str(w) == "1 + x1 + x2"
    assert str(power(w, 2)) == "3 + 2*x1 + 2*x2 + 2*x1*x2"


def test_delta_rejects_composite_and_cap():
    with pytest.raises(ValueError):
        is_delta_p(make_ring(4), 4)
    with pytest.raises(CapExceeded):
        is_delta_p(group_algebra(4, [2, 2]), 2, cap=100)


def test_rank_examples():
    assert elementary_abelian_rank(make_ring(3), 2) == 1
    assert elementary_abelian_rank(truncated_f2(2), 2) == 3
    assert elementary_abelian_rank(group_algebra(4, [2]), 2) == 3
    assert elementary_abelian_rank(make_ring(5), 2) is None


def test_exponent_examples():
    assert unit_exponent(make_ring(8)) == 2
    assert unit_exponent(gf(2)) == 3
    assert unit_exponent(make_ring(5)) == 4
    assert unit_exponent(gf(4)) == 15


def test_units_match_brute_force_search():
    for R in (make_ring(12), group_algebra(3, [2]), group_algebra(2, [3]), truncated_f2(2)):
        pr = PolyRing(R.n, R.variables)
        assert len(list(units(R))) == len(brute_units(pr))


def test_local_shortcut_matches_full_scan():
    for R in (truncated_f2(3), group_algebra(4, [2, 2]), group_algebra(8, [2])):
        fast = [u.coeffs for u in units(R)]
        slow = [a.coeffs for a in R.elements() if is_unit(a)]
        assert fast == slow


def test_unit_count_plus_nonunits():
    for R in (make_ring(24), group_algebra(6, [2]), build_ring("Z9[x]/(x^2-3)")):
        us = sum(1 for _ in units(R))
        rest = sum(1 for a in R.elements() if not is_unit(a))
        assert us + rest == R.size


def test_delta_p_multiplicative_on_products():
    rings = [make_ring(3), make_ring(8), group_algebra(4, [2]), group_algebra(8, [2]), gf(2), make_ring(5)]
    for p in (2, 3):
        for A in rings:
            for B in rings:
                P = product_ring(A, B)
                assert is_delta_p(P, p)[0] == (is_delta_p(A, p)[0] and is_delta_p(B, p)[0])


def test_report_and_witness_checks():
    rep = unit_group_report(group_algebra(8, [2]), (2, 3))
    assert rep.order == 32 and rep.delta_p == {2: False, 3: False}
    assert str(rep.witness) == "1 + 2*x" and rep.witness_prime == 2
    assert '"witness": "1 + 2*x"' in rep.to_json()
    rep = unit_group_report(truncated_f2(2))
    assert rep.ea_rank == (2, 3) and rep.witness is None
    R = make_ring(8)
    with pytest.raises(ValueError):
        UnitGroupReport("Z8", 4, 2, True, {2: False}, None, None)
    with pytest.raises(ValueError):
        UnitGroupReport("Z8", 4, 2, True, {2: False}, None, R.one, 2)
    with pytest.raises(ValueError):
        UnitGroupReport("Z8", 8, 2, True, {2: True}, (2, 2))


def test_least_witness_merges_partitions():
    R = group_algebra(4, [2, 2])
    us = [u for u in units(R) if power(u, 2) != R.one]
    # each half picks its own least failing unit; the merge must not depend on the split
    halves = [least_witness(us[i::2]) for i in (0, 1)]
    assert str(least_witness(halves)) == str(least_witness(us)) == "1 + x1 + x2"
    assert least_witness([None, None]) is None


def test_characteristic_of_delta2_rings_divides_24():
    from deltaring.ring import characteristic

    for n in range(2, 49):
        R = make_ring(n)
        if is_delta_p(R, 2)[0]:
            assert 24 % characteristic(R) == 0
    assert finite_field(9).size == 9
