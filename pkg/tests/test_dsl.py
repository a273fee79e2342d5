import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deltaring.dsl import (
    SpecError,
    build_ring,
    format_polynomial,
    looks_like_family,
    parse_family,
    parse_polynomial,
    parse_ring_spec,
    prime_power,
)
from deltaring.ring import QuotientRing
from deltaring.units import units

CORPUS = [
    "Z2", "Z4", "Z24", "Z100", "F2", "F3", "F7", "GF(2)", "GF(4)", "GF(8)", "GF(9)", "GF(16)",
    "Z4[x]/(x^2-1)", "Z4[x]/(x^2 - 1)%(2, x - 1)", "Z8[x]/(x^2-1)", "F2[x]/(x^2)", "F2[x,y]/(x^2,y^2)",
    "F2[x1,x2,x3]/(x1^2, x2^2, x3^2)", "Z4[x,y]/(x^2-1, y^2-1)", "Z4[x,y]/(x^2-1, y^2-1)%(2+2x+2y+2x*y)",
    "F3[t]/(t^2+1)", "Z9[x]/(x^2-3)", "Z12[s]/(s^2-1)", "F2[a]/(a^3-1)", "F2[a]/(a^5 - 1)",
    "GF(4)[x]/(x^2)", "Z6[u]/(u^2 - u)", "F5[z]/(z^3 - 2z - 1)", "Z4[x]/((x+1)^2 - 2x - 2)",
    "product(F3, F2[t]/(t^2))", "product(Z4, Z3)", "F3^2", "product(F2, GF(4)^2)",
    "product(Z4[x]/(x^2-1), F3[x]/(x^2-1))", "product(F2[t]/(t^2)^2, F3)", "Z16[x]/(x^2 + 3x + 1)%(4)",
]


def test_corpus_size():
    assert len(CORPUS) >= 30


@pytest.mark.parametrize("text", CORPUS)
def test_round_trip(text):
    ast = parse_ring_spec(text)
    again = parse_ring_spec(str(ast))
    assert again == ast
    assert str(again) == str(ast)
    R = build_ring(text)
    assert R.size == build_ring(str(ast)).size


def test_spec_examples():
    R = build_ring("Z4[x]/(x^2-1)")
    assert R.size == 16 and R.variables == (("x", 2, (1, 0)),)
    Q = build_ring("Z4[x]/(x^2-1)%(2, x-1)")
    assert isinstance(Q, QuotientRing) and Q.size == 2
    with pytest.raises(SpecError) as exc:
        build_ring("Z[x]")
    assert exc.value.code == "E_MISSING_MODULUS"


@pytest.mark.parametrize("text,code,offset", [
    ("Z[x]", "E_MISSING_MODULUS", 0),
    ("Z4[x]/(y^2)", "E_UNKNOWN_IDENT", 7),
    ("Z4[x]/(2x^2-1)", "E_NON_MONIC", 7),
    ("Z4[x,y]/(x^2, x*y)", "E_NOT_UNIVARIATE", 14),
    ("Z4[x]/(x^2, x^3)", "E_DUPLICATE_RELATION", 12),
    ("Z4[x,y]/(x^2)", "E_MISSING_RELATION", 0),
    ("F4", "E_BAD_FIELD", 0),
    ("product(F3, GF(6))", "E_BAD_FIELD", 12),
    ("GF(4)[g]/(g^2)", "E_RESERVED", 0),
    ("Z4[x]/(x^2-1", "E_SYNTAX", 12),
    ("", "E_SYNTAX", 0),
    ("Z4[x]/(x^2 - 1) junk", "E_SYNTAX", 16),
    ("Z4[x,x]/(x^2)", "E_SYNTAX", 5),
    ("F3^0", "E_SYNTAX", 3),
])
def test_error_codes_and_offsets(text, code, offset):
    with pytest.raises(SpecError) as exc:
        build_ring(text)
    assert exc.value.code == code
    assert exc.value.offset == offset


def test_offsets_are_bytes():
    # the multi-byte character shifts the byte offset past the character offset
    with pytest.raises(SpecError) as exc:
        parse_ring_spec("Z4[x]/(x^2-µ)")
    assert exc.value.offset == 11


def test_distinct_codes_for_distinct_errors():
    codes = set()
    for text in ("Z[x]", "Z4[x]/(y)", "Z4[x]/(2x^2)"):
        with pytest.raises(SpecError) as exc:
            build_ring(text)
        codes.add(exc.value.code)
    assert len(codes) == 3


def test_field_generator_name():
    R = build_ring("GF(4)")
    assert [str(u) for u in units(R)] == ["1", "g", "1 + g"]


def test_prime_power():
    assert prime_power(8) == (2, 3) and prime_power(9) == (3, 2) and prime_power(7) == (7, 1)
    assert prime_power(12) is None and prime_power(1) is None


FAMILIES = ["f2", "f3", "truncated_f2(3)", "gf(3)", "group_algebra(12,[2])", "group_algebra(2,[2,2,2])",
            "z_family(4,2)", "product(f3^2, truncated_f2(1))", "product(f2, gf(2)^2)", "f3^4"]


@pytest.mark.parametrize("text", FAMILIES)
def test_family_round_trip(text):
    d = parse_family(text)
    assert str(d) == text and parse_family(str(d)) == d
    assert looks_like_family(text)


def test_family_spacing_normalizes():
    assert str(parse_family("group_algebra( 12 , [ 2 ] )")) == "group_algebra(12,[2])"
    assert not looks_like_family("Z4[x]/(x^2-1)")
    assert not looks_like_family("F2")


@pytest.mark.parametrize("text,code", [
    ("widget(3)", "E_UNKNOWN_IDENT"),
    ("truncated_f2(", "E_SYNTAX"),
    ("group_algebra(4,[])", "E_SYNTAX"),
    ("f3 f3", "E_SYNTAX"),
])
def test_family_errors(text, code):
    with pytest.raises(SpecError) as exc:
        parse_family(text)
    assert exc.value.code == code


def test_family_range_errors():
    for text in ("z_family(6,1)", "group_algebra(4,[1])", "gf(0)"):
        with pytest.raises(ValueError):
            parse_family(text)


VARS = ("x", "y", "z")
monomials = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
polys = st.dictionaries(monomials, st.integers(-20, 20).filter(bool), max_size=6)


@settings(max_examples=200, deadline=None)
@given(polys)
def test_polynomial_format_parse(poly):
    text = format_polynomial(tuple(sorted(poly.items())), VARS)
    assert parse_polynomial(text, VARS) == poly
