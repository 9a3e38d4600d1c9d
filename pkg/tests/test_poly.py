from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from conftest import VARS, monomial, polynomials
from terminal_flops.poly import (
    INFINITY,
    ParseError,
    PolyError,
    Polynomial,
    multiplicity,
    parse_poly,
    substitute,
    truncate,
    weighted_order,
)

P = lambda text: parse_poly(text, VARS)
SYMS = sympy.symbols(VARS)


def to_sympy(p: Polynomial):
    out = sympy.Integer(0)
    for exp, c in p.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(SYMS, exp):
            term *= s**e
        out += term
    return sympy.expand(out)


def test_parse_four_terms():
    p = P("x^2 + y^3 + z^5 + u^7")
    assert len(p) == 4
    assert all(c == 1 for c in p.terms.values())


def test_juxtaposition_is_product():
    p = P("xy + z^2")
    assert p.terms == {(1, 1, 0, 0): 1, (0, 0, 2, 0): 1}


def test_rational_coefficients():
    assert P("(1/2)*u^2 - z").terms == {(0, 0, 0, 2): Fraction(1, 2), (0, 0, 1, 0): -1}


def test_power_binds_before_juxtaposition():
    assert P("2xz^2") == P("2*x*z^2")


@pytest.mark.parametrize("text, pos", [("x + + y", 4), ("x^", 2), ("(x + y", 6), ("(1/0)", 0)])
def test_syntax_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as err:
        P(text)
    assert err.value.position == pos


def test_unknown_variable():
    with pytest.raises(ParseError, match="unknown variable 'w'"):
        P("x + w")


def test_substitute_examples():
    p = P("x^2 + y^2*z")
    assert substitute(p, {"z": P("z - u^2")}) == P("x^2 + y^2*z - y^2*u^2")
    assert substitute(p, {}) == p
    ring = VARS + ("t",)
    q = parse_poly("xy + z^2", ring)
    img = {v: parse_poly(f"{v}*t", ring) for v in "xyz"}
    assert substitute(q, img) == parse_poly("t^2*(xy + z^2)", ring)


def test_substitute_ring_mismatch():
    with pytest.raises(PolyError):
        substitute(P("x"), {"x": parse_poly("a", ("a",))}, target_vars=VARS)


def test_weighted_order_examples():
    assert weighted_order(P("x^2+y^3+z^5+u^7"), (3, 2, 2, 1)) == 6
    assert weighted_order(Polynomial.zero(VARS), (1, 1, 1, 1)) is INFINITY
    half = [Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1)]
    assert weighted_order(P("xy+z^2+u^2"), half) == 1
    with pytest.raises(PolyError):
        weighted_order(P("x"), (1, 1))


def test_truncate_examples():
    assert truncate(P("x^2+u^9"), 8) == P("x^2")
    p = P("x^2*y + z^3")
    assert truncate(p, 10) == p
    with pytest.raises(PolyError):
        truncate(p, -1)


def test_multiplicity_examples():
    assert multiplicity(P("z^4+u^6")) == 4
    assert multiplicity(P("1+x")) == 0
    assert multiplicity(P("yz^3+u^5")) == 4
    with pytest.raises(PolyError):
        multiplicity(Polynomial.zero(VARS))


def test_canonical_printer():
    assert str(P("u^2 - 3z + (1/2)xy + 1")) == "1 - 3*z + (1/2)*x*y + u^2"
    assert str(Polynomial.zero(VARS)) == "0"


@settings(max_examples=60, deadline=None)
@given(polynomials(), polynomials())
def test_arithmetic_matches_sympy(p, q):
    assert to_sympy(p + q) == sympy.expand(to_sympy(p) + to_sympy(q))
    assert to_sympy(p * q) == sympy.expand(to_sympy(p) * to_sympy(q))


@settings(max_examples=60, deadline=None)
@given(polynomials(), polynomials(), polynomials())
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert (p + q) - q == p


@settings(max_examples=80, deadline=None)
@given(polynomials())
def test_print_parse_fixed_point(p):
    assert P(str(p)) == p
    assert str(P(str(p))) == str(p)


@settings(max_examples=40, deadline=None)
@given(polynomials(max_terms=3, max_degree=3), polynomials(max_terms=3, max_degree=3),
       polynomials(max_terms=3, max_degree=2), polynomials(max_terms=3, max_degree=2))
def test_substitute_is_a_ring_map(p, q, a, b):
    img = {"x": a, "z": b}
    assert substitute(p + q, img) == substitute(p, img) + substitute(q, img)
    assert substitute(p * q, img) == substitute(p, img) * substitute(q, img)
    expected = to_sympy(p).subs({SYMS[0]: to_sympy(a), SYMS[2]: to_sympy(b)}, simultaneous=True)
    assert to_sympy(substitute(p, img)) == sympy.expand(expected)


weights = st.tuples(*[st.fractions(min_value=0, max_value=5, max_denominator=3)] * 4)


@settings(max_examples=80, deadline=None)
@given(polynomials(), polynomials(), weights)
def test_weighted_order_of_product(p, q, w):
    pq = weighted_order(p * q, w)
    if p.is_zero() or q.is_zero():
        assert pq is INFINITY
    else:
        assert pq >= weighted_order(p, w) + weighted_order(q, w)


@settings(max_examples=60, deadline=None)
@given(st.tuples(*[st.integers(0, 4)] * 4), st.tuples(*[st.integers(0, 4)] * 4), weights)
def test_weighted_order_additive_on_monomials(e1, e2, w):
    a, b = monomial(e1, 3), monomial(e2, -2)
    assert weighted_order(a * b, w) == weighted_order(a, w) + weighted_order(b, w)


@settings(max_examples=60, deadline=None)
@given(polynomials(), st.integers(0, 12))
def test_truncate_idempotent(p, k):
    t = truncate(p, k)
    assert truncate(t, k) == t
    assert all(sum(e) <= k for e in t.terms)


@given(st.fractions(max_denominator=10**6), st.fractions(max_denominator=10**6))
def test_exact_rationals(a, b):
    pa = Polynomial.constant(VARS, a)
    assert (pa + b) - b == pa
