"""Core superalgebra: products, signs, derivatives, text round trip.

Every frozen value below was computed by hand from the sign conventions
(odd factors in increasing order, left derivative for odd variables)
before the implementation existed.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kdvcohom.algebra import (
    Bidegree,
    DiffPoly,
    Monomial,
    ONE,
    ZERO,
    bidegree,
    dtot,
    format_poly,
    lam_var,
    mono,
    mul,
    parse_poly,
    partial,
    poly,
    subst_lam,
    theta,
    u_jet,
)


# -- monomial bookkeeping --------------------------------------------------


def test_mono_normalizes_and_validates():
    m = mono(even=[(2, 1), (1, 2)], odd=[3, 0])
    assert m.even == ((1, 2), (2, 1))
    assert m.odd == (0, 3)
    with pytest.raises(ValueError):
        mono(odd=[1, 1])
    with pytest.raises(ValueError):
        mono(even=[(0, 1)])
    with pytest.raises(ValueError):
        mono(lam=-1)


def test_gradations():
    m = mono(lam=2, u0=1, even=[(1, 2), (3, 1)], odd=[0, 2])
    # d counts jet orders with multiplicity, p counts odd factors
    assert m.degree() == 2 * 1 + 3 + 0 + 2
    assert m.super_degree() == 2
    assert m.bidegree() == Bidegree(2, 7)
    assert m.max_jet() == 3
    assert m.ucount() == 2 + 1 + 3


def test_window_membership():
    m = mono(lam=2, u0=3)
    assert m.in_window(3, 2)
    assert not m.in_window(2, 2)
    assert not m.in_window(3, 1)


def test_canonical_term_order():
    # sort key is (lam, u0, even, odd)
    ms = [poly(s).monomials()[0] for s in ("l t1", "u t1", "t1", "l u")]
    assert sorted(ms) == [poly(s).monomials()[0] for s in ("t1", "u t1", "l t1", "l u")]


# -- products and Koszul signs ----------------------------------------------


def test_odd_product_signs():
    assert theta(1) * theta(0) == poly("-1 t0 t1")
    assert theta(0) * theta(1) == poly("t0 t1")
    assert theta(0) * theta(0) == ZERO
    assert poly("u t1") * poly("u1 t0") == poly("-1 u u1 t0 t1")
    # three factors: t2 t0 t1 needs two transpositions
    assert theta(2) * poly("t0 t1") == poly("t0 t1 t2")
    assert poly("t1 t2") * theta(0) == poly("t0 t1 t2")


def test_even_factors_commute():
    a = poly("1/2 u u1")
    b = poly("l u2")
    assert a * b == b * a == poly("1/2 l u u1 u2")


st_monomial = st.builds(
    lambda lam, u0, evs, odd: mono(lam=lam, u0=u0,
                                   even=[(s, e) for s, e in evs.items()],
                                   odd=odd),
    st.integers(0, 2),
    st.integers(0, 2),
    st.dictionaries(st.integers(1, 3), st.integers(1, 2), max_size=2),
    st.sets(st.integers(0, 3), max_size=2).map(sorted),
)

st_poly = st.lists(
    st.tuples(st_monomial, st.fractions(max_denominator=6)), max_size=3
).map(lambda ts: DiffPoly({m: c for m, c in ts}))


@given(st_monomial, st_monomial)
def test_graded_commutativity(m1, m2):
    a, b = DiffPoly.monomial(m1), DiffPoly.monomial(m2)
    sign = -1 if (m1.super_degree() * m2.super_degree()) % 2 else 1
    assert a * b == sign * (b * a)


@settings(max_examples=60)
@given(st_poly, st_poly, st_poly)
def test_associativity(a, b, c):
    assert (a * b) * c == a * (b * c)


# -- partial derivatives -----------------------------------------------------


def test_even_partials():
    assert partial(poly("u^3"), "u") == poly("3 u^2")
    assert partial(poly("u2^2 t0"), "u2") == poly("2 u2 t0")
    assert partial(poly("l^2 u"), "l") == poly("2 l u")
    assert partial(poly("u1"), "u2") == ZERO


def test_left_odd_derivative_signs():
    # d/dt1 (t0 t1): t1 sits behind one odd factor, hence the minus
    assert partial(poly("t0 t1"), "t1") == poly("-1 t0")
    assert partial(poly("t0 t1"), "t0") == poly("t1")
    assert partial(poly("t0 t1 t2"), "t2") == poly("t0 t1")
    assert partial(poly("t0 t1 t2"), "t1") == poly("-1 t0 t2")
    assert partial(poly("u t1"), "t1") == poly("u")


@given(st_monomial, st_monomial)
def test_odd_partial_is_left_antiderivation(m1, m2):
    a, b = DiffPoly.monomial(m1), DiffPoly.monomial(m2)
    sign = -1 if m1.super_degree() % 2 else 1
    lhs = partial(a * b, "t1")
    rhs = partial(a, "t1") * b + sign * (a * partial(b, "t1"))
    assert lhs == rhs


def test_rejects_unknown_variables():
    with pytest.raises(ValueError):
        partial(ONE, "x")
    with pytest.raises(ValueError):
        partial(ONE, "u0")


# -- total derivative ---------------------------------------------------------


def test_dtot_on_generators():
    assert dtot(u_jet(0)) == u_jet(1)
    assert dtot(u_jet(3)) == u_jet(4)
    assert dtot(theta(0)) == theta(1)
    assert dtot(lam_var()) == ZERO
    assert dtot(ONE) == ZERO


def test_dtot_frozen_example():
    assert dtot(poly("u t0 t1")) == poly("u1 t0 t1 + u t0 t2")
    assert dtot(poly("1/2 t0 t1")) == poly("1/2 t0 t2")
    assert dtot(poly("u^2")) == poly("2 u u1")


@settings(max_examples=60)
@given(st_poly, st_poly)
def test_dtot_is_an_even_derivation(a, b):
    assert dtot(a * b) == dtot(a) * b + a * dtot(b)


@given(st_monomial)
def test_dtot_grading(m):
    a = DiffPoly.monomial(m)
    da = dtot(a)
    if not da.is_zero():
        assert bidegree(da) == Bidegree(m.super_degree(), m.degree() + 1)
        assert all(mm.ucount() == m.ucount() for mm in da.monomials())


# -- substitution -------------------------------------------------------------


def test_subst_lam():
    assert subst_lam(poly("l^2 u t1"), u_jet(0)) == poly("u^3 t1")
    assert subst_lam(poly("u t1 + -1 l t1"), u_jet(0)) == ZERO
    assert subst_lam(poly("l u1 t0"), poly("u + 1")) == poly("u u1 t0 + u1 t0")


# -- text format --------------------------------------------------------------


def test_format_examples():
    assert format_poly(ZERO) == "0"
    assert format_poly(ONE) == "1"
    assert format_poly(poly("-1/2 u t0 t1 + 2 u1")) == "2 u1 + -1/2 u t0 t1"
    assert format_poly(poly("l^2 u^2 u1^2 t3")) == "1 l^2 u^2 u1^2 t3"


def test_parse_oddities():
    assert poly("t1 t0") == -poly("t0 t1")
    assert poly("-u") == poly("-1 u")
    assert poly("0") == ZERO
    assert poly("3/2") == DiffPoly.scalar(Fraction(3, 2))
    with pytest.raises(ValueError):
        poly("t1^2")
    with pytest.raises(ValueError):
        poly("")


@settings(max_examples=80)
@given(st_poly)
def test_format_parse_round_trip(a):
    assert parse_poly(format_poly(a)) == a


def test_mul_matches_spec_alias():
    a, b = poly("u t0"), poly("u1 t1")
    assert mul(a, b) == a * b
