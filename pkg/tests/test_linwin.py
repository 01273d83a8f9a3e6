"""Slice enumeration and the exact elimination layer.

Basis enumerations are cross-checked against an independent brute-force
generator; elimination results against hand-reduced matrices.
"""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kdvcohom.algebra import Bidegree, DiffPoly, Monomial, partial, poly, theta, u_jet
from kdvcohom.linwin import (
    CompositionError,
    DEFAULT_LADDER,
    HomologyDims,
    OperatorMatrix,
    SliceBasis,
    Window,
    WindowOverflowError,
    enumerate_basis,
    enumerate_piece_basis,
    homology_dims,
    in_span,
    intersect_with_coordinates,
    nullspace,
    operator_matrix,
    quotient_representatives,
    rank_of,
    rref,
    solve,
    stabilized_dims,
)

F = Fraction


# -- independent brute-force enumeration ------------------------------------


def brute_monomials(p, d, n_max, l_max, with_l=True):
    """All monomials of bidegree (p, d) in the window, the slow way."""
    out = set()
    odd_choices = [c for r in range(p, p + 1)
                   for c in itertools.combinations(range(d + 1), r) if sum(c) <= d]
    if p == 0:
        odd_choices = [()]
    for odd in odd_choices:
        rest = d - sum(odd)
        for nparts in range(rest + 1):
            for parts in itertools.combinations_with_replacement(range(1, rest + 1), nparts):
                if sum(parts) != rest:
                    continue
                ev = {}
                for s in parts:
                    ev[s] = ev.get(s, 0) + 1
                for u0 in range(n_max + 1):
                    for lam in range(l_max + 1 if with_l else 1):
                        out.add(Monomial(lam, u0, tuple(sorted(ev.items())), odd))
        if rest == 0:
            for u0 in range(n_max + 1):
                for lam in range(l_max + 1 if with_l else 1):
                    out.add(Monomial(lam, u0, (), odd))
    return out


@pytest.mark.parametrize("p,d", [(0, 0), (0, 3), (1, 1), (1, 4), (2, 3), (3, 3), (2, 5)])
def test_enumerate_basis_against_brute_force(p, d):
    w = Window(2, 1)
    b = enumerate_basis(Bidegree(p, d), w)
    assert set(b.monomials) == brute_monomials(p, d, 2, 1)
    assert list(b.monomials) == sorted(b.monomials)


def test_enumerate_basis_without_lambda():
    b = enumerate_basis(Bidegree(1, 2), Window(1, 3), include_lambda=False)
    assert set(b.monomials) == brute_monomials(1, 2, 1, 0, with_l=False)
    assert all(m.lam == 0 for m in b.monomials)


def test_small_slice_dims():
    assert len(enumerate_basis(Bidegree(0, 0), Window(2, 2))) == 9
    assert len(enumerate_basis(Bidegree(1, 1), Window(1, 1))) == 8
    # p = 2 needs odd orders summing to at most d; impossible below d = 1
    assert len(enumerate_basis(Bidegree(2, 0), Window(5, 5))) == 0


def test_enumerate_piece_basis_frozen():
    b = enumerate_piece_basis(Bidegree(3, 3), 2)
    assert [m.format() for m in b.monomials] == [
        "u^2 t0 t1 t2", "l u t0 t1 t2", "l^2 t0 t1 t2"]
    b = enumerate_piece_basis(Bidegree(1, 2), 1)
    assert set(m.format() for m in b.monomials) == {
        "u t2", "l t2", "u1 t1", "u2 t0"}
    assert all(m.ucount() == 1 for m in b.monomials)


def test_enumerate_piece_matches_window_union():
    # a piece is the fixed-count part of a big enough window
    bd = Bidegree(2, 4)
    for c in range(4):
        piece = set(enumerate_piece_basis(bd, c).monomials)
        big = {m for m in enumerate_basis(bd, Window(c, c)).monomials
               if m.ucount() == c}
        assert piece == big


def test_piece_without_lambda():
    b = enumerate_piece_basis(Bidegree(1, 1), 2, include_lambda=False)
    assert set(m.format() for m in b.monomials) == {"u u1 t0", "u^2 t1"}


# -- elimination --------------------------------------------------------------


def test_rref_frozen():
    rows = [[F(2), F(4), F(2)], [F(1), F(2), F(3)], [F(0), F(0), F(4)]]
    red, piv = rref(rows)
    assert red == [[F(1), F(2), F(0)], [F(0), F(0), F(1)]]
    assert piv == [0, 2]
    assert rank_of(rows) == 2


def test_solve_and_nullspace():
    rows = [[F(1), F(1), F(0)], [F(0), F(1), F(1)]]
    x = solve(rows, [F(3), F(2)])
    assert x is not None
    for row, b in zip(rows, [F(3), F(2)]):
        assert sum(r * xi for r, xi in zip(row, x)) == b
    assert solve([[F(1), F(1)], [F(2), F(2)]], [F(1), F(3)]) is None
    ker = nullspace(rows, 3)
    assert len(ker) == 1
    assert ker[0] == [F(1), F(-1), F(1)]


st_matrix = st.integers(1, 4).flatmap(
    lambda n: st.lists(
        st.lists(st.integers(-3, 3).map(F), min_size=n, max_size=n),
        min_size=1, max_size=4))


@settings(max_examples=60)
@given(st_matrix)
def test_rank_nullity(rows):
    n = len(rows[0])
    assert rank_of(rows) + len(nullspace(rows, n)) == n


@settings(max_examples=60)
@given(st_matrix)
def test_rref_spans_the_same_rowspace(rows):
    red, piv = rref(rows)
    for r in rows:
        assert in_span(red, piv, r)
    assert rank_of(rows + red) == len(red)


def test_intersect_with_coordinates():
    rows = [[F(1), F(1), F(0)], [F(0), F(1), F(1)]]
    got = intersect_with_coordinates(rows, {0, 1})
    assert got == [[F(1), F(1), F(0)]]
    assert intersect_with_coordinates(rows, {0, 1, 2}) == rref(rows)[0]
    assert intersect_with_coordinates(rows, set()) == []


# -- operator matrices ---------------------------------------------------------


def d1_inline(a):
    """Independent copy of the first pencil differential for these tests."""
    out = DiffPoly.zero()
    orders = set()
    for m in a.terms:
        if m.u0:
            orders.add(0)
        for s, _ in m.even:
            orders.add(s)
    for s in sorted(orders):
        out = out + theta(s + 1) * partial(a, "u" if s == 0 else f"u{s}")
    return out


def test_operator_matrix_shape_and_rank():
    w = Window(1, 1)
    dom = enumerate_basis(Bidegree(0, 0), w)
    cod = enumerate_basis(Bidegree(1, 1), w)
    m = operator_matrix(d1_inline, dom, cod)
    assert len(m.cols) == 4
    assert m.rank() == 2
    assert len(m.kernel_rows()) == 2


def test_operator_matrix_overflow():
    w = Window(2, 2)
    dom = enumerate_basis(Bidegree(0, 0), w)
    with pytest.raises(WindowOverflowError):
        operator_matrix(lambda a: u_jet(0) * a, dom, dom)


def test_apply_to_vector_matches_operator():
    w = Window(1, 1)
    dom = enumerate_basis(Bidegree(1, 1), w)
    cod = enumerate_basis(Bidegree(2, 2), w)
    m = operator_matrix(d1_inline, dom, cod)
    a = poly("u u1 t0 + 2 l t1")
    assert cod.poly_of(m.apply_to_vector(dom.vector_of(a))) == d1_inline(a)


def test_export_triplets_deterministic():
    w = Window(1, 0)
    dom = enumerate_basis(Bidegree(0, 0), w)
    cod = enumerate_basis(Bidegree(1, 1), w)
    m = operator_matrix(d1_inline, dom, cod)
    assert m.export_triplets() == operator_matrix(d1_inline, dom, cod).export_triplets()
    assert "# shape" in m.export_triplets()


# -- homology ------------------------------------------------------------------


def test_homology_dims_frozen():
    w = Window(1, 1)
    s0 = enumerate_basis(Bidegree(0, 0), w)
    s1 = enumerate_basis(Bidegree(1, 1), w)
    s2 = enumerate_basis(Bidegree(2, 2), w)
    d_in = operator_matrix(d1_inline, s0, s1)
    d_out = operator_matrix(d1_inline, s1, s2)
    assert homology_dims(d_in, d_out) == HomologyDims(kernel=4, image=2, homology=2)


def test_homology_rejects_nonzero_composite():
    from kdvcohom.algebra import dtot
    w = Window(1, 1)
    s0 = enumerate_basis(Bidegree(0, 0), w)
    s1 = enumerate_basis(Bidegree(0, 1), w)
    s2 = enumerate_basis(Bidegree(0, 2), w)
    with pytest.raises(CompositionError):
        homology_dims(operator_matrix(dtot, s0, s1), operator_matrix(dtot, s1, s2))


def test_homology_rejects_mismatched_middle():
    w = Window(1, 1)
    s0 = enumerate_basis(Bidegree(0, 0), w)
    s1 = enumerate_basis(Bidegree(1, 1), w)
    s1b = enumerate_basis(Bidegree(1, 1), Window(1, 0))
    s2 = enumerate_basis(Bidegree(2, 2), w)
    with pytest.raises(CompositionError):
        homology_dims(operator_matrix(d1_inline, s0, s1),
                      operator_matrix(d1_inline, s1b, s2))


def test_quotient_representatives_prefers_monomials():
    w = Window(1, 1)
    s0 = enumerate_basis(Bidegree(0, 0), w)
    s1 = enumerate_basis(Bidegree(1, 1), w)
    s2 = enumerate_basis(Bidegree(2, 2), w)
    d_in = operator_matrix(d1_inline, s0, s1)
    d_out = operator_matrix(d1_inline, s1, s2)
    reps = quotient_representatives(s1, d_out.kernel_rows(), d_in.image_rows())
    assert [m.format() for _, m in reps] == ["u t1", "l u t1"]


def test_quotient_rejects_relations_outside_space():
    amb = enumerate_basis(Bidegree(0, 0), Window(1, 0))
    e0 = [[F(1), F(0)]]
    e1 = [[F(0), F(1)]]
    with pytest.raises(CompositionError):
        quotient_representatives(amb, e0, e1)


# -- stabilization -------------------------------------------------------------


LADDER = list(DEFAULT_LADDER)


def _dims(f):
    return [(w, f(w)) for w in LADDER]


def test_stabilized_constant():
    rep = stabilized_dims(_dims(lambda w: 5))
    assert rep.kind == "constant" and rep.intercept == 5
    assert rep.matches("constant", 5)


def test_stabilized_linear_n():
    rep = stabilized_dims(_dims(lambda w: 2 * w.N + 1))
    assert rep.kind == "linear-N" and rep.slope_n == 2 and rep.intercept == 1


def test_stabilized_linear_l():
    rep = stabilized_dims(_dims(lambda w: w.L + 1))
    assert rep.kind == "linear-L" and rep.slope_l == 1 and rep.intercept == 1


def test_stabilized_affine():
    rep = stabilized_dims(_dims(lambda w: w.N + w.L + 1))
    assert rep.kind == "affine"
    assert (rep.slope_n, rep.slope_l, rep.intercept) == (1, 1, 1)


def test_stabilized_eventually_constant():
    pts = _dims(lambda w: 5)
    pts[0] = (pts[0][0], 7)
    rep = stabilized_dims(pts)
    assert rep.kind == "constant" and rep.intercept == 5
    assert rep.points_used == len(LADDER) - 1


def test_stabilized_unstable_and_inconclusive():
    vals = iter([1, 2, 4, 8, 16, 32])
    rep = stabilized_dims([(w, next(vals)) for w in LADDER])
    assert rep.kind == "unstable"
    assert stabilized_dims(_dims(lambda w: 1)[:2]).kind == "inconclusive"


def test_stabilized_rejects_bad_ladder():
    with pytest.raises(ValueError):
        stabilized_dims([(Window(2, 2), 1), (Window(2, 2), 1), (Window(3, 2), 1)])
    with pytest.raises(ValueError):
        stabilized_dims([(Window(3, 2), 1), (Window(2, 3), 1), (Window(3, 3), 1)])


@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 4))
def test_stabilized_recovers_exact_models(a, b, c):
    rep = stabilized_dims(_dims(lambda w: a * w.N + b * w.L + c))
    if a == 0 and b == 0:
        assert rep.matches("constant", c)
    elif b == 0:
        assert rep.kind == "linear-N" and (rep.slope_n, rep.intercept) == (a, c)
    elif a == 0:
        assert rep.kind == "linear-L" and (rep.slope_l, rep.intercept) == (b, c)
    else:
        assert rep.kind == "affine"
        assert (rep.slope_n, rep.slope_l, rep.intercept) == (a, b, c)
