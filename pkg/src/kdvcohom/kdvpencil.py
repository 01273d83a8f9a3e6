"""The dispersionless KdV Poisson pencil and its filtered complex.

The two compatible structures have densities t0 t1 / 2 and u t0 t1 / 2.
Their difference with the central parameter, u t0 t1 / 2 - l t0 t1 / 2,
generates the pencil differential.  The filtration by top jet order turns
each fixed even-count piece of the complex into a finite filtered complex;
this module provides the pencil operators, the filtration bookkeeping, the
explicit page-zero and page-one differentials, and the weighted homotopy
that contracts almost all of page one.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple, Union

from .algebra import (
    Bidegree,
    DiffPoly,
    Monomial,
    ZERO,
    lam_var,
    mul,
    partial,
    poly,
    subst_lam,
    theta,
    u_jet,
)
from .linwin import (
    OperatorMatrix,
    SliceBasis,
    Window,
    _partitions,
    enumerate_piece_basis,
    operator_matrix,
)
from .specseq import FilteredSlice
from .varcalc import OperatorSpec, build_dp

P1_DENSITY = poly("1/2 t0 t1")
P2_DENSITY = poly("1/2 u t0 t1")
PENCIL_DENSITY = P2_DENSITY - lam_var() * P1_DENSITY

D1 = build_dp(P1_DENSITY)
D1.name = "d1"
D2 = build_dp(P2_DENSITY)
D2.name = "d2"
DLAMBDA = build_dp(PENCIL_DENSITY)
DLAMBDA.name = "dlambda"


def d_lambda(a: DiffPoly) -> DiffPoly:
    """Pencil differential: second structure minus l times the first."""
    return DLAMBDA(a)


class HomotopySingularityError(ArithmeticError):
    """The weighted homotopy divides by a vanishing weight here."""


# -- filtration ------------------------------------------------------------


def filtration_level(x: Union[Monomial, DiffPoly]) -> Optional[int]:
    """Standard degree minus top jet order; for a polynomial the minimum.

    Returns None for the zero polynomial (member of every filtration step).
    """
    if isinstance(x, Monomial):
        return x.degree() - x.max_jet()
    if not x.terms:
        return None
    return min(m.degree() - m.max_jet() for m in x.terms)


def subcomplex_bidegrees(k: int) -> List[Bidegree]:
    """Bidegrees (p, p+k) of the subcomplex preserved by the pencil.

    The exclusion d >= p(p-1)/2 is not monotonic in p, so every candidate
    up to the quadratic bound is tested.
    """
    if k < -1:
        return []
    p_bound = (3 + math.isqrt(9 + 8 * k)) // 2 + 1
    out = []
    for p in range(p_bound + 1):
        d = p + k
        if d >= 0 and 2 * d >= p * (p - 1):
            out.append(Bidegree(p, d))
    return out


def top_degree(k: int) -> Optional[int]:
    bds = subcomplex_bidegrees(k)
    return bds[-1].d if bds else None


# -- page zero -------------------------------------------------------------


def d0_explicit(x: DiffPoly, q: int) -> DiffPoly:
    """Leading part of the pencil differential on the column of top order q.

    Only the terms that raise the top jet order from q to q + 1 survive in
    the associated graded complex; they act through the order-q variables
    alone.
    """
    if q < 0:
        raise ValueError("column index must be >= 0")
    even_coef = (u_jet(0) - lam_var()) * theta(q + 1) \
        + Fraction(1, 2) * u_jet(q + 1) * theta(0)
    odd_coef = Fraction(1, 2) * theta(0) * theta(q + 1)
    out = mul(even_coef, partial(x, "u" if q == 0 else f"u{q}"))
    out = out + mul(odd_coef, partial(x, f"t{q}"))
    return out


# -- page one --------------------------------------------------------------


def _t0tq(q: int) -> DiffPoly:
    return theta(0) * theta(q)


def _page_one_split(m: Monomial, q: int) -> Tuple[Monomial, int]:
    """Split a page-one monomial into cofactor and embedding sign.

    The monomial must contain t0 and t^q and no central parameter, and the
    cofactor must have top order at most q - 1.
    """
    if m.lam:
        raise ValueError(f"page-one element must be parameter free: {m.format()}")
    if 0 not in m.odd or q not in m.odd:
        raise ValueError(f"expected both t0 and t{q} in {m.format()}")
    odd_f = tuple(s for s in m.odd if s not in (0, q))
    f = Monomial(0, m.u0, m.even, odd_f)
    if f.max_jet() > q - 1:
        raise ValueError(f"cofactor of {m.format()} exceeds top order {q - 1}")
    return f, (-1 if len(odd_f) % 2 else 1)


def _cofactor_max_jet(m: Monomial, q: int) -> int:
    odd_f = tuple(s for s in m.odd if s not in (0, q))
    return Monomial(0, m.u0, m.even, odd_f).max_jet()


def e1_basis(p: int, q: int, w: Window) -> SliceBasis:
    """Windowed model basis of the first page at position (p, q).

    Position (0, 0) is spanned by powers of the parameter up to L.  For
    p >= 1, q >= 2 the basis consists of monomials f t0 t^q with f free of
    the parameter and of t0, of standard degree p, top order exactly q - 1,
    and u-power at most N.  Every other position is empty; in particular
    the smooth one-dimensional family in the corner column is dropped by
    the polynomial coefficient model.
    """
    bd = Bidegree(p, p + q)
    if (p, q) == (0, 0):
        monos = tuple(Monomial(lam=j) for j in range(w.L + 1))
        return SliceBasis(Bidegree(0, 0), w, monos, "E1(0,0)")
    monos = []
    if p >= 1 and q >= 2:
        for f in _cofactors(p, q, u0_max=w.N):
            monos.append(Monomial(0, f.u0, f.even, tuple(sorted(f.odd + (0, q)))))
    return SliceBasis(bd, w, tuple(sorted(monos)), f"E1({p},{q})")


def e1_piece_basis(p: int, q: int, c: int) -> SliceBasis:
    """Fixed even-count part of the page-one model basis."""
    bd = Bidegree(p, p + q)
    if (p, q) == (0, 0):
        monos = (Monomial(lam=c),)
        return SliceBasis(Bidegree(0, 0), None, monos, f"E1(0,0) c={c}")
    monos = []
    if p >= 1 and q >= 2:
        for f in _cofactors(p, q, count=c):
            monos.append(Monomial(0, f.u0, f.even, tuple(sorted(f.odd + (0, q)))))
    return SliceBasis(bd, None, tuple(sorted(monos)), f"E1({p},{q}) c={c}")


def _cofactors(p: int, q: int, u0_max: Optional[int] = None,
               count: Optional[int] = None):
    """Cofactor monomials: degree p, top order exactly q - 1, no t0, no l."""
    top = q - 1
    for r in range(p + 1):
        for odd in itertools.combinations(range(1, top + 1), r):
            rest = p - sum(odd)
            if rest < 0:
                continue
            for even in _partitions(rest):
                if even and even[-1][0] > top:
                    continue
                jet_top = max([s for s, _ in even] + list(odd), default=0)
                if jet_top != top:
                    continue
                mult = sum(e for _, e in even)
                if count is not None:
                    u0 = count - mult
                    if u0 < 0:
                        continue
                    yield Monomial(0, u0, even, odd)
                else:
                    for u0 in range((u0_max if u0_max is not None else 0) + 1):
                        yield Monomial(0, u0, even, odd)


def d1_explicit(x: DiffPoly, q: int) -> DiffPoly:
    """Page-one differential in the model basis of column q.

    Computed from the closed formula: apply the pencil differential to the
    cofactor, set the parameter to u, add (q - 2)/2 times t1 times the
    cofactor, multiply back by t0 t^q, and keep only the part whose
    cofactor has top order exactly q - 1.
    """
    if q < 2:
        raise ValueError("page-one columns start at q = 2")
    out = ZERO
    u0_poly = u_jet(0)
    embed = _t0tq(q)
    for m, c in x.terms.items():
        f_mono, sign = _page_one_split(m, q)
        f = DiffPoly.monomial(f_mono, c * sign)
        g = subst_lam(DLAMBDA(f), u0_poly) + Fraction(q - 2, 2) * (theta(1) * f)
        full = mul(g, embed)
        kept = {}
        for mm, cc in full.terms.items():
            top = _cofactor_max_jet(mm, q)
            if top > q - 1:
                raise AssertionError(
                    f"page-one image leaked above the diagonal: {mm.format()}")
            if top == q - 1:
                kept[mm] = cc
        out = out + DiffPoly(kept)
    return out


# -- weighted homotopy -------------------------------------------------------


def u_weight(m: Monomial) -> Fraction:
    """Eigenvalue of the rescaling that fixes u, l and t1.

    Jets of order s weigh (s + 2)/2 when even and (s - 1)/2 when odd, so
    t0 weighs -1/2 and the weight can vanish on mixed monomials.
    """
    w = Fraction(0)
    for s, e in m.even:
        w += e * Fraction(s + 2, 2)
    for s in m.odd:
        w += Fraction(s - 1, 2)
    return w


def U_op(a: DiffPoly) -> DiffPoly:
    """The weighting operator itself, diagonal on monomials."""
    return DiffPoly({m: c * u_weight(m) for m, c in a.terms.items()})


def h_op(x: DiffPoly, p: int, q: int) -> DiffPoly:
    """Contracting homotopy on page one at position (p, q).

    Inverts the weighting after differentiating by t1.  Position (1, 2)
    carries the surviving classes and is refused outright; elsewhere a
    vanishing weight is a genuine singularity and raises as well.
    """
    if p < 1 or q < 2:
        raise ValueError("homotopy applies to columns q >= 2 at rows p >= 1")
    if (p, q) == (1, 2):
        raise HomotopySingularityError(
            "the homotopy is singular at position (1, 2)")
    b = partial(x, "t1")
    terms = {}
    for m, c in b.terms.items():
        w = u_weight(m)
        if w == 0:
            raise HomotopySingularityError(
                f"vanishing weight on {m.format() or '1'}")
        terms[m] = c / w
    return DiffPoly(terms)


# -- piece matrices and the filtered complex ---------------------------------


_PIECE_CACHE: Dict[Tuple[str, int, int, int, bool], OperatorMatrix] = {}


def _op_piece_matrix(op: OperatorSpec, key: str, bd: Bidegree, c: int,
                     c_out: int, include_lambda: bool) -> OperatorMatrix:
    cache_key = (key, bd.p, bd.d, c, include_lambda)
    if cache_key not in _PIECE_CACHE:
        dom = enumerate_piece_basis(bd, c, include_lambda)
        cod = enumerate_piece_basis(Bidegree(bd.p + 1, bd.d + 1), c_out, include_lambda)
        _PIECE_CACHE[cache_key] = operator_matrix(op, dom, cod)
    return _PIECE_CACHE[cache_key]


def dlambda_piece_matrix(p: int, d: int, c: int) -> OperatorMatrix:
    """Pencil differential on the even-count piece (preserves the count)."""
    return _op_piece_matrix(DLAMBDA, "dlambda", Bidegree(p, d), c, c, True)


def d1_piece_matrix(p: int, d: int, c: int) -> OperatorMatrix:
    """First structure on the parameter-free piece; lowers the count."""
    return _op_piece_matrix(D1, "d1", Bidegree(p, d), c, c - 1, False)


def d2_piece_matrix(p: int, d: int, c: int) -> OperatorMatrix:
    """Second structure on the parameter-free piece; preserves the count."""
    return _op_piece_matrix(D2, "d2", Bidegree(p, d), c, c, False)


@lru_cache(maxsize=None)
def pencil_filtered_slice(k: int, c: int, d_cap: Optional[int] = None) -> FilteredSlice:
    """The finite filtered complex of one even-count piece.

    k is the difference of standard and super degree, preserved by the
    pencil differential; together with the even-factor count it cuts the
    complex into finite pieces with no truncation anywhere.  The top slice
    maps into an empty one, which doubles as a check that the differential
    really ends there.  A degree cap drops the tail of the complex; pages
    are then only valid two degrees below the cap.
    """
    bds = subcomplex_bidegrees(k)
    if d_cap is not None:
        bds = [bd for bd in bds if bd.d <= d_cap]
    if not bds:
        return FilteredSlice((), {}, {}, {}, label=f"pencil k={k} c={c}")
    degrees = tuple(bd.d for bd in bds)
    bases = {}
    levels = {}
    diffs = {}
    for bd in bds:
        basis = enumerate_piece_basis(bd, c)
        bases[bd.d] = basis
        levels[bd.d] = tuple(bd.d - m.max_jet() for m in basis.monomials)
    top = degrees[-1]
    true_top = subcomplex_bidegrees(k)[-1].d
    for n in degrees:
        if n < top:
            cod = bases[n + 1]
        elif top < true_top:
            cod = enumerate_piece_basis(Bidegree(top + 1 - k, top + 1), c)
        else:
            cod = SliceBasis(Bidegree(top + 1 - k, top + 1), None, (),
                             f"empty c={c}")
        diffs[n] = operator_matrix(d_lambda, bases[n], cod)
    return FilteredSlice(degrees, bases, levels, diffs,
                         label=f"pencil k={k} c={c}")
