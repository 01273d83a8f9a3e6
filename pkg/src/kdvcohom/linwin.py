"""Finite slices of the jet superalgebra and exact linear algebra on them.

A slice is the span of all monomials of a fixed bidegree subject to bounds:
either a reporting window (u-power <= N, l-power <= L, jets unconstrained)
or a fixed even-factor count (ucount), which cuts out a genuinely finite
piece preserved by the pencil differentials.  All eliminations run over
Fraction with deterministic pivoting in the canonical monomial order; no
floating point, no probabilistic shortcuts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple

from .algebra import Bidegree, DiffPoly, Monomial, ONE_MONO

F0 = Fraction(0)
F1 = Fraction(1)


class WindowOverflowError(ValueError):
    """An operator image left the codomain slice it was assembled against."""


class CompositionError(ValueError):
    """Two matrices were combined along mismatched slice bases."""


class Window(NamedTuple):
    """Reporting window: max u-power N and max l-power L of coefficients."""

    N: int
    L: int


# strictly increasing in the componentwise order; covers enough spread in
# both N and L to separate constant, linear and affine growth exactly
DEFAULT_LADDER = (Window(2, 2), Window(3, 2), Window(4, 2),
                  Window(5, 2), Window(5, 3), Window(5, 4))


def window_leq(a: Window, b: Window) -> bool:
    return a.N <= b.N and a.L <= b.L


@dataclass
class SliceBasis:
    """Ordered monomial basis of one slice.

    window is None for pieces cut out by an even-factor count instead of a
    reporting window; label then records the cut.
    """

    bidegree: Bidegree
    window: Optional[Window]
    monomials: Tuple[Monomial, ...]
    label: str = ""
    _index: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self._index = {m: i for i, m in enumerate(self.monomials)}

    def __len__(self) -> int:
        return len(self.monomials)

    def index_of(self, m: Monomial) -> int:
        try:
            return self._index[m]
        except KeyError:
            raise WindowOverflowError(
                f"monomial {m.format() or '1'} not in slice {self.describe()}"
            ) from None

    def contains(self, m: Monomial) -> bool:
        return m in self._index

    def vector_of(self, a: DiffPoly) -> List[Fraction]:
        v = [F0] * len(self.monomials)
        for m, c in a.terms.items():
            v[self.index_of(m)] = c
        return v

    def poly_of(self, vec: Sequence[Fraction]) -> DiffPoly:
        return DiffPoly({m: c for m, c in zip(self.monomials, vec) if c})

    def describe(self) -> str:
        p, d = self.bidegree
        tag = self.label or (f"window {self.window}" if self.window else "")
        return f"(p={p}, d={d}) {tag}".strip()


@lru_cache(maxsize=None)
def _partitions(m: int) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
    """All jet-exponent tuples ((order, exp), ...) of total weight m."""
    if m == 0:
        return ((),)
    out = []

    def rec(remaining, max_part, acc):
        if remaining == 0:
            out.append(tuple(sorted((s, e) for s, e in acc.items())))
            return
        for part in range(min(remaining, max_part), 0, -1):
            acc[part] = acc.get(part, 0) + 1
            rec(remaining - part, part, acc)
            if acc[part] == 1:
                del acc[part]
            else:
                acc[part] -= 1

    rec(m, m, {})
    return tuple(out)


def _odd_sets(p: int, d: int):
    """Strictly increasing odd-order tuples of length p with sum <= d."""
    if p == 0:
        yield ()
        return
    # smallest possible sum is 0+1+...+(p-1)
    if d < p * (p - 1) // 2:
        return
    for comb in itertools.combinations(range(0, d + 1), p):
        if sum(comb) <= d:
            yield comb


def enumerate_basis(bd: Bidegree, w: Window, include_lambda: bool = True) -> SliceBasis:
    """All monomials of bidegree bd with u-power <= N and l-power <= L."""
    p, d = bd
    if p < 0 or d < 0:
        return SliceBasis(bd, w, ())
    monos = []
    lmax = w.L if include_lambda else 0
    for odd in _odd_sets(p, d):
        rest = d - sum(odd)
        for even in _partitions(rest):
            for u0 in range(w.N + 1):
                for lam in range(lmax + 1):
                    monos.append(Monomial(lam, u0, even, odd))
    return SliceBasis(bd, w, tuple(sorted(monos)))


def enumerate_piece_basis(bd: Bidegree, ucount: int, include_lambda: bool = True) -> SliceBasis:
    """All monomials of bidegree bd with a fixed even-factor count.

    These pieces are finite with no window bound: the count caps u-power
    and l-power once the jet multiplicities are chosen.
    """
    p, d = bd
    label = f"c={ucount}"
    if p < 0 or d < 0 or ucount < 0:
        return SliceBasis(bd, None, (), label)
    monos = []
    for odd in _odd_sets(p, d):
        rest = d - sum(odd)
        for even in _partitions(rest):
            jetmult = sum(e for _, e in even)
            rem = ucount - jetmult
            if rem < 0:
                continue
            if include_lambda:
                for u0 in range(rem + 1):
                    monos.append(Monomial(rem - u0, u0, even, odd))
            else:
                monos.append(Monomial(0, rem, even, odd))
    return SliceBasis(bd, None, tuple(sorted(monos)), label)


# -- exact elimination ----------------------------------------------------


def rref(rows: Sequence[Sequence[Fraction]]):
    """Reduced row echelon form with deterministic first-nonzero pivoting.

    Returns (nonzero rows, pivot column list).  Input rows are not mutated.
    Rows are held as col->coeff dicts during elimination; most matrices
    here are images of local differential operators and are very sparse,
    so this avoids arithmetic on structural zeros.
    """
    ncols = 0
    work = []
    for row in rows:
        ncols = len(row)
        d = {j: x for j, x in enumerate(row) if x}
        if d:
            work.append(d)
    if not work:
        return [], []
    pivots = []
    r = 0
    for col in range(ncols):
        pivot_row = None
        for i in range(r, len(work)):
            if col in work[i]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        work[r], work[pivot_row] = work[pivot_row], work[r]
        prow = work[r]
        pv = prow[col]
        if pv != 1:
            work[r] = prow = {j: x / pv for j, x in prow.items()}
        for i in range(len(work)):
            if i != r:
                wi = work[i]
                f = wi.get(col)
                if f:
                    for j, b in prow.items():
                        nv = wi.get(j, F0) - f * b
                        if nv:
                            wi[j] = nv
                        else:
                            wi.pop(j, None)
        pivots.append(col)
        r += 1
        if r == len(work):
            break
    out = []
    for d in work[:r]:
        row = [F0] * ncols
        for j, x in d.items():
            row[j] = x
        out.append(row)
    return out, pivots


def rank_of(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(rows)[0])


def reduce_against(rref_rows, pivots, vec: Sequence[Fraction]) -> List[Fraction]:
    """Subtract the span of an rref basis from vec; result has no pivots."""
    v = list(vec)
    for row, pc in zip(rref_rows, pivots):
        if v[pc]:
            f = v[pc]
            v = [a - f * b if b else a for a, b in zip(v, row)]
    return v


def in_span(rref_rows, pivots, vec: Sequence[Fraction]) -> bool:
    return not any(reduce_against(rref_rows, pivots, vec))


def solve(rows: Sequence[Sequence[Fraction]], b: Sequence[Fraction]):
    """One exact solution x of (rows as matrix) @ x = b, or None.

    Free variables are set to zero; with the canonical column order this
    makes the returned solution deterministic.
    """
    m = len(rows)
    if m == 0:
        return [] if not any(b) else None
    n = len(rows[0])
    aug = [list(rows[i]) + [Fraction(b[i])] for i in range(m)]
    red, pivots = rref(aug)
    x = [F0] * n
    for row, pc in zip(red, pivots):
        if pc == n:
            return None
        x[pc] = row[n]
    return x


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> List[List[Fraction]]:
    """Canonical kernel basis of the matrix given by rows (maps R^ncols -> R^m)."""
    red, pivots = rref(rows)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [F0] * ncols
        v[free] = F1
        for row, pc in zip(red, pivots):
            v[pc] = -row[free]
        basis.append(v)
    return basis


def columns_to_rows(cols: Sequence[dict], nrows: int) -> List[List[Fraction]]:
    """Sparse columns (row index -> coeff) to a dense row matrix."""
    rows = [[F0] * len(cols) for _ in range(nrows)]
    for j, col in enumerate(cols):
        for i, c in col.items():
            rows[i][j] = c
    return rows


def intersect_with_coordinates(rows, allowed_idx) -> List[List[Fraction]]:
    """Basis of span(rows) intersected with {v : v_j = 0 for j not allowed}."""
    live = [r for r in rows if any(r)]
    if not live:
        return []
    n = len(live[0])
    allowed = set(allowed_idx)
    banned = [j for j in range(n) if j not in allowed]
    if not banned:
        red, _ = rref(live)
        return red
    # kernel of y -> (y @ rows) restricted to the banned coordinates
    constraint = [[live[i][j] for i in range(len(live))] for j in banned]
    ys = nullspace(constraint, len(live))
    out = []
    for y in ys:
        v = [F0] * n
        for yi, row in zip(y, live):
            if yi:
                v = [a + yi * b for a, b in zip(v, row)]
        if any(v):
            out.append(v)
    red, _ = rref(out)
    return red


@dataclass
class OperatorMatrix:
    """Matrix of a linear operator between two slice bases.

    Columns are stored sparsely (row index -> Fraction), one per domain
    monomial, in domain order.
    """

    domain: SliceBasis
    codomain: SliceBasis
    cols: Tuple[dict, ...]

    def apply_to_vector(self, vec: Sequence[Fraction]) -> List[Fraction]:
        out = [F0] * len(self.codomain)
        for j, x in enumerate(vec):
            if x:
                for i, c in self.cols[j].items():
                    out[i] += x * c
        return out

    def dense_rows(self) -> List[List[Fraction]]:
        return columns_to_rows(self.cols, len(self.codomain))

    def rank(self) -> int:
        return rank_of(self.image_rows())

    def image_rows(self) -> List[List[Fraction]]:
        rows = []
        for col in self.cols:
            if col:
                v = [F0] * len(self.codomain)
                for i, c in col.items():
                    v[i] = c
                rows.append(v)
        return rows

    def kernel_rows(self) -> List[List[Fraction]]:
        return nullspace(self.dense_rows(), len(self.domain))

    def is_zero(self) -> bool:
        return all(not col for col in self.cols)

    def export_triplets(self) -> str:
        """Plain text (row, col, value) triplets, canonically ordered."""
        lines = [
            f"# {self.domain.describe()} -> {self.codomain.describe()}",
            f"# shape {len(self.codomain)} x {len(self.domain)}",
        ]
        for j, col in enumerate(self.cols):
            for i in sorted(col):
                lines.append(f"{i} {j} {col[i]}")
        return "\n".join(lines) + "\n"


def operator_matrix(op: Callable[[DiffPoly], DiffPoly], domain: SliceBasis,
                    codomain: SliceBasis) -> OperatorMatrix:
    """Assemble the matrix of op on a slice; rejects codomain overflow."""
    cols = []
    for m in domain.monomials:
        img = op(DiffPoly.monomial(m))
        col = {}
        for mm, c in img.terms.items():
            col[codomain.index_of(mm)] = c
        cols.append(col)
    return OperatorMatrix(domain, codomain, tuple(cols))


# -- homology -------------------------------------------------------------


class HomologyDims(NamedTuple):
    kernel: int
    image: int
    homology: int


def _same_basis(a: SliceBasis, b: SliceBasis) -> bool:
    return a.monomials == b.monomials


def homology_dims(d_in: OperatorMatrix, d_out: OperatorMatrix) -> HomologyDims:
    """dim ker(d_out) - rank(d_in) at the middle slice of a two-step complex.

    Both matrices must share the middle basis and compose to zero; the
    composite is checked exactly and a nonzero product is an error, never
    a warning.
    """
    if not _same_basis(d_in.codomain, d_out.domain):
        raise CompositionError(
            f"middle bases differ: {d_in.codomain.describe()} vs {d_out.domain.describe()}"
        )
    for j, col in enumerate(d_in.cols):
        if not col:
            continue
        vec = [F0] * len(d_in.codomain)
        for i, c in col.items():
            vec[i] = c
        if any(d_out.apply_to_vector(vec)):
            m = d_in.domain.monomials[j]
            raise CompositionError(f"d_out o d_in != 0 on {m.format() or '1'}")
    ker = len(d_out.domain) - rank_of(d_out.image_rows())
    img = rank_of(d_in.image_rows())
    return HomologyDims(ker, img, ker - img)


def quotient_representatives(ambient: SliceBasis, space_rows, relation_rows):
    """Deterministic transversal of span(space)/span(relations).

    Relations must span a subspace of the space (checked).  Preference is
    given to single monomials in canonical order, so whenever the quotient
    admits a monomial transversal the representatives are plain monomials;
    otherwise canonical kernel-basis vectors fill the remainder.

    Returns a list of (vector, monomial-or-None) pairs.
    """
    space_red, space_piv = rref(space_rows)
    rel_red, rel_piv = rref(relation_rows)
    for row in rel_red:
        if not in_span(space_red, space_piv, row):
            raise CompositionError("relations are not contained in the space")
    target = len(space_red) - len(rel_red)
    acc = [list(r) for r in rel_red]
    reps = []
    if target > 0:
        n = len(ambient)
        for j, m in enumerate(ambient.monomials):
            if len(reps) == target:
                break
            e = [F0] * n
            e[j] = F1
            if not in_span(space_red, space_piv, e):
                continue
            if rank_of(acc + [e]) > len(rref(acc)[0]):
                acc.append(e)
                reps.append((e, m))
        if len(reps) < target:
            for row in space_red:
                if len(reps) == target:
                    break
                if rank_of(acc + [list(row)]) > len(rref(acc)[0]):
                    acc.append(list(row))
                    reps.append((list(row), None))
    if len(reps) != target:
        raise CompositionError("failed to complete a quotient transversal")
    return reps


# -- stabilization over window ladders ------------------------------------


@dataclass
class StabilizationReport:
    """Classification of dims over a strictly increasing window ladder."""

    kind: str                      # constant | linear-N | linear-L | affine | unstable | inconclusive
    slope_n: Fraction
    slope_l: Fraction
    intercept: Fraction
    points_used: int
    detail: str = ""

    def matches(self, kind: str, slope: int = 0) -> bool:
        if self.kind != kind:
            return False
        if kind == "linear-N":
            return self.slope_n == slope
        if kind == "linear-L":
            return self.slope_l == slope
        if kind == "constant":
            return self.intercept == slope
        return True


def _fit_affine(points, use_n: bool, use_l: bool):
    """Exact fit dim = a*N + b*L + c over the given points, or None."""
    rows = []
    rhs = []
    for (w, dim) in points:
        rows.append([Fraction(w.N) if use_n else F0,
                     Fraction(w.L) if use_l else F0,
                     F1])
        rhs.append(Fraction(dim))
    # solve least-structure system exactly: find any solution, then verify
    ncols = 3
    mat = [r[:] for r in rows]
    sol = solve(mat, rhs)
    if sol is None:
        return None
    a, b, c = sol
    for (w, dim) in points:
        val = (a * w.N if use_n else F0) + (b * w.L if use_l else F0) + c
        if val != dim:
            return None
    if not use_n:
        a = F0
    if not use_l:
        b = F0
    return a, b, c


def stabilized_dims(points: Sequence[Tuple[Window, int]]) -> StabilizationReport:
    """Classify dims along a window ladder.

    The ladder must be strictly increasing in the componentwise order.
    Fewer than three data points is inconclusive by contract.  Models are
    tried from most to least constrained; if no model fits all points the
    earliest points are dropped one at a time (the dims only need to
    stabilize eventually) down to three remaining.
    """
    pts = list(points)
    for (w1, _), (w2, _) in zip(pts, pts[1:]):
        if not (window_leq(w1, w2) and w1 != w2):
            raise ValueError(f"window ladder not strictly increasing at {w1} -> {w2}")
    if len(pts) < 3:
        return StabilizationReport("inconclusive", F0, F0, F0, len(pts),
                                   "need at least three ladder points")
    for start in range(0, len(pts) - 2):
        sub = pts[start:]
        dims = [d for _, d in sub]
        if len(set(dims)) == 1:
            return StabilizationReport("constant", F0, F0, Fraction(dims[0]), len(sub))
        ns = {w.N for w, _ in sub}
        ls = {w.L for w, _ in sub}
        if len(ns) > 1:
            fit = _fit_affine(sub, True, False)
            if fit and fit[0] != 0:
                return StabilizationReport("linear-N", fit[0], F0, fit[2], len(sub))
        if len(ls) > 1:
            fit = _fit_affine(sub, False, True)
            if fit and fit[1] != 0:
                return StabilizationReport("linear-L", F0, fit[1], fit[2], len(sub))
        if len(ns) > 1 and len(ls) > 1:
            fit = _fit_affine(sub, True, True)
            if fit:
                return StabilizationReport("affine", fit[0], fit[1], fit[2], len(sub))
    return StabilizationReport("unstable", F0, F0, F0, len(pts),
                               "no exact affine model fits any ladder suffix")
