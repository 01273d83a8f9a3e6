"""Variational calculus: Euler operators, evolutionary fields, functionals.

A local functional is a density modulo total derivatives.  Equality of
functionals is decided exactly: the difference is split into bihomogeneous
pieces of fixed even-factor count and a preimage under the total derivative
is solved for piece by piece.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .algebra import Bidegree, DiffPoly, Monomial, ZERO, dtot, mul, partial
from .linwin import enumerate_piece_basis, operator_matrix, solve


def _orders(a: DiffPoly) -> Tuple[set, set]:
    """Even and odd jet orders occurring in a (u counts as order 0)."""
    ev, od = set(), set()
    for m in a.terms:
        if m.u0:
            ev.add(0)
        for s, _ in m.even:
            ev.add(s)
        for s in m.odd:
            od.add(s)
    return ev, od


def _signed_power(a: DiffPoly, s: int) -> DiffPoly:
    """(-1)^s dtot^s applied to a."""
    out = a
    for _ in range(s):
        out = dtot(out)
    return out if s % 2 == 0 else -out


def delta_u(a: DiffPoly) -> DiffPoly:
    """Variational derivative in the even field: sum of (-dtot)^s d/du^s."""
    out = ZERO
    ev, _ = _orders(a)
    for s in sorted(ev):
        out = out + _signed_power(partial(a, "u" if s == 0 else f"u{s}"), s)
    return out


def delta_theta(a: DiffPoly) -> DiffPoly:
    """Variational derivative in the odd field: sum of (-dtot)^s d/dt^s."""
    out = ZERO
    _, od = _orders(a)
    for s in sorted(od):
        out = out + _signed_power(partial(a, f"t{s}"), s)
    return out


@dataclass
class OperatorSpec:
    """Evolutionary superfield given by its action on the two generators.

    The operator sends u to even_seed and t to odd_seed, and extends as the
    unique derivation commuting with the total derivative:

        op(a) = sum_s dtot^s(even_seed) da/du^s + dtot^s(odd_seed) da/dt^s.

    Prolonged coefficients are cached per instance.
    """

    even_seed: DiffPoly
    odd_seed: DiffPoly
    name: str = ""
    _even: Dict[int, DiffPoly] = field(default_factory=dict, repr=False)
    _odd: Dict[int, DiffPoly] = field(default_factory=dict, repr=False)

    def even_gen(self, s: int) -> DiffPoly:
        if s not in self._even:
            self._even[s] = self.even_seed if s == 0 else dtot(self.even_gen(s - 1))
        return self._even[s]

    def odd_gen(self, s: int) -> DiffPoly:
        if s not in self._odd:
            self._odd[s] = self.odd_seed if s == 0 else dtot(self.odd_gen(s - 1))
        return self._odd[s]

    def __call__(self, a: DiffPoly) -> DiffPoly:
        return apply_op(self, a)


def apply_op(op: OperatorSpec, a: DiffPoly) -> DiffPoly:
    out = ZERO
    ev, od = _orders(a)
    for s in sorted(ev):
        out = out + mul(op.even_gen(s), partial(a, "u" if s == 0 else f"u{s}"))
    for s in sorted(od):
        out = out + mul(op.odd_gen(s), partial(a, f"t{s}"))
    return out


def build_dp(density: DiffPoly) -> OperatorSpec:
    """Evolutionary field of a local functional with the given density.

    The even seed is the odd variational derivative and vice versa; this is
    the Hamiltonian pairing for the odd symplectic structure on jets.
    """
    return OperatorSpec(delta_theta(density), delta_u(density))


# -- functionals -----------------------------------------------------------


def _components(a: DiffPoly) -> Dict[Tuple[int, int, int], DiffPoly]:
    """Split into pieces of fixed (super degree, standard degree, count)."""
    out: Dict[Tuple[int, int, int], DiffPoly] = {}
    for m, c in a.terms.items():
        key = (m.super_degree(), m.degree(), m.ucount())
        out.setdefault(key, DiffPoly())
        out[key] = out[key] + DiffPoly.monomial(m, c)
    return out


_DTOT_PIECE: Dict[Tuple[int, int, int], object] = {}


def _dtot_piece_matrix(p: int, d: int, c: int):
    key = (p, d, c)
    if key not in _DTOT_PIECE:
        dom = enumerate_piece_basis(Bidegree(p, d - 1), c)
        cod = enumerate_piece_basis(Bidegree(p, d), c)
        _DTOT_PIECE[key] = operator_matrix(dtot, dom, cod)
    return _DTOT_PIECE[key]


def dtot_preimage(a: DiffPoly) -> Optional[DiffPoly]:
    """Exact y with dtot(y) = a, or None when a is not a total derivative.

    Solved piecewise; free coordinates are set to zero, so the result is
    canonical for the monomial order.
    """
    out = ZERO
    for (p, d, c), comp in _components(a).items():
        if d == 0:
            # the total derivative raises the standard degree
            return None
        mat = _dtot_piece_matrix(p, d, c)
        x = solve(mat.dense_rows(), mat.codomain.vector_of(comp))
        if x is None:
            return None
        out = out + mat.domain.poly_of(x)
    return out


class FunctionalClass:
    """A local functional: density modulo exact total derivatives."""

    __slots__ = ("density",)

    def __init__(self, density: DiffPoly):
        self.density = density

    def is_zero(self) -> bool:
        return dtot_preimage(self.density) is not None

    def __eq__(self, other) -> bool:
        if not isinstance(other, FunctionalClass):
            return NotImplemented
        return (self - other).is_zero()

    def __add__(self, other: "FunctionalClass") -> "FunctionalClass":
        return FunctionalClass(self.density + other.density)

    def __sub__(self, other: "FunctionalClass") -> "FunctionalClass":
        return FunctionalClass(self.density - other.density)

    def __neg__(self) -> "FunctionalClass":
        return FunctionalClass(-self.density)

    def __mul__(self, c):
        if isinstance(c, (int, Fraction)):
            return FunctionalClass(self.density * c)
        return NotImplemented

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"FunctionalClass({self.density!r})"

    def __hash__(self):
        raise TypeError("functional classes are not hashable; compare with ==")


def integral_class(a: DiffPoly) -> FunctionalClass:
    return FunctionalClass(a)


def schouten(p_density: DiffPoly, q_density: DiffPoly) -> FunctionalClass:
    """Variational Schouten bracket of two local functionals.

    Computed as the integral of the evolutionary field of the first density
    applied to the second; the result is well defined as a functional.
    """
    return integral_class(apply_op(build_dp(p_density), q_density))
