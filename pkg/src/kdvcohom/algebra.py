"""Supercommutative algebra of local densities in one even field.

The algebra is generated, over rational polynomials in the field value u
and a central even parameter l (lambda), by even jet variables u1, u2, ...
and odd variables t0, t1, t2, ... (t is the odd super-partner of u).  A
monomial is written in the canonical factor order

    l^k u^a u1^b u2^c ... t0 t1 ...

and a polynomial is a finite rational combination of such monomials.

Two gradations are used throughout the package:

* standard degree d: the jet variable of order s (u^s or t^s) counts s,
  while u, l and rational coefficients count 0;
* super degree p: the number of odd factors.

Everything here is exact; coefficients are fractions.Fraction and no
floating point is ever produced.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Union

Scalar = Union[int, Fraction]


class Bidegree(NamedTuple):
    """Super degree p and standard degree d of a homogeneous element."""

    p: int
    d: int


class Monomial(NamedTuple):
    """One monomial, normalized.

    lam  -- exponent of the central parameter l
    u0   -- exponent of the undifferentiated field u
    even -- tuple of (order, exponent) pairs for jets u^order, order >= 1,
            sorted by order, exponents >= 1
    odd  -- strictly increasing tuple of orders s of the odd factors t^s

    Field order doubles as the canonical sort key for terms.
    """

    lam: int = 0
    u0: int = 0
    even: tuple = ()
    odd: tuple = ()

    def degree(self) -> int:
        """Standard degree: total jet order counted with multiplicity."""
        return sum(s * e for s, e in self.even) + sum(self.odd)

    def super_degree(self) -> int:
        """Number of odd factors."""
        return len(self.odd)

    def bidegree(self) -> Bidegree:
        return Bidegree(self.super_degree(), self.degree())

    def max_jet(self) -> int:
        """Largest jet order present; u, l and t0 count as order 0."""
        top = 0
        if self.even:
            top = self.even[-1][0]
        if self.odd and self.odd[-1] > top:
            top = self.odd[-1]
        return top

    def ucount(self) -> int:
        """Number of even factors: u0-power + jet multiplicities + l-power.

        The pencil differentials are homogeneous for this count (D2 and the
        total derivative preserve it, D1 lowers it by one), which is what
        makes every fixed-count slice finite dimensional.
        """
        return self.lam + self.u0 + sum(e for _, e in self.even)

    def in_window(self, n_max: int, l_max: int) -> bool:
        """Membership in the reporting window u0 <= n_max, lam <= l_max."""
        return self.u0 <= n_max and self.lam <= l_max

    def format(self) -> str:
        parts = []
        if self.lam:
            parts.append("l" + (f"^{self.lam}" if self.lam > 1 else ""))
        if self.u0:
            parts.append("u" + (f"^{self.u0}" if self.u0 > 1 else ""))
        for s, e in self.even:
            parts.append(f"u{s}" + (f"^{e}" if e > 1 else ""))
        for s in self.odd:
            parts.append(f"t{s}")
        return " ".join(parts)


ONE_MONO = Monomial()


def mono(lam: int = 0, u0: int = 0, even: Iterable = (), odd: Iterable = ()) -> Monomial:
    """Build a normalized monomial; validates and sorts the factor data."""
    ev = {}
    for s, e in even:
        if s < 1 or e < 0:
            raise ValueError(f"bad even jet factor u{s}^{e}")
        if e:
            ev[s] = ev.get(s, 0) + e
    od = tuple(sorted(odd))
    if any(s < 0 for s in od):
        raise ValueError("odd orders must be >= 0")
    if len(set(od)) != len(od):
        raise ValueError("repeated odd factor")
    if lam < 0 or u0 < 0:
        raise ValueError("negative exponent")
    return Monomial(lam, u0, tuple(sorted(ev.items())), od)


def _merge_odd(a: tuple, b: tuple):
    """Merge two sorted odd-factor tuples; returns (merged, sign) or None.

    The sign is the Koszul sign (-1)^inversions of moving the factors of b
    past those of a into sorted position; a repeated factor squares to zero.
    """
    if not a:
        return b, 1
    if not b:
        return a, 1
    inversions = 0
    merged = []
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            return None
        if a[i] < b[j]:
            merged.append(a[i])
            i += 1
        else:
            # b[j] jumps over the remaining factors of a
            inversions += len(a) - i
            merged.append(b[j])
            j += 1
    merged.extend(a[i:])
    merged.extend(b[j:])
    return tuple(merged), (-1 if inversions % 2 else 1)


def mul_monomials(m1: Monomial, m2: Monomial):
    """Product of two monomials: (monomial, sign) or None if it vanishes."""
    res = _merge_odd(m1.odd, m2.odd)
    if res is None:
        return None
    odd, sign = res
    ev = dict(m1.even)
    for s, e in m2.even:
        ev[s] = ev.get(s, 0) + e
    return Monomial(m1.lam + m2.lam, m1.u0 + m2.u0, tuple(sorted(ev.items())), odd), sign


def _parse_var(var: str):
    """Variable token -> ('lam', None) | ('u', s) | ('t', s)."""
    if var == "l":
        return ("lam", None)
    if var == "u":
        return ("u", 0)
    if len(var) > 1 and var[0] == "u" and var[1:].isdigit():
        s = int(var[1:])
        if s < 1:
            raise ValueError(f"bad variable {var!r} (use plain 'u' for order 0)")
        return ("u", s)
    if len(var) > 1 and var[0] == "t" and var[1:].isdigit():
        return ("t", int(var[1:]))
    raise ValueError(f"unknown variable {var!r}")


class DiffPoly:
    """Polynomial in the jet superalgebra; immutable by convention.

    Internally a map monomial -> nonzero Fraction.  Supports +, -, scalar
    and polynomial multiplication (with Koszul signs), equality, and the
    canonical text format (see parse/format below).
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[dict] = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                c = Fraction(c)
                if c:
                    clean[m] = c
        self.terms = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "DiffPoly":
        return cls()

    @classmethod
    def scalar(cls, c: Scalar) -> "DiffPoly":
        return cls({ONE_MONO: Fraction(c)})

    @classmethod
    def monomial(cls, m: Monomial, c: Scalar = 1) -> "DiffPoly":
        return cls({m: Fraction(c)})

    # -- ring structure -----------------------------------------------

    def __add__(self, other: "DiffPoly") -> "DiffPoly":
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, Fraction(0)) + c
        return DiffPoly(terms)

    def __sub__(self, other: "DiffPoly") -> "DiffPoly":
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, Fraction(0)) - c
        return DiffPoly(terms)

    def __neg__(self) -> "DiffPoly":
        return DiffPoly({m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return DiffPoly({m: c * other for m, c in self.terms.items()})
        terms = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                res = mul_monomials(m1, m2)
                if res is None:
                    continue
                m, sign = res
                terms[m] = terms.get(m, Fraction(0)) + sign * c1 * c2
        return DiffPoly(terms)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.__mul__(other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        return isinstance(other, DiffPoly) and self.terms == other.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # -- inspection ----------------------------------------------------

    def items(self):
        """Terms in canonical monomial order."""
        return sorted(self.terms.items())

    def monomials(self):
        return sorted(self.terms)

    def coeff(self, m: Monomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def bidegree(self) -> Optional[Bidegree]:
        """Bidegree if homogeneous in both gradations, else None."""
        degs = {m.bidegree() for m in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    def max_jet(self) -> int:
        return max((m.max_jet() for m in self.terms), default=0)

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"DiffPoly({format_poly(self)!r})"


ZERO = DiffPoly.zero()
ONE = DiffPoly.scalar(1)


def lam_var() -> DiffPoly:
    return DiffPoly.monomial(Monomial(lam=1))


def u_jet(s: int) -> DiffPoly:
    """The even generator u (s = 0) or u^s (s >= 1) as a polynomial."""
    if s == 0:
        return DiffPoly.monomial(Monomial(u0=1))
    return DiffPoly.monomial(Monomial(even=((s, 1),)))


def theta(s: int) -> DiffPoly:
    """The odd generator t^s as a polynomial."""
    return DiffPoly.monomial(Monomial(odd=(s,)))


# -- spec operations ----------------------------------------------------


def mul(a: DiffPoly, b: DiffPoly) -> DiffPoly:
    """Supercommutative product with Koszul signs."""
    return a * b


def partial(a: DiffPoly, var: str) -> DiffPoly:
    """Partial derivative by one generator.

    Even variables follow the usual exponent rule.  Odd variables use the
    left derivative: differentiating t^s in a monomial contributes the sign
    (-1)^k where k is the number of odd factors preceding t^s.
    """
    kind, s = _parse_var(var)
    terms = {}
    for m, c in a.terms.items():
        if kind == "lam":
            if m.lam:
                mm = Monomial(m.lam - 1, m.u0, m.even, m.odd)
                terms[mm] = terms.get(mm, Fraction(0)) + c * m.lam
        elif kind == "u":
            if s == 0:
                if m.u0:
                    mm = Monomial(m.lam, m.u0 - 1, m.even, m.odd)
                    terms[mm] = terms.get(mm, Fraction(0)) + c * m.u0
            else:
                ev = dict(m.even)
                e = ev.get(s, 0)
                if e:
                    if e == 1:
                        del ev[s]
                    else:
                        ev[s] = e - 1
                    mm = Monomial(m.lam, m.u0, tuple(sorted(ev.items())), m.odd)
                    terms[mm] = terms.get(mm, Fraction(0)) + c * e
        else:
            if s in m.odd:
                k = m.odd.index(s)
                od = m.odd[:k] + m.odd[k + 1:]
                mm = Monomial(m.lam, m.u0, m.even, od)
                sign = -1 if k % 2 else 1
                terms[mm] = terms.get(mm, Fraction(0)) + c * sign
    return DiffPoly(terms)


def dtot(a: DiffPoly) -> DiffPoly:
    """Total x-derivative: sum over s of u^{s+1} d/du^s + t^{s+1} d/dt^s.

    Annihilates l.  Raises the standard degree by one and preserves both
    the super degree and the even-factor count.
    """
    out = DiffPoly.zero()
    orders_u = set()
    orders_t = set()
    for m in a.terms:
        if m.u0:
            orders_u.add(0)
        for s, _ in m.even:
            orders_u.add(s)
        for s in m.odd:
            orders_t.add(s)
    for s in sorted(orders_u):
        out = out + u_jet(s + 1) * partial(a, "u" if s == 0 else f"u{s}")
    for s in sorted(orders_t):
        out = out + theta(s + 1) * partial(a, f"t{s}")
    return out


def bidegree(a: DiffPoly) -> Optional[Bidegree]:
    """Bidegree of a homogeneous polynomial, None if inhomogeneous."""
    return a.bidegree()


def subst_lam(a: DiffPoly, value: DiffPoly) -> DiffPoly:
    """Substitute the central parameter l by an even polynomial."""
    out = DiffPoly.zero()
    for m, c in a.terms.items():
        base = DiffPoly.monomial(Monomial(0, m.u0, m.even, m.odd), c)
        pw = value
        for _ in range(m.lam):
            base = base * pw
        out = out + base
    return out


# -- text format ---------------------------------------------------------


def format_poly(a: DiffPoly) -> str:
    """Canonical text form: terms in monomial order, explicit coefficients.

    Example: "-1/2 u t0 t1 + 2 u1".  The zero polynomial prints as "0".
    """
    if not a.terms:
        return "0"
    parts = []
    for m, c in a.items():
        body = m.format()
        parts.append(f"{c} {body}".rstrip())
    return " + ".join(parts)


def parse_poly(text: str) -> DiffPoly:
    """Inverse of format_poly; also accepts omitted unit coefficients."""
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial text")
    total = {}
    for raw in text.split("+"):
        term = raw.strip()
        if not term:
            raise ValueError(f"empty term in {text!r}")
        tokens = term.split()
        coeff = Fraction(1)
        start = 0
        try:
            coeff = Fraction(tokens[0])
            start = 1
        except ValueError:
            if tokens[0].startswith("-"):
                coeff = Fraction(-1)
                tokens[0] = tokens[0][1:]
                if not tokens[0]:
                    start = 1
        lam = u0 = 0
        even = []
        odd = []
        for tok in tokens[start:]:
            name, _, exp = tok.partition("^")
            e = int(exp) if exp else 1
            kind, s = _parse_var(name)
            if kind == "lam":
                lam += e
            elif kind == "u":
                if s == 0:
                    u0 += e
                else:
                    even.append((s, e))
            else:
                if e != 1:
                    raise ValueError(f"odd variable with exponent: {tok!r}")
                odd.append(s)
        if start == 1 and len(tokens) == 1 and coeff == 0:
            continue
        m = mono(lam, u0, even, odd)
        # odd factors were collected left to right; normalize the sign
        sign = 1
        seen = []
        for s in odd:
            k = sum(1 for x in seen if x > s)
            if k % 2:
                sign = -sign
            seen.append(s)
        total[m] = total.get(m, Fraction(0)) + sign * coeff
    return DiffPoly(total)


def poly(text: str) -> DiffPoly:
    """Shorthand constructor used pervasively in tests and demos."""
    return parse_poly(text)
