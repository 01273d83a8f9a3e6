"""A tour of the exact jet superalgebra underneath everything else.

The coordinate ring has one even generator u with jets u1, u2, ..., one odd
generator t0 with jets t1, t2, ..., and a central even parameter l.  All
coefficients are rationals, so every identity below is checked exactly.
"""

from fractions import Fraction

from kdvcohom import (
    bidegree,
    delta_theta,
    delta_u,
    dtot,
    dtot_preimage,
    format_poly,
    poly,
)

# -- building and multiplying ------------------------------------------------

a = poly("3 u^2 u1 t0")
b = poly("1/2 t1 t2")
print("a          =", format_poly(a))
print("b          =", format_poly(b))
print("a * b      =", format_poly(a * b))

# odd generators anticommute, so squares vanish and order flips signs
t1, t2 = poly("t1"), poly("t2")
print("t1 t1      =", format_poly(t1 * t1) or "0")
print("t1 t2 + t2 t1 =", format_poly(t1 * t2 + t2 * t1) or "0")

# the bigrading: standard degree counts jet orders, super degree counts odds
print("bidegree of a:", tuple(bidegree(a)))
print("bidegree of b:", tuple(bidegree(b)))

# -- the total derivative ----------------------------------------------------

# dtot shifts every jet one order up and obeys the graded Leibniz rule
print("dtot(u u1) =", format_poly(dtot(poly("u u1"))))
lhs = dtot(a * b)
rhs = dtot(a) * b + a * dtot(b)
print("Leibniz holds exactly:", format_poly(lhs - rhs) or "0", "== 0")

# -- variational derivatives -------------------------------------------------

# the two Euler operators annihilate total derivatives: that is what makes
# densities well defined modulo dtot
exact = dtot(poly("u^3 t1 + 2 u u2 t0"))
print("delta_u   of an exact density:", format_poly(delta_u(exact)) or "0")
print("delta_t   of an exact density:", format_poly(delta_theta(exact)) or "0")

# and dtot_preimage recovers a primitive when one exists
primitive = dtot_preimage(exact)
print("recovered primitive:", format_poly(primitive))
print("dtot of it matches:", format_poly(dtot(primitive) - exact) or "0", "== 0")
print("non-derivative has no primitive:", dtot_preimage(poly("u1 t0")))
