"""The compatible Poisson pair and its one-parameter pencil.

Both structures are given by odd quadratic densities.  Their variational
Schouten brackets vanish exactly, which is the full set of compatibility
conditions, and the pencil differential obtained by subtracting l times
the first structure squares to zero.  A deliberately corrupted second
density fails the same battery immediately.
"""

from kdvcohom import (
    D1,
    D2,
    OperatorSpec,
    P1_DENSITY,
    P2_DENSITY,
    Window,
    d_lambda,
    format_poly,
    poly,
    run_verify_suite,
    schouten,
)

print("first density :", format_poly(P1_DENSITY))
print("second density:", format_poly(P2_DENSITY))

# -- compatibility as vanishing brackets --------------------------------------

for tag, x, y in (("[P1,P1]", P1_DENSITY, P1_DENSITY),
                  ("[P2,P2]", P2_DENSITY, P2_DENSITY),
                  ("[P1,P2]", P1_DENSITY, P2_DENSITY)):
    print(f"{tag} vanishes as a functional:", schouten(x, y).is_zero())

# -- the evolutionary operators ----------------------------------------------

for name, op in (("D1", D1), ("D2", D2)):
    print(f"{name}(u)  =", format_poly(op(poly("u"))))
    print(f"{name}(t0) =", format_poly(op(poly("t0"))) or "0")

sample = poly("u u1 t0 t2")
print("pencil differential of", format_poly(sample), "=",
      format_poly(d_lambda(sample)))
print("pencil squares to zero on it:",
      format_poly(d_lambda(d_lambda(sample))) or "0", "== 0")

# -- identity suites and the negative control ---------------------------------

for suite in ("d1_squared", "d2_squared", "d1d2_anticommute",
              "dlambda_squared"):
    res = run_verify_suite(suite, max_d=4, window=Window(2, 1))
    print(f"{res.name}: {'PASS' if res.passed else 'FAIL'} ({res.detail})")

# an operator that is not Poisson: same odd seed, wrong even seed
corrupted = OperatorSpec(poly("u t1"), poly("1/2 t0 t1"), name="corrupted")
control = run_verify_suite("d2_squared", max_d=4, window=Window(2, 1),
                           second_structure=corrupted)
print("corrupted bracket caught:", not control.passed, "--", control.detail)
