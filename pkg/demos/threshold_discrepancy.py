"""Contractivity thresholds on the two Cartan-type domains, found by bisection.

The computed constants are printed next to the published ones. For the
two-variable domain the contractivity constant comes out as 5/14; taking the
second diagonal entry as 3/sqrt(10 lambda) instead of the value read off the
curvature moves it again. Both numbers are shown.

Run with: python3 demos/threshold_discrepancy.py
"""

from fractions import Fraction

from cdkernel import contract

for tag in ("omega2", "omega3"):
    c = contract.origin_a_squares(tag)
    # lambda * a_ii^2 at the origin, as exact fractions where they are close
    print(tag, "lambda a_ii^2 =", [str(Fraction(float(x)).limit_denominator(100)) for x in c])

print(f"\n{'test':<18}{'computed':>12}{'published':>12}  discrepancy")
for reports in (contract.omega2_tests(1.0), contract.omega3_tests(1.0)):
    for rep in reports:
        frac = Fraction(rep.computed_threshold).limit_denominator(100)
        print(f"{rep.test_name:<18}{rep.computed_threshold:12.8f}{rep.published_threshold:12.8f}  "
              f"{rep.discrepancy}  (~{frac})")

notes = contract.omega2_tests(1.0)[0].notes
print("\nomega2 contractivity with a22 = 3/sqrt(10 lambda):", round(notes["threshold_with_literal_a22"], 6))

# Verdicts across the interesting window.
for lam in (0.3, 5 / 16, 0.34, 5 / 14, 0.4, 0.55, 0.6):
    o2c, o2cc = contract.omega2_tests(lam)
    print(f"lambda={lam:.4f}  contractive={o2c.verdict!s:<5}  completely contractive={o2cc.verdict}")
