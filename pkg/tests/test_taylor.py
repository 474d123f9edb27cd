import math

import numpy as np
import sympy as sp

from cdkernel import taylor


def test_multi_index_order():
    idx = taylor._multi_indices(2, 2)
    assert idx == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    assert taylor._multi_indices(3, 1) == [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]


def test_product_and_reciprocal():
    S = taylor.taylor_space((2,), (4,))
    x, y = S.variable(0, 0.3), S.variable(1, -0.2j)
    f = (1 + x * y) / (1 - x)
    X, Y = sp.symbols("X Y")
    expr = (1 + (X + sp.Rational(3, 10)) * (Y - sp.I / 5)) / (1 - (X + sp.Rational(3, 10)))
    ser = sp.expand(sp.series(sp.series(expr, X, 0, 5).removeO(), Y, 0, 5).removeO())
    poly = sp.Poly(ser, X, Y)
    for e in S.monomials:
        assert abs(f.coefficient(e) - complex(poly.coeff_monomial(X ** e[0] * Y ** e[1]))) < 1e-12


def test_log_exp_power_against_sympy():
    S = taylor.taylor_space((1,), (6,))
    x = S.variable(0, 0.4 + 0.1j)
    t = sp.symbols("t")
    x0 = sp.Rational(2, 5) + sp.I / 10
    for jet, expr in [(x.log(), sp.log(x0 + t)), (x.exp(), sp.exp(x0 + t)),
                      (x.power(0.7), (x0 + t) ** sp.Rational(7, 10))]:
        ser = sp.series(expr, t, 0, 7).removeO()
        for k in range(7):
            assert abs(jet.coefficient((k,)) - complex(ser.coeff(t, k))) < 1e-12


def test_grouped_caps_drop_cross_terms():
    S = taylor.taylor_space((1, 1), (1, 2))
    z, w = S.variable(0, 0.0), S.variable(1, 0.0)
    f = (1 - z * w).reciprocal()
    assert f.coefficient((1, 1)) == 1
    assert f.coefficient((2, 2)) == 0  # beyond the z cap
    assert set(S.monomials) == {(a, b) for a in range(2) for b in range(3)}


def test_variable_in_capped_group_is_constant():
    S = taylor.taylor_space((1, 1), (2, 0))
    w = S.variable(1, 0.5)
    assert np.allclose(w.coeffs, [0.5] + [0] * (S.size - 1))


def test_det_matches_numpy():
    rng = np.random.default_rng(0)
    M = np.eye(3) - 0.3 * (rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
    assert abs(taylor.det(M.tolist()) - np.linalg.det(M)) < 1e-12


def test_exp_log_inverse():
    S = taylor.taylor_space((2,), (5,))
    x = S.variable(0, 0.2) + S.variable(1, 0.1j) * 0.5
    back = x.log().exp()
    assert np.allclose(back.coeffs, x.coeffs, atol=1e-13)
    assert math.isclose(taylor.exp(taylor.log(2.0)).real, 2.0)
