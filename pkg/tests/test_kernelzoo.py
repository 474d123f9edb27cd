import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import beta

from cdkernel.errors import BranchError, DomainError, ParseError, StepError
from cdkernel.kernelzoo import (DomainSpec, KernelSpec, jet_analytic, jet_fd, multi_indices,
                                omega3_closed, omega3_coeff, omega3_series, parse_kernel,
                                random_point)

ZOO = ["disc", "polydisc:2", "ball:2", "matrix-ball:2x2", "matrix-ball:2x3", "omega2", "omega3"]


def test_origin_values():
    assert KernelSpec(DomainSpec("disc")).eval_polarized([0], [0]) == 1
    assert KernelSpec(DomainSpec("matrix-ball", r=2, s=2)).eval_polarized(np.zeros(4), np.zeros(4)) == 1
    assert abs(KernelSpec(DomainSpec("omega2")).eval_polarized([0, 0], [0, 0]) - 3) < 1e-15
    assert abs(parse_kernel("omega2:normalized").eval_polarized([0, 0], [0, 0]) - 1) < 1e-15
    assert abs(KernelSpec(DomainSpec("omega3")).eval_polarized(np.zeros(3), np.zeros(3)) - 1) < 1e-15


def test_closed_forms_of_base_kernels():
    rng = np.random.default_rng(0)
    z, w = random_point(DomainSpec("disc"), rng)[0], random_point(DomainSpec("disc"), rng)[0]
    K = KernelSpec(DomainSpec("disc"), 0.7)
    assert abs(K.eval_polarized([z], [w]) - (1 - z * np.conj(w)) ** (-1.4)) < 1e-12
    b = DomainSpec("ball", n=3)
    z, w = random_point(b, rng), random_point(b, rng)
    assert abs(KernelSpec(b, 1.0).eval_polarized(z, w) - (1 - np.vdot(w, z)) ** -4) < 1e-12
    mb = DomainSpec("matrix-ball", r=2, s=3)
    Z, W = random_point(mb, rng), random_point(mb, rng)
    d = np.linalg.det(np.eye(2) - Z.reshape(2, 3) @ W.reshape(2, 3).conj().T)
    assert abs(KernelSpec(mb, 1.0).eval_polarized(Z, W) - d ** -5) < 1e-10 * abs(d ** -5)
    o2 = DomainSpec("omega2")
    z, w = random_point(o2, rng), random_point(o2, rng)
    u = 1 - z[0] * np.conj(w[0])
    v = z[1] * np.conj(w[1])
    raw = (3 * u ** 2 + v) / (u ** 2 - v) ** 3
    assert abs(KernelSpec(o2, 1.0).eval_polarized(z, w) - raw) < 1e-12 * abs(raw)


def test_omega3_coefficients():
    assert omega3_coeff(0, 0, 0) == pytest.approx(1, rel=1e-14)
    assert omega3_coeff(1, 0, 0) == pytest.approx(3, rel=1e-14)
    assert omega3_coeff(0, 1, 0) == pytest.approx(4.5, rel=1e-14)
    for n, m, p in [(2, 3, 1), (0, 5, 4), (7, 0, 2)]:
        exact = (m + 1) / (4 * beta(n + 1, m + 2) * beta(p + 1, m + 2))
        assert omega3_coeff(n, m, p) == pytest.approx(exact, rel=1e-12)
    assert math.isfinite(omega3_coeff(200, 200, 200))


def test_omega3_series_matches_closed_form_and_truncation():
    rng = np.random.default_rng(1)
    d = DomainSpec("omega3")
    for _ in range(10):
        z = random_point(d, rng, 0.5)
        w = random_point(d, rng, 0.5)
        zeta = np.conj(w)
        s10, s20, s40 = (omega3_series(z, zeta, t) for t in (10, 20, 40))
        assert abs(s20 - s40) < 1e-8 and abs(s10 - s20) < 1e-3
        assert abs(s40 - omega3_closed(z, zeta)) < 1e-12


@pytest.mark.parametrize("name", ZOO)
def test_hermitian_symmetry_and_diagonal_positivity(name):
    rng = np.random.default_rng(2)
    K = parse_kernel(name, 1.3)
    for _ in range(100):
        z, w = random_point(K.domain, rng), random_point(K.domain, rng)
        a, b = K.eval_polarized(z, w), K.eval_polarized(w, z)
        assert abs(a - np.conj(b)) <= 1e-12 * max(1, abs(a))
    for lam in (0.1, 0.5, 1, 2.5):
        v = K.with_lambda(lam).eval_polarized(z, z)
        assert v.real > 0 and abs(v.imag) <= 1e-12 * v.real


@pytest.mark.parametrize("name", ZOO)
def test_power_law(name):
    rng = np.random.default_rng(3)
    K = parse_kernel(name)
    for _ in range(20):
        l1, l2 = rng.uniform(0.1, 2, size=2)
        z, w = random_point(K.domain, rng), random_point(K.domain, rng)
        lhs = K.with_lambda(l1 + l2).eval_polarized(z, w)
        rhs = K.with_lambda(l1).eval_polarized(z, w) * K.with_lambda(l2).eval_polarized(z, w)
        assert abs(lhs - rhs) <= 1e-12 * abs(lhs)


def test_domain_validation():
    o2 = DomainSpec("omega2")
    with pytest.raises(DomainError, match=r"\|z2\| < 1 - \|z1\|\^2"):
        o2.validate([0.9, 0.9])
    with pytest.raises(DomainError):
        DomainSpec("disc").validate([1.0])
    with pytest.raises(DomainError):
        DomainSpec("matrix-ball", r=2, s=2).validate([1, 0, 0, 0.5])
    with pytest.raises(DomainError):
        DomainSpec("ball", n=2).validate([0.1])
    with pytest.raises(DomainError):
        KernelSpec(DomainSpec("disc"), -1.0)


def test_parse_kernel():
    assert parse_kernel("matrix-ball:2x3").dim == 6
    assert parse_kernel("ball:4").domain.n == 4
    assert parse_kernel("omega2:normalized").normalized
    for bad in ("sphere", "ball:x", "disc:normalized"):
        with pytest.raises(ParseError):
            parse_kernel(bad)


def test_branch_error_for_poor_truncation():
    K = KernelSpec(DomainSpec("omega3"), 1.0, truncation=1)
    with pytest.raises(BranchError):
        K.eval_polarized([0, 0.99j, 0], [0, -0.99j, 0])


def test_disc_jets_analytic_vs_fd():
    K = KernelSpec(DomainSpec("disc"), 0.7)
    for a in range(3):
        for b in range(3):
            exact = jet_analytic(K, [0.3], (a,), (b,))
            assert abs(jet_fd(K, [0.3], (a,), (b,)) - exact) <= 1e-6 * max(1, abs(exact))
    assert jet_analytic(K, [0.0], (1,), (1,)) == pytest.approx(1.4)


def test_disc_first_jet_closed_form():
    # d dbar (1 - z wbar)^(-2 lam) at z = w
    lam, w = 0.7, 0.3 + 0.2j
    K = KernelSpec(DomainSpec("disc"), lam)
    t = abs(w) ** 2
    exact = 2 * lam * (1 - t) ** (-2 * lam - 2) * (1 + 2 * lam * t)
    assert abs(jet_analytic(K, [w], (1,), (1,)) - exact) < 1e-12


@pytest.mark.parametrize("name", ZOO)
def test_jets_fd_oracle_and_conjugate_symmetry(name):
    rng = np.random.default_rng(4)
    K = parse_kernel(name, 0.8)
    w = random_point(K.domain, rng, 0.6)
    idx = multi_indices(K.dim, 1)
    for alpha in idx:
        for beta_ in idx:
            an = jet_analytic(K, w, alpha, beta_)
            assert abs(an - np.conj(jet_analytic(K, w, beta_, alpha))) <= 1e-12 * max(1, abs(an))
            fd = jet_fd(K, w, alpha, beta_)
            assert abs(fd - an) <= 1e-6 * max(1, abs(an))


def test_high_order_jets():
    K = KernelSpec(DomainSpec("disc"), 0.7)
    w = [0.3]
    an = jet_analytic(K, w, (2,), (2,))
    assert abs(jet_fd(K, w, (2,), (2,)) - an) <= 1e-6 * abs(an)
    assert jet_analytic(K, w, (0,), (0,)) == K.eval_polarized(w, w)
    assert jet_fd(K, w, (0,), (0,)) == K.eval_polarized(w, w)


def test_fd_convergence_order():
    K = KernelSpec(DomainSpec("disc"), 0.7)
    w = [0.3 + 0.1j]
    exact = jet_analytic(K, w, (1,), (1,))
    errs = [abs(jet_fd(K, w, (1,), (1,), h=h, richardson=False, scale_step=False) - exact)
            for h in (1e-2, 5e-3)]
    assert math.log2(errs[0] / errs[1]) >= 1.8


def test_fd_step_error_near_boundary():
    K = KernelSpec(DomainSpec("disc"), 1.0)
    with pytest.raises(StepError):
        jet_fd(K, [0.9999], (1,), (1,), h=1e-3)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 3.0), st.floats(0.0, 0.85), st.floats(0, 2 * math.pi))
def test_ball_diagonal_closed_form(lam, r, phi):
    K = KernelSpec(DomainSpec("ball", n=2), lam)
    w = np.array([r * math.cos(phi), 1j * r * math.sin(phi)])
    assert K.eval_diagonal(w) == pytest.approx((1 - r * r) ** (-3 * lam), rel=1e-12)
