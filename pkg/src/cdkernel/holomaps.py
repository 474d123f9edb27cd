"""Automorphisms, tangent maps and transformation rules.

Only what is needed to transport computations to the origin: the Moebius
maps of the disc, the derivative at W of the matrix-ball automorphism that
sends W to 0, the Taylor remainder of det(I - Z Z^*), and the closed-form
curvature of the Bergman kernel of omega2.
"""

from dataclasses import dataclass

import numpy as np

from . import hermlin
from .errors import DomainError
from .jetcurv import curvature
from .kernelzoo import DomainSpec, KernelSpec


@dataclass(frozen=True)
class MobiusMap:
    """z -> (z - a) / (1 - conj(a) z), the disc automorphism sending a to 0."""

    a: complex

    def __post_init__(self):
        if not abs(self.a) < 1:
            raise DomainError(f"Moebius parameter must satisfy |a| < 1, got {self.a}")

    def __call__(self, z):
        return (z - self.a) / (1 - np.conj(self.a) * z)

    def derivative(self, z):
        return (1 - abs(self.a) ** 2) / (1 - np.conj(self.a) * z) ** 2


def mobius_eval(phi, z):
    if not abs(z) < 1:
        raise DomainError(f"point {z} is outside the disc")
    return {"value": complex(phi(z)), "jacobian": complex(phi.derivative(z))}


def check_kernel_transform(phi, z, w, K=None):
    """Relative residual of B(z, w) = J(z) conj(J(w)) B(phi z, phi w) on the disc.

    The rule is checked for the Bergman kernel itself (power 1) whatever
    the power carried by `K`.
    """
    K = KernelSpec(DomainSpec("disc"), 1.0) if K is None else K.with_lambda(1.0)
    if K.domain.tag != "disc":
        raise ValueError("the Moebius transformation rule is implemented for the disc")
    lhs = K.eval_polarized([z], [w])
    rhs = phi.derivative(z) * np.conj(phi.derivative(w)) * K.eval_polarized([phi(z)], [phi(w)])
    return abs(lhs - rhs) / abs(lhs)


def check_metric_transform(phi, w, method="fd", h=None):
    """Relative residual of H(w) = |phi'(w)|^2 H(phi(w)) for the disc Bergman metric."""
    K = KernelSpec(DomainSpec("disc"), 1.0)
    kw = {} if h is None else {"h": h}
    lhs = curvature(K, [w], method=method, **kw).H[0, 0]
    rhs = abs(phi.derivative(w)) ** 2 * curvature(K, [phi(w)], method=method, **kw).H[0, 0]
    return abs(lhs - rhs) / abs(lhs)


@dataclass(frozen=True)
class MatrixBallTangentMap:
    W: np.ndarray
    jac: np.ndarray
    left: np.ndarray
    right: np.ndarray

    def apply(self, u):
        """D phi_W(W) . u = (I - W W^*)^{-1/2} u (I - W^* W)^{-1/2}."""
        return self.left @ u @ self.right


def _inv_sqrt(M):
    ev, V = np.linalg.eigh(hermlin.check_hermitian(M))
    return (V / np.sqrt(ev)) @ V.conj().T


def mb_tangent_jacobian(W):
    """Matrix of u -> (I - W W^*)^{-1/2} u (I - W^* W)^{-1/2} on row-major vec(u).

    Row-major vectorisation turns u -> L u R into kron(L, R^t); R is
    Hermitian, so R^t = conj(R).
    """
    W = np.atleast_2d(np.asarray(W, dtype=complex))
    r, s = W.shape
    if np.linalg.norm(W, 2) >= 1:
        raise DomainError("W must lie in the open unit ball of the operator norm")
    L = _inv_sqrt(np.eye(r) - W @ W.conj().T)
    R = _inv_sqrt(np.eye(s) - W.conj().T @ W)
    return MatrixBallTangentMap(W, np.kron(L, R.T), L, R)


def curvature_via_homogeneity(lam, W):
    """(H^t)^{-1}(W) = (conj(J)^t J)^{-1} / (lam p) for the matrix ball, J = D phi_W(W)."""
    tm = mb_tangent_jacobian(W)
    r, s = tm.W.shape
    J = tm.jac
    M = hermlin.inverse(J.conj().T @ J) / (lam * (r + s))
    return 0.5 * (M + M.conj().T)


def det_expansion_remainder(Z):
    """det(I - Z Z^*) - 1 + sum_i ||Z_i||^2, plus the r = 2 closed form when applicable."""
    Z = np.atleast_2d(np.asarray(Z, dtype=complex))
    r = Z.shape[0]
    X = Z @ Z.conj().T  # X[i, j] = <Z_i, Z_j>
    d = np.linalg.det(np.eye(r) - X).real
    rem = d - 1.0 + np.trace(X).real
    closed = None
    if r == 2:
        closed = (X[0, 0] * X[1, 1]).real - abs(X[0, 1]) ** 2
    return {"remainder": float(rem), "closed_r2": closed}


def omega2_curv_closed(w):
    """Closed-form d_i dbar_j log B(w, w) for omega2's Bergman kernel.

    With u = 1 - |w1|^2, C = u^2 - |w2|^2 and D = 3 u^2 + |w2|^2:
    H11 = 6 (1/C - 1/D) + 12 |w1|^2 |w2|^2 (1/C^2 + 1/D^2),
    H22 = 3 u^2 (1/C^2 + 1/D^2),
    H21 = 6 w1 conj(w2) u (1/C^2 + 1/D^2), H12 = conj(H21).
    """
    w = DomainSpec("omega2").validate(w)
    w1, w2 = w
    u = 1 - abs(w1) ** 2
    C = u ** 2 - abs(w2) ** 2
    D = 3 * u ** 2 + abs(w2) ** 2
    S = 1 / C ** 2 + 1 / D ** 2
    h11 = 6 * (1 / C - 1 / D) + 12 * abs(w1) ** 2 * abs(w2) ** 2 * S
    h21 = 6 * w1 * np.conj(w2) * u * S
    h22 = 3 * u ** 2 * S
    return np.array([[h11, np.conj(h21)], [h21, h22]], dtype=complex)


def ball_metric(w):
    """D theta_w(w)^t conj(D theta_w(w)) for the Euclidean ball (the curvature of (1 - <z, w>)^{-1})."""
    w = np.asarray(w, dtype=complex)
    J = mb_tangent_jacobian(w.reshape(1, -1)).jac
    M = J.T @ J.conj()
    return 0.5 * (M + M.conj().T)
