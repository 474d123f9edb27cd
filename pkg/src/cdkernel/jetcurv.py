"""Jet Grammians, curvature, the localized tuple N(w) and the homomorphism rho_N(w).

Conventions
-----------
* ``JetMatrix.gram[a, b] = d^a dbar^b K^lambda(w, w) / (a! b!)`` with rows and
  columns labelled by multi-indices of total order <= n (graded
  co-lexicographic order, so index 0 is the zero multi-index).
* ``CurvatureMatrix.H[i, j] = d_i dbar_j log K^lambda(w, w)``. This is minus
  the curvature of the Cowen-Douglas bundle, so H is positive definite.
* ``A(w)`` satisfies ``A^t conj(A) = (H^t)^{-1}``; the gauge is fixed by taking
  ``A^t`` to be the Hermitian square root. The k-th nilpotent matrix N_k has
  first row ``(0, A[:, k])`` and zeros elsewhere.
"""

from dataclasses import dataclass, field

import numpy as np

from . import hermlin, taylor
from .errors import DomainError, UnsupportedOrderError
from .kernelzoo import factorial, fd_derivative, jet_fd, kernel_jet, multi_indices

MAX_JET_ORDER = 4
IDENTITY_TOL = 1e-10


@dataclass(frozen=True)
class JetMatrix:
    point: np.ndarray
    lam: float
    order: int
    index_list: list
    gram: np.ndarray

    @property
    def size(self):
        return len(self.index_list)


@dataclass(frozen=True)
class CurvatureMatrix:
    point: np.ndarray
    lam: float
    H: np.ndarray

    @property
    def cowen_douglas(self):
        """The curvature matrix with the operator-theory sign, -H."""
        return -self.H


def _unit(m, i):
    return tuple(int(k == i) for k in range(m))


def jet_gram(K, w, order, method="analytic", h=None):
    """Grammian of the antiholomorphic jets of K^lambda(., w) up to `order`.

    method="fd" builds the same matrix from finite differences (oracle only;
    practical for order <= 2).
    """
    if not 0 <= order <= MAX_JET_ORDER:
        raise UnsupportedOrderError(f"jet order must be in [0, {MAX_JET_ORDER}], got {order}")
    w = K.domain.validate(w)
    m = K.dim
    idx = multi_indices(m, order)
    n = len(idx)
    G = np.empty((n, n), dtype=complex)
    if method == "analytic":
        jet = kernel_jet(K, w, order, order)
        for a, alpha in enumerate(idx):
            for b, beta in enumerate(idx):
                G[a, b] = jet.coefficient(alpha + beta)
    elif method == "fd":
        kw = {} if h is None else {"h": h}
        for a, alpha in enumerate(idx):
            for b in range(a, n):
                beta = idx[b]
                G[a, b] = jet_fd(K, w, alpha, beta, **kw) / (factorial(alpha) * factorial(beta))
                G[b, a] = np.conj(G[a, b])
    else:
        raise ValueError(f"unknown method {method!r}")
    G = 0.5 * (G + G.conj().T)
    return JetMatrix(w, K.lam, order, idx, G)


def curvature(K, w, method="analytic", h=None):
    """H[i, j] = d_i dbar_j log K^lambda at w."""
    w = K.domain.validate(w)
    m = K.dim
    if method == "analytic":
        space = taylor.taylor_space((m, m), (1, 1))
        z = [space.variable(i, w[i]) for i in range(m)]
        zeta = [space.variable(m + i, np.conj(w[i])) for i in range(m)]
        L = K.log_base(z, zeta) * K.lam
        H = np.array([[L.coefficient(_unit(m, i) + _unit(m, j)) for j in range(m)] for i in range(m)])
    elif method == "fd":
        kw = {} if h is None else {"h": h}

        def log_kernel(z, zeta):
            return K.lam * K.log_base(z, zeta)

        H = np.empty((m, m), dtype=complex)
        for i in range(m):
            for j in range(m):
                H[i, j] = fd_derivative(log_kernel, K.domain, w, _unit(m, i) + _unit(m, j), **kw)
    else:
        raise ValueError(f"unknown method {method!r}")
    return CurvatureMatrix(w, K.lam, 0.5 * (H + H.conj().T))


@dataclass(frozen=True)
class LocalTuple:
    point: np.ndarray
    A: np.ndarray
    N: list
    curvature: CurvatureMatrix = field(repr=False)

    @property
    def m(self):
        return self.A.shape[0]

    def trace_gram(self):
        """The matrix ((tr N_i N_j^*))."""
        return np.array([[np.trace(Ni @ Nj.conj().T) for Nj in self.N] for Ni in self.N])

    def identity_residual(self):
        """Relative max-norm defect of tr(N_i N_j^*) = (H^t)^{-1}."""
        target = hermlin.inverse(self.curvature.H.T)
        return float(np.max(np.abs(self.trace_gram() - target)) / np.max(np.abs(target)))

    def shifted(self):
        """The commuting tuple N_k + w_k I."""
        eye = np.eye(self.m + 1)
        return [Nk + wk * eye for Nk, wk in zip(self.N, self.point)]

    def rho(self, f):
        """rho_N(w)(f) = [[f(w), grad f(w) A^t], [0, f(w) I]] for a Polynomial f."""
        if f.nvars != self.m:
            raise ValueError(f"polynomial in {f.nvars} variables for an {self.m}-tuple")
        fw = f(self.point)
        out = fw * np.eye(self.m + 1, dtype=complex)
        out[0, 1:] = f.gradient(self.point) @ self.A.T
        return out

    def regauge(self, U):
        """Same tuple in another orthonormal frame: A^t -> A^t U."""
        A = (self.A.T @ U).T
        return LocalTuple(self.point, A, _nilpotents(A), self.curvature)


def _nilpotents(A):
    m = A.shape[0]
    out = []
    for k in range(m):
        Nk = np.zeros((m + 1, m + 1), dtype=complex)
        Nk[0, 1:] = A[:, k]
        out.append(Nk)
    return out


def local_tuple(K, w, method="analytic"):
    curv = curvature(K, w, method=method)
    if not hermlin.pd_classify(curv.H).is_pd:
        raise DomainError("curvature is not positive definite; the localization is undefined")
    At = hermlin.sqrt_psd(hermlin.inverse(curv.H.T))
    A = At.T
    lt = LocalTuple(curv.point, A, _nilpotents(A), curv)
    res = lt.identity_residual()
    if res > IDENTITY_TOL:
        raise ArithmeticError(f"trace identity violated by {res:.3e}")
    return lt


@dataclass(frozen=True)
class WallachResult:
    index: int
    saturated: bool
    verdicts: list

    @property
    def level_count(self):
        """Number of jet levels 0..index whose Grammian is positive definite."""
        return self.index + 1

    def describe(self):
        return f">= {self.index}" if self.saturated else str(self.index)


def wallach_index(K, w, max_order=MAX_JET_ORDER, tol=hermlin.PD_TOL):
    """Largest n <= max_order such that the jet Grammians of orders 1..n are PD."""
    if not 1 <= max_order <= MAX_JET_ORDER:
        raise UnsupportedOrderError(f"max_order must be in [1, {MAX_JET_ORDER}]")
    verdicts, index, broken = [], 0, False
    G = jet_gram(K, w, max_order).gram
    for n in range(1, max_order + 1):
        size = len(multi_indices(K.dim, n))
        v = hermlin.pd_classify(G[:size, :size], tol)
        verdicts.append(v)
        if not broken and v.is_pd:
            index = n
        else:
            broken = True
    return WallachResult(index, not broken, verdicts)


class Polynomial:
    """Polynomial with complex coefficients: {exponent tuple: coefficient}."""

    def __init__(self, nvars, terms=None):
        self.nvars = int(nvars)
        self.terms = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != self.nvars or min(e) < 0:
                raise ValueError(f"bad exponent {e} for {self.nvars} variables")
            if c != 0:
                self.terms[e] = self.terms.get(e, 0) + complex(c)

    @classmethod
    def coordinate(cls, nvars, k):
        return cls(nvars, {_unit(nvars, k): 1.0})

    @classmethod
    def constant(cls, nvars, c=1.0):
        return cls(nvars, {(0,) * nvars: c})

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return complex(sum(c * np.prod(z ** np.array(e)) for e, c in self.terms.items()))

    def gradient(self, z):
        z = np.asarray(z, dtype=complex)
        g = np.zeros(self.nvars, dtype=complex)
        for e, c in self.terms.items():
            for k, ek in enumerate(e):
                if ek:
                    d = list(e)
                    d[k] -= 1
                    g[k] += c * ek * np.prod(z ** np.array(d))
        return g

    def __add__(self, other):
        out = Polynomial(self.nvars, self.terms)
        for e, c in other.terms.items():
            out.terms[e] = out.terms.get(e, 0) + c
        return out

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return Polynomial(self.nvars, {e: c * other for e, c in self.terms.items()})
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial(self.nvars, out)

    __rmul__ = __mul__

    def __repr__(self):
        return f"Polynomial({self.nvars}, {self.terms})"


def rho_matrix(K, w, f):
    return local_tuple(K, w).rho(f)
