"""Dense complex linear algebra used throughout the package.

Everything here is a thin, deterministic layer over LAPACK (through numpy)
with the checks the rest of the package relies on: Hermitian symmetry,
a three-way positive-definiteness verdict, PSD square roots and Schur
complements.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularityError, SymmetryError

PD_TOL = 1e-10
SYMMETRY_TOL = 1e-12

POSITIVE_DEFINITE = "positive-definite"
MARGINAL = "marginal"
INDEFINITE = "indefinite"


def as_matrix(M):
    """Return `M` as a 2-d complex array, rejecting NaN/Inf and empty input."""
    A = np.atleast_2d(np.asarray(M, dtype=complex))
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-d matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def check_hermitian(M, tol=SYMMETRY_TOL):
    """Validate Hermitian symmetry and return the matrix as a complex array.

    The tolerance is relative to the largest entry. The returned array is
    exactly Hermitian (averaged with its adjoint) so LAPACK sees clean input.
    """
    A = as_matrix(M)
    if A.shape[0] != A.shape[1]:
        raise SymmetryError(f"matrix is not square: {A.shape}")
    scale = max(np.max(np.abs(A)), 1e-300)
    defect = np.max(np.abs(A - A.conj().T))
    if defect > tol * scale:
        raise SymmetryError(f"matrix is not Hermitian (defect {defect:.3e}, scale {scale:.3e})")
    return 0.5 * (A + A.conj().T)


def eig_hermitian(M):
    """Real eigenvalues of a Hermitian matrix, ascending."""
    return np.linalg.eigvalsh(check_hermitian(M))


@dataclass(frozen=True)
class PDVerdict:
    kind: str
    min_eigenvalue: float
    max_eigenvalue: float

    @property
    def is_pd(self):
        return self.kind == POSITIVE_DEFINITE

    def to_dict(self):
        return {"class": self.kind, "min_eigenvalue": self.min_eigenvalue,
                "max_eigenvalue": self.max_eigenvalue}

    @classmethod
    def from_dict(cls, d):
        return cls(d["class"], float(d["min_eigenvalue"]), float(d["max_eigenvalue"]))


def pd_classify(M, tol=PD_TOL):
    """Three-way positive-definiteness verdict.

    positive-definite iff min_eig > tol * max(1, max_eig), indefinite iff
    min_eig < -tol * max(1, max_eig), marginal otherwise.
    """
    ev = eig_hermitian(M)
    lo, hi = float(ev[0]), float(ev[-1])
    cut = tol * max(1.0, hi)
    if lo > cut:
        kind = POSITIVE_DEFINITE
    elif lo < -cut:
        kind = INDEFINITE
    else:
        kind = MARGINAL
    return PDVerdict(kind, lo, hi)


def cholesky(M):
    """Lower Cholesky factor; raises DomainError when M is not positive definite."""
    A = check_hermitian(M)
    try:
        return np.linalg.cholesky(A)
    except np.linalg.LinAlgError as exc:
        raise DomainError("matrix is not positive definite") from exc


def sqrt_psd(M, tol=PD_TOL):
    """Hermitian PSD square root of a positive (semi)definite matrix."""
    A = check_hermitian(M)
    if pd_classify(A, tol).kind == INDEFINITE:
        raise DomainError("square root requested for an indefinite matrix")
    ev, V = np.linalg.eigh(A)
    R = (V * np.sqrt(np.clip(ev, 0.0, None))) @ V.conj().T
    return 0.5 * (R + R.conj().T)


def inverse(M, rcond=1e-14):
    A = as_matrix(M)
    if A.shape[0] != A.shape[1]:
        raise ValueError("inverse of a non-square matrix")
    s = np.linalg.svd(A, compute_uv=False)
    if s[-1] <= rcond * s[0]:
        raise SingularityError(f"matrix is singular to working precision (cond {s[0] / max(s[-1], 1e-300):.3e})")
    return np.linalg.inv(A)


def det(M):
    return complex(np.linalg.det(as_matrix(M)))


def schur_complement(M, k):
    """D - B^* A^{-1} B for the partition M = [[A, B], [B^*, D]] with A of size k."""
    H = check_hermitian(M)
    n = H.shape[0]
    if not 1 <= k < n:
        raise ValueError(f"leading block size must be in [1, {n - 1}], got {k}")
    A, B, D = H[:k, :k], H[:k, k:], H[k:, k:]
    S = D - B.conj().T @ inverse(A) @ B
    return 0.5 * (S + S.conj().T)


def singular_values(M):
    """Singular values, descending."""
    return np.linalg.svd(as_matrix(M), compute_uv=False)


@dataclass(frozen=True)
class Norms:
    operator_norm: float
    trace_norm: float
    frobenius: float


def norms(M):
    s = singular_values(M)
    return Norms(float(s[0]), float(np.sum(s)), float(np.sqrt(np.sum(s ** 2))))


def random_unitary(n, rng):
    """Haar-distributed unitary from the QR factorisation of a Ginibre matrix."""
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def random_hermitian(n, rng):
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (Z + Z.conj().T)
