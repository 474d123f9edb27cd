"""Contractivity tests for the localized homomorphism rho_N(w).

The contractivity criterion is ||A(0)^t : l2 -> (C^m, C_0)|| <= 1, with C_0
the Caratheodory norm at the origin: the Euclidean norm for the ball, the
sup norm for the polydisc and the operator norm of the reshaped r x s
matrix for the matrix ball. For omega2 and omega3 only the explicit scalar
inequalities at the origin are available; they are evaluated with the
A(0) entries computed from the kernels, and every threshold is recomputed by
bisection and compared with the published value.
"""

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import hermlin
from .errors import DomainError
from .holomaps import ball_metric
from .jetcurv import curvature, local_tuple
from .kernelzoo import DomainSpec, KernelSpec

BISECTION_TOL = 1e-9
DISCREPANCY_TOL = 1e-6
BOUNDARY_SLACK = 1e-9

MATRIX_OP_RESTARTS = 64
MATRIX_OP_STEPS = 200


@dataclass(frozen=True)
class OriginNorm:
    """Caratheodory norm at the origin: 'l2', 'linf' or 'matrix-op' (r x s)."""

    kind: str
    r: int = 1
    s: int = 1

    def __post_init__(self):
        if self.kind not in ("l2", "linf", "matrix-op"):
            raise ValueError(f"unknown origin norm {self.kind!r}")

    @property
    def dual_kind(self):
        return {"l2": "l2", "linf": "l1", "matrix-op": "trace"}[self.kind]

    def __call__(self, v):
        v = np.asarray(v, dtype=complex)
        if self.kind == "l2":
            return float(np.linalg.norm(v))
        if self.kind == "linf":
            return float(np.max(np.abs(v)))
        return float(np.linalg.norm(v.reshape(self.r, self.s), 2))

    def dual(self, v):
        v = np.asarray(v, dtype=complex)
        if self.kind == "l2":
            return float(np.linalg.norm(v))
        if self.kind == "linf":
            return float(np.sum(np.abs(v)))
        return float(np.sum(np.linalg.svd(v.reshape(self.r, self.s), compute_uv=False)))

    @classmethod
    def for_domain(cls, domain):
        if domain.tag in ("disc", "ball"):
            return cls("l2")
        if domain.tag == "polydisc":
            return cls("linf")
        if domain.tag == "matrix-ball":
            return cls("matrix-op", domain.r, domain.s)
        raise ValueError(f"no closed-form origin norm for {domain.tag}")


@dataclass(frozen=True)
class ANorm:
    value: float
    exact: bool
    restarts: int = 0


def _rank_one_sup(B, r, s, rng, restarts, steps):
    """max ||B vec(u conj(v)^t)|| over unit u in C^r, v in C^s, by alternating maximisation.

    Each half-step solves its subproblem exactly (top singular vector), so the
    objective never decreases.
    """
    best = 0.0
    Bt = B.reshape(B.shape[0], r, s)
    for _ in range(restarts):
        v = rng.standard_normal(s) + 1j * rng.standard_normal(s)
        v /= np.linalg.norm(v)
        val = 0.0
        for _ in range(steps):
            Mu = Bt @ v  # columns act on u
            _, sv, Vh = np.linalg.svd(Mu, full_matrices=False)
            u = Vh[0].conj()
            Mv = np.einsum("kij,i->kj", Bt, u)
            _, sv, Vh = np.linalg.svd(Mv, full_matrices=False)
            v = Vh[0].conj()
            if sv[0] - val <= 1e-15 * max(1.0, sv[0]):
                val = sv[0]
                break
            val = sv[0]
        best = max(best, float(val))
    return best


def a_norm(A, target, rng=None, restarts=MATRIX_OP_RESTARTS, steps=MATRIX_OP_STEPS):
    """||A^t||_{l2 -> target}."""
    A = hermlin.as_matrix(A)
    m = A.shape[0]
    if A.shape != (m, m) or (target.kind == "matrix-op" and m != target.r * target.s):
        raise ValueError(f"matrix of shape {A.shape} does not match target {target}")
    At = A.T
    if target.kind == "l2":
        return ANorm(hermlin.norms(At).operator_norm, True)
    if target.kind == "linf":
        return ANorm(float(np.max(np.linalg.norm(At, axis=1))), True)
    c = At[0, 0]
    if np.allclose(At, c * np.eye(m), rtol=0, atol=1e-15 * max(1.0, abs(c))):
        # a unit vector reshaped to a rank-one matrix attains the operator norm |c|
        return ANorm(float(abs(c)), True)
    rng = np.random.default_rng(0) if rng is None else rng
    # ||A^t x||_op = sup_{u, v} |<A^t x, vec(u conj(v)^t)>|, so the norm is
    # sup over rank-one unit g of ||(A^t)^* g||
    val = _rank_one_sup(At.conj().T, target.r, target.s, rng, restarts, steps)
    return ANorm(val, False, restarts)


def trace_to_op_norm(M, r, s, rng=None, restarts=16, steps=200):
    """Norm of M acting on r x s matrices, from the trace norm to the operator norm.

    The trace-norm unit ball is the closed convex hull of unit rank-one
    matrices, so the supremum is |<g, M x>| over unit rank-one x and g.
    Alternating maximisation: for fixed x the best g is the top singular pair
    of M x, and for fixed g the best x is the top singular pair of M^* g.
    """
    M = hermlin.as_matrix(M)
    rng = np.random.default_rng(0) if rng is None else rng
    best = 0.0
    for _ in range(restarts):
        x = rng.standard_normal((r, s)) + 1j * rng.standard_normal((r, s))
        x = _top_rank_one(x)
        val = 0.0
        for _ in range(steps):
            y = (M @ x.ravel()).reshape(r, s)
            new = float(np.linalg.norm(y, 2))
            x = _top_rank_one((M.conj().T @ _top_rank_one(y).ravel()).reshape(r, s))
            if new - val <= 1e-15 * max(1.0, new):
                val = max(val, new)
                break
            val = new
        best = max(best, val)
    return best


def _top_rank_one(X):
    U, _, Vh = np.linalg.svd(X)
    return np.outer(U[:, 0], Vh[0])


# ------------------------------------------------------------------ the ball

def ball_curvature_inequality(K, w=None):
    """Pointwise inequality H_K(w) >= H_B(w), B(z, w) = (1 - <z, w>)^{-1}.

    At the origin this reads H(0) >= I, i.e. lambda (n + 1) >= 1. Away from the
    origin the right-hand side is transported by the automorphism sending w to
    0: H_B(w) = D theta_w(w)^t conj(D theta_w(w)).
    """
    if K.domain.tag != "ball":
        raise ValueError("ball_curvature_inequality needs a ball kernel")
    n = K.domain.n
    w = np.zeros(n, dtype=complex) if w is None else K.domain.validate(w)
    H = curvature(K, w).H
    gap = H - ball_metric(w)
    ev = hermlin.eig_hermitian(0.5 * (gap + gap.conj().T))
    return bool(ev[0] >= -BOUNDARY_SLACK * max(1.0, np.max(np.abs(H))))


# ------------------------------------------------------------ matrix ball

def pmat_norm(lam, r, s):
    """||(H^t)^{-1}(0)||_{trace -> op} for the matrix ball: 1 / (lam (r + s))."""
    if not lam > 0:
        raise DomainError("lambda must be positive")
    return 1.0 / (lam * (r + s))


def pmat_norm_by_definition(lam, r, s, rng=None):
    """Same quantity through the sup over the trace-norm unit ball."""
    K = KernelSpec(DomainSpec("matrix-ball", r=r, s=s), lam)
    H = curvature(K, np.zeros(r * s)).H
    return trace_to_op_norm(hermlin.inverse(H.T), r, s, rng)


def nu_tests(lam, r, s):
    nu = lam * (r + s)
    return {"nu": nu, "contractive_necessary": nu >= 1, "completely_contractive_necessary": nu >= s}


def pa_block(V, r, s):
    """Sum over (i, j) of V_k (x) E_ij, V_k the row vector with v_ij in slot k = i s + j."""
    V = np.asarray(V, dtype=complex).reshape(r, s)
    m = r * s
    out = np.zeros((r, m * s), dtype=complex)
    for i in range(r):
        for j in range(s):
            Vk = np.zeros((1, m), dtype=complex)
            Vk[0, i * s + j] = V[i, j]
            E = np.zeros((r, s))
            E[i, j] = 1.0
            out += np.kron(Vk, E)
    return out


def pa_operator(A, r, s):
    """sum_k N_k (x) E_k, the value of rho_N (x) I on P_A(z) = sum z_ij E_ij at the origin."""
    A = hermlin.as_matrix(A)
    m = r * s
    out = np.zeros(((m + 1) * r, (m + 1) * s), dtype=complex)
    for k in range(m):
        Nk = np.zeros((m + 1, m + 1), dtype=complex)
        Nk[0, 1:] = A[:, k]
        E = np.zeros((r, s))
        E[k // s, k % s] = 1.0
        out += np.kron(Nk, E)
    return out


def pa_norm(r, s, V=None, lam=None):
    """Squared norm of (rho_N (x) I)(P_A): closed formula and direct SVD.

    V defaults to the diagonal of A(0) for the matrix ball with power lam,
    i.e. every v_ij = (lam (r + s))^{-1/2}.
    """
    if V is None:
        if lam is None:
            raise ValueError("give either V or lam")
        K = KernelSpec(DomainSpec("matrix-ball", r=r, s=s), lam)
        V = np.diag(local_tuple(K, np.zeros(r * s)).A)
    V = np.asarray(V, dtype=complex).reshape(r, s)
    formula = float(np.max(np.sum(np.abs(V) ** 2, axis=1)))
    direct = float(hermlin.norms(pa_block(V, r, s)).operator_norm ** 2)
    via_tuple = float(hermlin.norms(pa_operator(np.diag(V.ravel()), r, s)).operator_norm ** 2)
    return {"formula": formula, "direct": direct, "via_tuple": via_tuple}


# ---------------------------------------------------- omega2 / omega3 reports

@dataclass
class ContractivityReport:
    test_name: str
    lam: float
    verdict: bool
    computed_threshold: float
    published_threshold: float
    discrepancy: bool
    notes: dict = field(default_factory=dict)

    def to_dict(self):
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        d["lam"] = d.pop("lambda")
        return cls(**d)


def bisect_threshold(pred, lo, hi, tol=BISECTION_TOL):
    """Smallest lambda in [lo, hi] with pred(lambda) true, for pred monotone nondecreasing."""
    if not pred(hi):
        raise ValueError(f"predicate false at the upper end {hi}")
    if pred(lo):
        return lo
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


def origin_a_squares(tag, truncation=20):
    """Diagonal of (H^t)^{-1}(0) at lambda = 1, i.e. lambda * a_ii(0)^2."""
    K = KernelSpec(DomainSpec(tag), 1.0, truncation)
    H = curvature(K, np.zeros(K.dim)).H
    return np.real(np.diag(hermlin.inverse(H.T)))


def _report(name, lam, pred, published, notes, lo=1e-3, hi=100.0):
    thr = bisect_threshold(pred, lo, hi)
    return ContractivityReport(name, float(lam), bool(pred(lam)), thr, published,
                               abs(thr - published) > DISCREPANCY_TOL, notes)


def omega2_contract_predicate(c11, c22):
    """(2 a11^2 - 1)^2 <= 1 - a22^2 with a_ii^2 = c_ii / lambda."""
    def pred(lam):
        a11, a22 = c11 / lam, c22 / lam
        return (2 * a11 - 1) ** 2 <= (1 - a22) + BOUNDARY_SLACK
    return pred


def omega2_tests(lam, c=None):
    """Contractivity and complete-contractivity reports for omega2 at the origin."""
    c11, c22 = origin_a_squares("omega2") if c is None else c
    contract = omega2_contract_predicate(c11, c22)
    literal = omega2_contract_predicate(0.25, 0.9)  # a22 = 3 / sqrt(10 lambda) taken literally

    def complete(l):
        return c11 / l + c22 / l <= 1 + BOUNDARY_SLACK

    c11, c22 = float(c11), float(c22)
    notes = {"a11_sq_times_lambda": c11, "a22_sq_times_lambda": c22,
             "threshold_with_literal_a22": bisect_threshold(literal, 1e-3, 100.0),
             "a22_candidates_at_lambda": {"from_curvature": math.sqrt(c22 / lam),
                                          "literal": 3 / math.sqrt(10 * lam)}}
    return (_report("omega2-contract", lam, contract, 5 / 16, notes),
            _report("omega2-cc", lam, complete, 11 / 20, {"a11_sq_times_lambda": c11,
                                                          "a22_sq_times_lambda": c22}))


def omega3_tests(lam, c=None, truncation=20):
    """Contractivity and complete-contractivity reports for omega3 at the origin."""
    c11, c22, c33 = origin_a_squares("omega3", truncation) if c is None else c

    def contract(l):
        a11, a22, a33 = c11 / l, c22 / l, c33 / l
        return a11 * (1 - a33) >= (a22 - a33) - BOUNDARY_SLACK

    def complete(l):
        return max(c11 / l + c22 / l, c33 / l) <= 1 + BOUNDARY_SLACK

    notes = {"a_sq_times_lambda": [float(c11), float(c22), float(c33)]}
    return (_report("omega3-contract", lam, contract, 1 / 4, notes),
            _report("omega3-cc", lam, complete, 5 / 9, notes))


CONTRACT_TESTS = {
    "omega2-contract": lambda lam: omega2_tests(lam)[0],
    "omega2-cc": lambda lam: omega2_tests(lam)[1],
    "omega3-contract": lambda lam: omega3_tests(lam)[0],
    "omega3-cc": lambda lam: omega3_tests(lam)[1],
}


def transport_to_origin(A, W):
    """A(W) carried to the origin of the matrix ball: (J A(W)^t)^t, J the tangent map at W.

    The contractivity norm is invariant under this transport, so
    a_norm(transport_to_origin(A(W), W)) is the criterion at W.
    """
    from .holomaps import mb_tangent_jacobian

    J = mb_tangent_jacobian(W).jac
    return (J @ hermlin.as_matrix(A).T).T
