"""Domains, their polarized kernels, kernel powers and kernel jets.

Supported domains (selector strings in brackets):

* unit disc [``disc``], polydisc [``polydisc:n``], Euclidean ball [``ball:n``]
* unit ball of r x s matrices in the operator norm [``matrix-ball:rxs``]
* omega2 = {|z2| < 1 - |z1|^2} in C^2 [``omega2``, ``omega2:normalized``]
* omega3 = {|z2|^2 < (1 - |z1|^2)(1 - |z3|^2)} in C^3 [``omega3``]

Every base kernel is normalised to 1 at the origin except the raw omega2
kernel, which keeps the value 3 of its textbook formula.

Kernels are written in terms of the holomorphic pair (z, zeta) with
zeta = conj(w), as a sum of principal logarithms of factors whose real part
stays positive on the domain. K^lambda = exp(lambda * log K) is then the
continuation of the diagonal power along straight segments, and the same code
runs on complex numbers and on :class:`~cdkernel.taylor.Jet` objects.
"""

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from . import taylor
from .errors import BranchError, DomainError, ParseError, StepError

INTERIOR_MARGIN = 1e-6
DEFAULT_TRUNCATION = 20
DEFAULT_FD_STEP = 1e-4

DOMAIN_TAGS = ("disc", "polydisc", "ball", "matrix-ball", "omega2", "omega3")


@dataclass(frozen=True)
class DomainSpec:
    tag: str
    n: int = 1
    r: int = 1
    s: int = 1

    def __post_init__(self):
        if self.tag not in DOMAIN_TAGS:
            raise ValueError(f"unknown domain tag {self.tag!r}")
        if min(self.n, self.r, self.s) < 1:
            raise ValueError("domain sizes must be >= 1")

    @property
    def dim(self):
        return {"disc": 1, "polydisc": self.n, "ball": self.n, "matrix-ball": self.r * self.s,
                "omega2": 2, "omega3": 3}[self.tag]

    @property
    def homogeneous(self):
        return self.tag in ("disc", "polydisc", "ball", "matrix-ball")

    def label(self):
        if self.tag in ("polydisc", "ball"):
            return f"{self.tag}:{self.n}"
        if self.tag == "matrix-ball":
            return f"matrix-ball:{self.r}x{self.s}"
        return self.tag

    def _violation(self, z):
        """(margin, description) where margin > 0 estimates the boundary distance."""
        if self.tag == "disc":
            return 1.0 - abs(z[0]), "|z| < 1"
        if self.tag == "polydisc":
            return 1.0 - np.max(np.abs(z)), "max |z_i| < 1"
        if self.tag == "ball":
            return 1.0 - np.linalg.norm(z), "||z||_2 < 1"
        if self.tag == "matrix-ball":
            op = np.linalg.norm(np.reshape(z, (self.r, self.s)), 2)
            return 1.0 - op, "||Z||_op < 1"
        a1, a2 = abs(z[0]), abs(z[1])
        if self.tag == "omega2":
            # |grad(|z2| + |z1|^2)| <= sqrt(1 + 4|z1|^2) <= sqrt(5)
            gap = (1.0 - a1 ** 2) - a2
            return min(1.0 - a1, gap / math.sqrt(5.0)), "|z2| < 1 - |z1|^2"
        a3 = abs(z[2])
        gap = (1.0 - a1 ** 2) * (1.0 - a3 ** 2) - a2 ** 2
        return min(1.0 - a1, 1.0 - a3, gap / 6.0), "|z2|^2 < (1 - |z1|^2)(1 - |z3|^2), |z1| < 1, |z3| < 1"

    def margin(self, z):
        return float(self._violation(np.asarray(z, dtype=complex))[0])

    def validate(self, z, margin=INTERIOR_MARGIN):
        """Return `z` as a complex vector, raising DomainError unless strictly interior."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        if z.shape != (self.dim,):
            raise DomainError(f"{self.label()} expects {self.dim} coordinates, got {z.size}")
        if not np.all(np.isfinite(z)):
            raise DomainError("point has non-finite coordinates")
        m, rule = self._violation(z)
        if m < margin:
            coords = ", ".join(f"{complex(c):g}" for c in z)
            raise DomainError(f"point ({coords}) is not interior to {self.label()}: requires {rule}")
        return z


def parse_domain(text):
    text = text.strip().lower()
    head, _, arg = text.partition(":")
    try:
        if head in ("disc", "omega2", "omega3") and not arg:
            return DomainSpec(head)
        if head in ("polydisc", "ball"):
            return DomainSpec(head, n=int(arg))
        if head == "matrix-ball":
            r, s = arg.split("x")
            return DomainSpec(head, r=int(r), s=int(s))
    except ValueError as exc:
        raise ParseError(f"bad domain size in {text!r}") from exc
    raise ParseError(f"unknown kernel selector {text!r}")


def omega3_coeff(n, m, p):
    """Coefficient of (z1 w1bar)^n (z2 w2bar)^m (z3 w3bar)^p in the omega3 kernel.

    (m+1) / (4 B(n+1, m+2) B(p+1, m+2)), evaluated through log-Gamma.
    """
    n, m, p = np.asarray(n, float), np.asarray(m, float), np.asarray(p, float)

    def log_beta(a, b):
        return gammaln(a) + gammaln(b) - gammaln(a + b)

    out = np.log(m + 1) - np.log(4.0) - log_beta(n + 1, m + 2) - log_beta(p + 1, m + 2)
    return np.exp(out)


def omega3_closed(z, zeta):
    """Closed form of the omega3 series, (2P + y) / (2 (P - y)^4), P = (1 - x)(1 - t).

    x, y, t are the products z_i * zeta_i. Used as an oracle and as the branch
    reference when continuing powers of the truncated series off the diagonal.
    """
    return np.exp(_log_omega3_closed(z, zeta))


def _log_omega3_closed(z, zeta):
    x, y, t = (z[i] * zeta[i] for i in range(3))
    P = (1 - x) * (1 - t)
    q = y / P
    return (taylor.log(2 + q) - math.log(2.0) - 3 * (taylor.log(1 - x) + taylor.log(1 - t))
            - 4 * taylor.log(1 - q))


@lru_cache(maxsize=16)
def _omega3_table(truncation):
    idx = np.arange(truncation + 1)
    # g[m, n] = 1 / B(n+1, m+2); the kernel is sum_m (m+1)/4 y^m g_m(x) g_m(t)
    M, N = np.meshgrid(idx, idx, indexing="ij")
    g = np.exp(gammaln(N + M + 3) - gammaln(N + 1) - gammaln(M + 2))
    return (idx + 1) / 4.0, g


def omega3_series(z, zeta, truncation=DEFAULT_TRUNCATION):
    """Truncated omega3 series with every index n, m, p <= truncation."""
    x, y, t = (z[i] * zeta[i] for i in range(3))
    weight, g = _omega3_table(truncation)
    if not any(isinstance(v, taylor.Jet) for v in (x, y, t)):
        pw = np.power.outer(np.array([x, y, t], dtype=complex), np.arange(truncation + 1))
        gx, gt = g @ pw[0], g @ pw[2]
        return complex(np.sum(weight * pw[1] * gx * gt))

    def horner(coeffs, v):
        out = coeffs[-1] + 0 * v
        for c in coeffs[-2::-1]:
            out = out * v + c
        return out

    total, ym = 0.0, 1.0
    for m in range(truncation + 1):
        total = total + weight[m] * ym * horner(g[m], x) * horner(g[m], t)
        ym = ym * y
    return total


@dataclass(frozen=True)
class KernelSpec:
    """A domain kernel raised to the power `lam`.

    `truncation` only affects omega3; `normalized` only affects omega2
    (divides the raw kernel by its value 3 at the origin).
    """

    domain: DomainSpec
    lam: float = 1.0
    truncation: int = DEFAULT_TRUNCATION
    normalized: bool = False

    def __post_init__(self):
        if not (self.lam > 0 and math.isfinite(self.lam)):
            raise DomainError(f"kernel power must be positive, got {self.lam}")
        if self.truncation < 1:
            raise ValueError("truncation must be >= 1")

    @property
    def dim(self):
        return self.domain.dim

    def with_lambda(self, lam):
        return KernelSpec(self.domain, lam, self.truncation, self.normalized)

    def label(self):
        lab = self.domain.label()
        return lab + ":normalized" if (self.normalized and self.domain.tag == "omega2") else lab

    def log_base(self, z, zeta):
        """log K(z, w) of the base kernel as a function of (z, zeta = conj w)."""
        d = self.domain
        if d.tag == "disc":
            return -2 * taylor.log(1 - z[0] * zeta[0])
        if d.tag == "polydisc":
            return -2 * sum(taylor.log(1 - z[i] * zeta[i]) for i in range(d.n))
        if d.tag == "ball":
            return -(d.n + 1) * taylor.log(1 - sum(z[i] * zeta[i] for i in range(d.n)))
        if d.tag == "matrix-ball":
            return -(d.r + d.s) * _log_det_I_minus(z, zeta, d.r, d.s)
        if d.tag == "omega2":
            a, b = z[0] * zeta[0], z[1] * zeta[1]
            q = b / ((1 - a) * (1 - a))
            out = taylor.log(3 + q) - 4 * taylor.log(1 - a) - 3 * taylor.log(1 - q)
            return out - math.log(3.0) if self.normalized else out
        series = omega3_series(z, zeta, self.truncation)
        if isinstance(series, taylor.Jet):
            return series.log()
        closed_log = _log_omega3_closed(z, zeta)
        ratio = series / np.exp(closed_log)
        if ratio.real <= 0:
            raise BranchError("truncated omega3 series too far from its limit to continue the power")
        return closed_log + np.log(ratio)

    def eval_holo(self, z, zeta):
        """K^lambda as a function of the holomorphic pair (z, zeta)."""
        return taylor.exp(self.lam * self.log_base(z, zeta))

    def eval_polarized(self, z, w):
        z = self.domain.validate(z)
        w = self.domain.validate(w)
        return complex(self.eval_holo(z, np.conj(w)))

    def eval_diagonal(self, w):
        return self.eval_polarized(w, w).real


def _log_det_I_minus(z, zeta, r, s):
    """log det(I - Z W^*) with Z, W reshaped row-major to r x s."""
    if any(isinstance(v, taylor.Jet) for v in list(z) + list(zeta)):
        M = [[(1.0 if i == k else 0.0) - sum(z[i * s + j] * zeta[k * s + j] for j in range(s))
              for k in range(r)] for i in range(r)]
        return taylor.det(M).log()
    Z = np.reshape(np.asarray(z, complex), (r, s))
    Zeta = np.reshape(np.asarray(zeta, complex), (r, s))
    ev = np.linalg.eigvals(np.eye(r) - Z @ Zeta.T)
    # eigenvalues of I - Z W^* lie in the right half-plane, so the sum of
    # principal logs is the continuation from Z = W = 0
    return complex(np.sum(np.log(ev)))


def parse_kernel(text, lam=1.0, truncation=DEFAULT_TRUNCATION):
    text = text.strip().lower()
    normalized = False
    if text.endswith(":normalized"):
        text, normalized = text[: -len(":normalized")], True
        if text != "omega2":
            raise ParseError("':normalized' is only defined for omega2")
    return KernelSpec(parse_domain(text), float(lam), int(truncation), normalized)


# ---------------------------------------------------------------- multi-indices

def multi_indices(m, order):
    """All multi-indices in m variables of total order <= `order`.

    Graded: by total order, co-lexicographic inside each order (the last
    coordinate is the most significant), so the order-(n-1) list is a prefix
    of the order-n list.
    """
    return taylor._multi_indices(m, order)


def factorial(alpha):
    return math.prod(math.factorial(a) for a in alpha)


# ------------------------------------------------------------------ jets

def kernel_jet(K, w, order_z, order_w):
    """Taylor jet of K^lambda(z, zeta) about (w, conj w) with bidegree caps."""
    w = K.domain.validate(w)
    m = K.dim
    space = taylor.taylor_space((m, m), (order_z, order_w))
    z = [space.variable(i, w[i]) for i in range(m)]
    zeta = [space.variable(m + i, np.conj(w[i])) for i in range(m)]
    return K.eval_holo(z, zeta)


def _check_index(K, alpha):
    alpha = tuple(int(a) for a in np.atleast_1d(alpha))
    if len(alpha) != K.dim or min(alpha) < 0:
        raise ValueError(f"multi-index {alpha} does not fit a {K.dim}-dimensional domain")
    return alpha


def jet_analytic(K, w, alpha, beta):
    """d^alpha (holomorphic slot) dbar^beta (antiholomorphic slot) of K^lambda at z = w.

    Exact up to rounding for every order (forward-mode Taylor arithmetic).
    """
    alpha, beta = _check_index(K, alpha), _check_index(K, beta)
    jet = kernel_jet(K, w, sum(alpha), sum(beta))
    return jet.coefficient(alpha + beta) * factorial(alpha) * factorial(beta)


def _step_growth(order):
    # with the default h = 1e-4 the effective step is 10**(-16/(order+4)):
    # O(H^4) truncation after one Richardson level balances eps/H^order rounding
    return 10.0 ** (4.0 * order / (order + 4))


def _central_weights(k):
    """Offsets (in units of the step) and weights of the k-th central difference."""
    return [(k / 2.0 - j, (-1) ** j * math.comb(k, j)) for j in range(k + 1)]


def jet_fd(K, w, alpha, beta, h=DEFAULT_FD_STEP, richardson=True, scale_step=True):
    """Finite-difference oracle for :func:`jet_analytic`.

    Tensor product of central differences, one per variable of the
    polarized kernel, with conj(w) treated as an independent holomorphic
    variable. Error is O(H^2) per differentiation (O(H^4) with Richardson).
    """
    alpha, beta = _check_index(K, alpha), _check_index(K, beta)
    w = K.domain.validate(w)
    if sum(alpha) + sum(beta) == 0:
        return K.eval_polarized(w, w)
    return fd_derivative(K.eval_holo, K.domain, w, alpha + beta, h, richardson, scale_step)


def fd_derivative(func, domain, w, ks, h=DEFAULT_FD_STEP, richardson=True, scale_step=True):
    """Mixed partial d^ks of func(z, zeta) at (w, conj w) by central differences.

    `ks` holds the derivative orders of the 2m variables (z first, then zeta).
    """
    m = domain.dim
    order = sum(ks)
    margin = domain.margin(w)
    # near the boundary the kernel varies on the scale of the margin, so the
    # step shrinks with it (no effect at boundary distance >= 0.1)
    H = h * _step_growth(order) * min(1.0, 10.0 * margin) if scale_step else h
    if margin <= 10 * h * order or margin <= order * H:
        raise StepError(f"step {H:.3e} too large for boundary distance {margin:.3e} at order {order}")
    base = np.concatenate([w, np.conj(w)])
    axes = [(v, _central_weights(k)) for v, k in enumerate(ks) if k > 0]

    def differ(step):
        total = 0j
        for combo in _product(axes):
            pt = base.copy()
            wt = 1.0
            for (v, _), (off, c) in zip(axes, combo):
                pt[v] += off * step
                wt *= c
            try:
                zz, ze = pt[:m], pt[m:]
                domain.validate(zz, margin=0.0)
                domain.validate(np.conj(ze), margin=0.0)
                total += wt * complex(func(zz, ze))
            except (DomainError, BranchError) as exc:
                raise StepError(f"finite-difference stencil leaves the domain: {exc}") from exc
        return total / step ** order

    if not richardson:
        return differ(H)
    return (4.0 * differ(H / 2) - differ(H)) / 3.0


def _product(axes):
    return itertools.product(*[weights for _, weights in axes])


# ----------------------------------------------------------------- sampling

def random_point(domain, rng, shrink=0.9):
    """A random interior point, kept a fixed fraction away from the boundary."""
    def disc(scale=1.0):
        return scale * math.sqrt(rng.uniform()) * np.exp(2j * math.pi * rng.uniform())

    t = domain.tag
    if t == "disc":
        return np.array([disc(shrink)])
    if t == "polydisc":
        return np.array([disc(shrink) for _ in range(domain.n)])
    if t in ("ball", "matrix-ball"):
        v = rng.standard_normal(domain.dim) + 1j * rng.standard_normal(domain.dim)
        norm = np.linalg.norm(v) if t == "ball" else np.linalg.norm(np.reshape(v, (domain.r, domain.s)), 2)
        return v / norm * shrink * rng.uniform() ** (1.0 / (2 * domain.dim))
    if t == "omega2":
        z1 = disc(shrink)
        return np.array([z1, disc(shrink * (1 - abs(z1) ** 2))])
    z1, z3 = disc(shrink), disc(shrink)
    return np.array([z1, disc(shrink * math.sqrt((1 - abs(z1) ** 2) * (1 - abs(z3) ** 2))), z3])
