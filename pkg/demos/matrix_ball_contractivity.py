"""Matrix ball: curvature, homogeneity and where contractivity sets in.

Run with: python3 demos/matrix_ball_contractivity.py
"""

import numpy as np

from cdkernel import contract, holomaps, jetcurv
from cdkernel.kernelzoo import DomainSpec, KernelSpec, random_point

rng = np.random.default_rng(0)
r, s = 2, 3
p = r + s

# At the origin the curvature of K^lambda is lambda (r + s) times the identity.
for lam in (0.25, 1.0, 2.0):
    K = KernelSpec(DomainSpec("matrix-ball", r=r, s=s), lam)
    H = jetcurv.curvature(K, np.zeros(r * s)).H
    print(f"lambda={lam:<5} H(0) = {H[0, 0].real:.4f} I   off-diagonal max {np.abs(H - H[0, 0] * np.eye(r * s)).max():.1e}")

# Away from the origin the tangent map of the automorphism carries H(W) back to H(0).
K = KernelSpec(DomainSpec("matrix-ball", r=r, s=s), 1.0)
W = random_point(K.domain, rng).reshape(r, s)
H_direct = jetcurv.curvature(K, W.ravel()).H
Hinv_t = holomaps.curvature_via_homogeneity(1.0, W)  # (H^t)^{-1} from the tangent map alone
print("homogeneity residual:", np.abs(Hinv_t @ H_direct.T - np.eye(r * s)).max())

# The transported A(W) is a multiple of the identity, so the trace-to-operator
# norm reduces to 1 / (lambda p) and contractivity holds exactly when lambda >= 1/p.
print(f"\n{'lambda':>8} {'norm':>10} {'contractive':>12}")
for lam in (0.1, 1 / p, 0.3, 1.0):
    norm = contract.pmat_norm(lam, r, s)
    print(f"{lam:8.4f} {norm:10.4f} {str(norm <= 1 + contract.BOUNDARY_SLACK):>12}")

# The Wallach picture at a single point: order-1 jets stay PD even where
# higher jets break down.
for lam in (0.125, 0.25, 0.5):
    K = KernelSpec(DomainSpec("matrix-ball", r=2, s=2), lam)
    res = jetcurv.wallach_index(K, np.zeros(4), max_order=3)
    print(f"lambda={lam:<6} jet PD up to order {res.describe()}: {[v.kind for v in res.verdicts]}")
