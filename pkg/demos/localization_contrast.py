"""Finite Gram matrices can fail to be PSD while every order-1 jet matrix is PD.

For the 2x2 matrix ball, K^lambda is a positive kernel only on the Wallach set.
At lambda = 1/8 the order-1 jets give no warning, but a handful of random
points already produce a negative eigenvalue.

Run with: python3 demos/localization_contrast.py
"""

import numpy as np

from cdkernel import hermlin
from cdkernel.jetcurv import jet_gram, wallach_index
from cdkernel.kernelzoo import DomainSpec, KernelSpec, random_point

rng = np.random.default_rng(0)
domain = DomainSpec("matrix-ball", r=2, s=2)
pts = [random_point(domain, rng) for _ in range(40)]

for lam in (0.125, 0.25, 0.3, 0.5):
    K = KernelSpec(domain, lam)
    G = np.array([[K.eval_polarized(z, w) for w in pts] for z in pts])
    lo = hermlin.eig_hermitian(0.5 * (G + G.conj().T))[0]
    jets = all(hermlin.pd_classify(jet_gram(K, w, 1).gram).is_pd for w in pts)
    wal = wallach_index(K, np.zeros(4), max_order=2)
    print(f"lambda={lam:<6} min eig of 40-point Gram {lo:+.3e}   order-1 jets PD: {jets}   "
          f"jet index at 0: {wal.describe()}")
