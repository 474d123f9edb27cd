"""Truncated multivariate Taylor arithmetic (forward-mode jets).

A polarized kernel K(z, w) is holomorphic in z and in zeta = conj(w), so its
mixed derivatives at a diagonal point are ordinary Taylor coefficients of a
holomorphic function of the 2m variables (z, zeta). Evaluating the kernel
formula on :class:`Jet` objects instead of complex numbers produces all those
coefficients at once, exactly up to rounding.

Variables are split into groups, each with its own total-degree cap. For
kernels there are two groups (the z-slot and the zeta-slot), so a jet of
bidegree (n, n) carries every coefficient needed by an order-n Grammian.
"""

import itertools
import math
from functools import lru_cache

import numpy as np


def _multi_indices(nvars, max_degree):
    """All exponent tuples in `nvars` variables with total degree <= max_degree.

    Ordered by degree, then co-lexicographically inside each degree.
    """
    out = []
    for deg in range(max_degree + 1):
        block = [e for e in itertools.product(range(deg + 1), repeat=nvars) if sum(e) == deg]
        block.sort(key=lambda e: tuple(reversed(e)))
        out.extend(block)
    return out


class TaylorSpace:
    """Monomial basis and multiplication table for grouped degree caps."""

    def __init__(self, group_sizes, degree_caps):
        if len(group_sizes) != len(degree_caps):
            raise ValueError("one degree cap per variable group")
        self.group_sizes = tuple(int(g) for g in group_sizes)
        self.degree_caps = tuple(int(d) for d in degree_caps)
        self.nvars = sum(self.group_sizes)
        per_group = [_multi_indices(g, d) for g, d in zip(self.group_sizes, self.degree_caps)]
        self.monomials = [sum(parts, ()) for parts in itertools.product(*per_group)]
        self.index = {e: i for i, e in enumerate(self.monomials)}
        self.size = len(self.monomials)
        self.max_degree = sum(self.degree_caps)
        self._build_table()

    def _group_degrees(self, e):
        degs, pos = [], 0
        for g in self.group_sizes:
            degs.append(sum(e[pos:pos + g]))
            pos += g
        return degs

    def _build_table(self):
        I, J, K = [], [], []
        for i, a in enumerate(self.monomials):
            da = self._group_degrees(a)
            for j, b in enumerate(self.monomials):
                db = self._group_degrees(b)
                if any(x + y > cap for x, y, cap in zip(da, db, self.degree_caps)):
                    continue
                I.append(i)
                J.append(j)
                K.append(self.index[tuple(x + y for x, y in zip(a, b))])
        self._I = np.array(I, dtype=np.intp)
        self._J = np.array(J, dtype=np.intp)
        self._K = np.array(K, dtype=np.intp)

    def multiply(self, a, b):
        prod = a[self._I] * b[self._J]
        re = np.bincount(self._K, weights=prod.real, minlength=self.size)
        im = np.bincount(self._K, weights=prod.imag, minlength=self.size)
        return re + 1j * im

    def constant(self, c):
        return Jet(self, _coeffs_with_constant(self.size, c))

    def variable(self, k, at=0.0):
        """The jet of the k-th coordinate function expanded about `at`.

        A variable whose group has degree cap 0 is a constant.
        """
        e = [0] * self.nvars
        e[k] = 1
        c = _coeffs_with_constant(self.size, at)
        idx = self.index.get(tuple(e))
        if idx is not None:
            c[idx] = 1.0
        return Jet(self, c)


def _coeffs_with_constant(n, c):
    out = np.zeros(n, dtype=complex)
    out[0] = c
    return out


@lru_cache(maxsize=64)
def taylor_space(group_sizes, degree_caps):
    return TaylorSpace(tuple(group_sizes), tuple(degree_caps))


class Jet:
    """Element of a :class:`TaylorSpace`: a truncated power series."""

    __array_ufunc__ = None

    def __init__(self, space, coeffs):
        self.space = space
        self.coeffs = coeffs

    @property
    def value(self):
        return complex(self.coeffs[0])

    def coefficient(self, exponents):
        idx = self.space.index.get(tuple(exponents))
        return 0j if idx is None else complex(self.coeffs[idx])

    def _lift(self, other):
        if isinstance(other, Jet):
            return other.coeffs
        return _coeffs_with_constant(self.space.size, other)

    def __add__(self, other):
        return Jet(self.space, self.coeffs + self._lift(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Jet(self.space, self.coeffs - self._lift(other))

    def __rsub__(self, other):
        return Jet(self.space, self._lift(other) - self.coeffs)

    def __neg__(self):
        return Jet(self.space, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Jet):
            return Jet(self.space, self.space.multiply(self.coeffs, other.coeffs))
        return Jet(self.space, self.coeffs * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return Jet(self.space, self.coeffs / other)

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, n):
        if isinstance(n, int) and n >= 0:
            out = self.space.constant(1.0)
            for _ in range(n):
                out = out * self
            return out
        return self.power(n)

    def _compose(self, taylor_coeffs):
        """sum_k taylor_coeffs[k] * (self - value)^k by Horner's rule."""
        g = Jet(self.space, self.coeffs.copy())
        g.coeffs[0] = 0.0
        out = self.space.constant(taylor_coeffs[-1])
        for c in reversed(taylor_coeffs[:-1]):
            out = out * g + c
        return out

    def reciprocal(self):
        c = self.value
        if c == 0:
            raise ZeroDivisionError("reciprocal of a jet with zero constant term")
        D = self.space.max_degree
        return self._compose([(-1) ** k / c ** (k + 1) for k in range(D + 1)])

    def log(self):
        """Principal-branch logarithm about the constant term."""
        c = self.value
        if c == 0:
            raise ZeroDivisionError("log of a jet with zero constant term")
        D = self.space.max_degree
        return self._compose([np.log(c)] + [(-1) ** (k + 1) / (k * c ** k) for k in range(1, D + 1)])

    def exp(self):
        e = np.exp(self.value)
        D = self.space.max_degree
        return self._compose([e / math.factorial(k) for k in range(D + 1)])

    def power(self, a):
        """self**a on the principal branch, a real or complex."""
        return (self.log() * a).exp()


def log(x):
    return x.log() if isinstance(x, Jet) else np.log(complex(x))


def exp(x):
    return x.exp() if isinstance(x, Jet) else np.exp(complex(x))


def det(M):
    """Determinant of a square list-of-lists of jets/numbers.

    Gaussian elimination without pivoting; valid whenever the leading
    principal minors of the constant part are non-zero (true for I - W W^*
    with W in the open matrix ball).
    """
    n = len(M)
    A = [list(row) for row in M]
    out = 1.0
    for k in range(n):
        piv = A[k][k]
        out = out * piv
        inv = 1.0 / piv
        for i in range(k + 1, n):
            f = A[i][k] * inv
            for j in range(k + 1, n):
                A[i][j] = A[i][j] - f * A[k][j]
    return out
