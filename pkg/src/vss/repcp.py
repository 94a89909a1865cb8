"""Finite-dimensional representations of the cyclic group C_p over GF(p).

Over GF(p) a representation of C_p is a vector space with an automorphism
sigma of order p.  The indecomposables are L_1, ..., L_p where L_ell has a
basis v_0, ..., v_{ell-1} with sigma(v_i) = v_i + v_{i+1} (and v_ell = 0);
writing delta = sigma - 1 this is delta(v_i) = v_{i+1}, a single nilpotent
Jordan chain.  The restricted analogue swaps the automorphism for a
nilpotent operator d with d^p = 0, with the same indecomposables.

Two canonical tensors drive the semisimplification recipes:

* ``build_w``: an invariant vector w in L_{p-1} (x) L_{p-1}.  It is obtained
  by expanding f(s, t) = sum_i (-1)^i (s(1+t/2))^{p-2-i} (t(1+s/2))^i in
  F[s, t]/(s^{p-1}, t^{p-1}), where v_i corresponds to s^i (respectively
  t^i) and sigma acts as multiplication by (1+s)(1+t).  Its leading part is
  the antidiagonal sum (-1)^i v_{p-2-i} (x) v_i; all correction terms have
  total degree >= p-1.

* ``build_lambda``: an equivariant functional lambda on L_{p-1} (x) L_{p-1},
  normalized by lambda(v_0 (x) v_{p-2}) = 1 and supported on the
  antidiagonal.  It satisfies lambda(w) = 1 and induces a nondegenerate
  pairing on L_{p-1}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import ffla

__all__ = [
    "NotEquivariantError",
    "CpSpace",
    "AlphaPSpace",
    "CpBilinearMap",
    "CanonicalPairing",
    "standard_indecomposable",
    "shift_matrix",
    "build_w",
    "build_lambda",
    "build_w_alpha",
    "canonical_pairing",
]


class NotEquivariantError(ValueError):
    """Raised when a map fails the C_p equivariance it was promised to have."""


@dataclass
class CpSpace:
    """A GF(p) vector space with an order-p automorphism sigma."""

    p: int
    sigma: np.ndarray

    def __post_init__(self):
        self.sigma = ffla.reduce_mod(self.sigma, self.p)
        n = self.dim
        if not np.array_equal(ffla.mat_pow(self.sigma, self.p, self.p), np.eye(n, dtype=np.int64)):
            raise ffla.NotOrderPError("sigma does not have order dividing p")

    @property
    def dim(self) -> int:
        return self.sigma.shape[0]

    @property
    def delta(self) -> np.ndarray:
        return (self.sigma - np.eye(self.dim, dtype=np.int64)) % self.p

    def decompose(self) -> ffla.ChainBasis:
        return ffla.unipotent_chains(self.sigma, self.p)


@dataclass
class AlphaPSpace:
    """A GF(p) vector space with a nilpotent operator d, d^p = 0."""

    p: int
    d: np.ndarray

    def __post_init__(self):
        self.d = ffla.reduce_mod(self.d, self.p)
        if ffla.mat_pow(self.d, self.p, self.p).any():
            raise ValueError("d^p != 0")

    @property
    def dim(self) -> int:
        return self.d.shape[0]

    @property
    def delta(self) -> np.ndarray:
        return self.d

    def decompose(self) -> ffla.ChainBasis:
        # chains of d are chains of the unipotent 1 + d; reuse that machinery
        sigma = (np.eye(self.dim, dtype=np.int64) + self.d) % self.p
        return ffla.unipotent_chains(sigma, self.p)


@dataclass
class CpBilinearMap:
    """A bilinear map mu: A x B -> C of C_p spaces, mu[i, j, :] in C coords."""

    a: CpSpace
    b: CpSpace
    c: CpSpace
    mu: np.ndarray

    def __post_init__(self):
        p = self.a.p
        self.mu = ffla.reduce_mod(self.mu, p)
        if self.mu.shape != (self.a.dim, self.b.dim, self.c.dim):
            raise ValueError("mu has the wrong shape")

    def is_equivariant(self) -> bool:
        p = self.a.p
        moved = np.einsum("ki,lj,klc->ijc", self.a.sigma, self.b.sigma, self.mu) % p
        applied = np.einsum("ck,ijk->ijc", self.c.sigma, self.mu) % p
        return np.array_equal(moved, applied)


def shift_matrix(ell: int) -> np.ndarray:
    """delta on the standard indecomposable L_ell: delta(v_i) = v_{i+1}."""
    d = np.zeros((ell, ell), dtype=np.int64)
    for i in range(ell - 1):
        d[i + 1, i] = 1
    return d


def standard_indecomposable(ell: int, p: int) -> CpSpace:
    ffla.check_modulus(p)
    if not 1 <= ell <= p:
        raise ValueError(f"indecomposable length must be in 1..{p}")
    sigma = (np.eye(ell, dtype=np.int64) + shift_matrix(ell)) % p
    return CpSpace(p=p, sigma=sigma)


def _poly_mul(f: np.ndarray, g: np.ndarray, p: int) -> np.ndarray:
    """Multiply in F[s, t]/(s^m, t^m) with coefficient grids of shape (m, m)."""
    m = f.shape[0]
    out = np.zeros_like(f)
    for a, b in zip(*np.nonzero(f)):
        ga = g[: m - a, : m - b]
        out[a:, b:] = (out[a:, b:] + f[a, b] * ga) % p
    return out


def build_w(p: int) -> np.ndarray:
    """Coefficient grid W with w = sum_{i,j} W[i, j] v_i (x) v_j."""
    ffla.check_modulus(p)
    m = p - 1
    half = ffla.inv_mod(2, p)
    s_fac = np.zeros((m, m), dtype=np.int64)
    s_fac[1, 0] = 1  # s
    s_fac[1, 1] = half  # s t / 2
    t_fac = np.zeros((m, m), dtype=np.int64)
    t_fac[0, 1] = 1
    t_fac[1, 1] = half
    # powers of the two factors up to p-2
    s_pows = [np.zeros((m, m), dtype=np.int64)]
    s_pows[0][0, 0] = 1
    t_pows = [s_pows[0]]
    for _ in range(p - 2):
        s_pows.append(_poly_mul(s_pows[-1], s_fac, p))
        t_pows.append(_poly_mul(t_pows[-1], t_fac, p))
    w = np.zeros((m, m), dtype=np.int64)
    for i in range(p - 1):
        term = _poly_mul(s_pows[p - 2 - i], t_pows[i], p)
        sign = 1 if i % 2 == 0 else p - 1
        w = (w + sign * term) % p
    return w


def build_lambda(p: int) -> np.ndarray:
    """Equivariant functional on L_{p-1} (x) L_{p-1} as a grid L[i, j].

    Solved from the linear system "lambda vanishes on im(delta) and takes
    value 1 on v_0 (x) v_{p-2}".  Equivariance forces everything on and
    above the antidiagonal i + j = p - 2 (the region i + j >= p - 1 lies in
    im(delta), and the antidiagonal follows by recursion from the
    normalization); below it the system is underdetermined, and we pin the
    answer by taking the echelon-form particular solution, which is
    deterministic.  Whatever the completion, the grid is anti-triangular
    with units on the antidiagonal, hence nondegenerate of rank p - 1.
    """
    ffla.check_modulus(p)
    m = p - 1
    sigma = standard_indecomposable(m, p).sigma
    big = np.kron(sigma, sigma) % p
    dmat = (big - np.eye(m * m, dtype=np.int64)) % p
    # lambda(delta u) = 0 for all u  <=>  dmat^T x = 0, plus one inhomogeneous row
    norm_row = np.zeros(m * m, dtype=np.int64)
    norm_row[0 * m + (m - 1)] = 1
    system = np.vstack([dmat.T, norm_row])
    rhs = np.zeros(m * m + 1, dtype=np.int64)
    rhs[-1] = 1
    x = ffla.solve(system, rhs, p)
    return x.reshape(m, m)


def build_w_alpha(p: int) -> np.ndarray:
    """The restricted variant of w: just the antidiagonal sum, no corrections."""
    ffla.check_modulus(p)
    m = p - 1
    w = np.zeros((m, m), dtype=np.int64)
    for i in range(m):
        w[m - 1 - i, i] = 1 if i % 2 == 0 else p - 1
    return w


@dataclass
class CanonicalPairing:
    """The pair (w, lambda) for a given p, with lambda(w) = 1."""

    p: int
    w: np.ndarray
    lam: np.ndarray

    def lam_of(self, tensor_grid: np.ndarray) -> int:
        return int(np.sum(self.lam * tensor_grid) % self.p)


def canonical_pairing(p: int) -> CanonicalPairing:
    return CanonicalPairing(p=p, w=build_w(p), lam=build_lambda(p))
