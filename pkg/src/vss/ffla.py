"""Exact dense linear algebra over the prime field GF(p), p an odd prime.

Everything in this module is exact: matrices and vectors are numpy integer
arrays whose entries are canonical residues in [0, p), and all arithmetic is
done mod p.  No floats leak out of here; the float32/float64 fast paths in
``gemm`` are used only where the products are provably exact and the result
is reduced back to canonical residues before returning.

Conventions used throughout the package:

* vectors are 1-D arrays, operators act on column vectors via ``op @ v``;
* a "basis" is a 2-D array whose *rows* are the basis vectors;
* ``p`` is passed explicitly; the helpers below never guess it.

The one nontrivial algorithm here is ``unipotent_chains``: given an order-p
automorphism sigma of F^n (so that delta = sigma - 1 is nilpotent with
delta^p = 0), it computes a Jordan chain basis for delta.  Chains are found
longest-first and head candidates are scanned in a canonical order, so the
output is deterministic: same input, same chains.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "NotOrderPError",
    "ChainBasis",
    "is_odd_prime",
    "check_modulus",
    "reduce_mod",
    "inv_mod",
    "mat_mul",
    "mat_pow",
    "gemm",
    "rref",
    "rank",
    "solve",
    "kernel_basis",
    "kernel_basis_tall",
    "inverse",
    "RowSpace",
    "unipotent_chains",
]


class NotOrderPError(ValueError):
    """Raised when a matrix expected to satisfy sigma^p = id does not."""


def is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def check_modulus(p: int) -> int:
    if not is_odd_prime(p):
        raise ValueError(f"modulus must be an odd prime, got {p}")
    return p


def reduce_mod(a, p: int) -> np.ndarray:
    """Canonical residues in [0, p) as an int64 array."""
    return np.asarray(a, dtype=np.int64) % p


def inv_mod(a: int, p: int) -> int:
    a = int(a) % p
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {p}")
    return pow(a, p - 2, p)


def mat_mul(a, b, p: int) -> np.ndarray:
    """Exact matrix product mod p (int64 path, safe for n < 2^63 / p^2)."""
    a = reduce_mod(a, p)
    b = reduce_mod(b, p)
    return (a @ b) % p


def mat_pow(a, k: int, p: int) -> np.ndarray:
    a = reduce_mod(a, p)
    n = a.shape[0]
    result = np.eye(n, dtype=np.int64)
    while k:
        if k & 1:
            result = (result @ a) % p
        a = (a @ a) % p
        k >>= 1
    return result


def gemm(a, b, p: int) -> np.ndarray:
    """Exact mod-p matmul through BLAS, for the large identity-check kernels.

    Entries are centered into (-p/2, p/2) so a dot product of length k is
    bounded by k * (p//2)^2.  While that bound stays below 2^24 every float32
    partial sum is exact; below 2^53 we fall back to float64; beyond that the
    contraction is chunked.  Supports stacked (batched) operands like
    ``np.matmul`` does.
    """
    a = reduce_mod(a, p)
    b = reduce_mod(b, p)
    half = p // 2
    ac = np.where(a > half, a - p, a)
    bc = np.where(b > half, b - p, b)
    k = a.shape[-1]
    bound = k * half * half
    if bound < (1 << 24):
        prod = np.matmul(ac.astype(np.float32), bc.astype(np.float32))
    elif bound < (1 << 53):
        prod = np.matmul(ac.astype(np.float64), bc.astype(np.float64))
    else:
        # chunk the contraction so each partial product stays exact
        step = max(1, (1 << 52) // (half * half))
        prod = np.zeros(np.broadcast_shapes(ac.shape[:-2], bc.shape[:-2]) + (ac.shape[-2], bc.shape[-1]))
        for lo in range(0, k, step):
            part = np.matmul(
                ac[..., :, lo : lo + step].astype(np.float64),
                bc[..., lo : lo + step, :].astype(np.float64),
            )
            prod = (prod + part) % p
    return prod.astype(np.int64) % p


def rref(a, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p; returns (R, pivot_columns)."""
    r = reduce_mod(a, p).copy()
    nrows, ncols = r.shape
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        if row >= nrows:
            break
        nz = np.nonzero(r[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            r[[row, piv]] = r[[piv, row]]
        r[row] = (r[row] * inv_mod(int(r[row, col]), p)) % p
        others = np.nonzero(r[:, col])[0]
        others = others[others != row]
        if others.size:
            r[others] = (r[others] - np.outer(r[others, col], r[row])) % p
        pivots.append(col)
        row += 1
    return r, pivots


def rank(a, p: int) -> int:
    a = np.atleast_2d(reduce_mod(a, p))
    if a.size == 0:
        return 0
    _, pivots = rref(a, p)
    return len(pivots)


def solve(a, b, p: int) -> np.ndarray:
    """A particular solution x of a @ x = b, or ValueError if inconsistent.

    ``b`` may be a vector or a matrix of stacked right-hand-side columns.
    Free variables are set to zero, so the answer is deterministic.
    """
    a = reduce_mod(a, p)
    b = reduce_mod(b, p)
    vector_rhs = b.ndim == 1
    bmat = b.reshape(-1, 1) if vector_rhs else b
    if a.shape[0] != bmat.shape[0]:
        raise ValueError(f"shape mismatch: {a.shape} vs {bmat.shape}")
    aug = np.hstack([a, bmat])
    r, pivots = rref(aug, p)
    ncols = a.shape[1]
    if any(c >= ncols for c in pivots):
        raise ValueError("inconsistent linear system")
    x = np.zeros((ncols, bmat.shape[1]), dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = r[i, ncols:]
    return x[:, 0] if vector_rhs else x


def kernel_basis(a, p: int) -> np.ndarray:
    """Canonical basis of the right kernel of a; rows are the basis vectors.

    The basis comes straight from the RREF free columns, so it is unique for
    a given matrix (this is what makes chain extraction deterministic).
    """
    a = np.atleast_2d(reduce_mod(a, p))
    nrows, ncols = a.shape
    r, pivots = rref(a, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for i, fc in enumerate(free):
        basis[i, fc] = 1
        for row_idx, pc in enumerate(pivots):
            basis[i, pc] = (-r[row_idx, fc]) % p
    return basis


def kernel_basis_tall(a, p: int, extra: int = 48) -> np.ndarray:
    """Kernel of a matrix with many more rows than columns.

    Row-reducing the full matrix is wasteful when rows >> cols, so we
    compress: S = G @ a for a seeded random G with cols + extra rows, compute
    kernel_basis(S), and certify the answer by checking a @ x = 0 exactly
    for every candidate (one gemm).  ker(a) is always contained in ker(S),
    so a passing certificate proves the two kernels coincide and the
    canonical basis matches what kernel_basis(a) would return.  On a failed
    certificate (probability about p**-extra per try) we retry with fresh
    rows, then fall back to the direct computation.
    """
    a = np.atleast_2d(reduce_mod(a, p))
    nrows, ncols = a.shape
    if nrows <= ncols + extra:
        return kernel_basis(a, p)
    rng = np.random.default_rng(0)
    for _ in range(3):
        g = rng.integers(0, p, size=(ncols + extra, nrows))
        s = gemm(g, a, p)
        basis = kernel_basis(s, p)
        if basis.size == 0 or not gemm(a, basis.T, p).any():
            return basis
    return kernel_basis(a, p)


def inverse(a, p: int) -> np.ndarray:
    a = reduce_mod(a, p)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse needs a square matrix")
    aug = np.hstack([a, np.eye(n, dtype=np.int64)])
    r, pivots = rref(aug, p)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular mod p")
    return r[:, n:]


class RowSpace:
    """Incremental row space: add vectors, query membership.  Exact, mod p."""

    def __init__(self, dim: int, p: int):
        self.p = p
        self.dim = dim
        self.rows = np.zeros((0, dim), dtype=np.int64)
        self.pivots: list[int] = []

    def _eliminate(self, v) -> np.ndarray:
        v = reduce_mod(v, self.p).copy()
        for row, c in zip(self.rows, self.pivots):
            if v[c]:
                v = (v - v[c] * row) % self.p
        return v

    def contains(self, v) -> bool:
        return not self._eliminate(v).any()

    def add(self, v) -> bool:
        """Returns True if v enlarged the span."""
        w = self._eliminate(v)
        nz = np.nonzero(w)[0]
        if nz.size == 0:
            return False
        c = int(nz[0])
        w = (w * inv_mod(int(w[c]), self.p)) % self.p
        # keep existing rows reduced against the new pivot
        if len(self.rows):
            self.rows = (self.rows - np.outer(self.rows[:, c], w)) % self.p
        self.rows = np.vstack([self.rows, w])
        self.pivots.append(c)
        return True

    def add_many(self, vecs) -> None:
        for v in np.atleast_2d(vecs):
            self.add(v)

    def add_block(self, mat) -> int:
        """Add a whole batch of rows at once; returns how many enlarged the span.

        The stored rows always have unit pivots and are reduced against each
        other, so one matrix product clears every existing pivot column from
        the batch; after that each newly accepted row is eliminated from the
        remainder before scanning on.
        """
        mat = np.atleast_2d(reduce_mod(mat, self.p)).copy()
        if mat.size == 0:
            return 0
        added = 0
        if self.pivots:
            mat = (mat - mat[:, self.pivots] @ self.rows) % self.p
        while True:
            live = np.nonzero(mat.any(axis=1))[0]
            if live.size == 0:
                return added
            v = mat[int(live[0])]
            c = int(np.nonzero(v)[0][0])
            v = (v * inv_mod(int(v[c]), self.p)) % self.p
            if len(self.rows):
                self.rows = (self.rows - np.outer(self.rows[:, c], v)) % self.p
            self.rows = np.vstack([self.rows, v])
            self.pivots.append(c)
            added += 1
            mat = (mat - np.outer(mat[:, c], v)) % self.p

    @property
    def rank(self) -> int:
        return len(self.pivots)


@dataclass
class ChainBasis:
    """Jordan chain data for delta = sigma - 1 acting on F^n.

    ``chains[k]`` is a (length, n) array: row 0 is the head h, row j is
    delta^j(h).  Chains are sorted longest first; ``basis`` stacks them in
    that order and is invertible by construction.
    """

    p: int
    dim: int
    chains: list[np.ndarray] = field(default_factory=list)

    @property
    def lengths(self) -> list[int]:
        return [len(c) for c in self.chains]

    @property
    def census(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for ell in self.lengths:
            out[ell] = out.get(ell, 0) + 1
        return out

    @property
    def basis(self) -> np.ndarray:
        return np.vstack(self.chains)

    def heads(self, length: int) -> np.ndarray:
        picked = [c[0] for c in self.chains if len(c) == length]
        if not picked:
            return np.zeros((0, self.dim), dtype=np.int64)
        return np.vstack(picked)


def unipotent_chains(sigma, p: int) -> ChainBasis:
    """Deterministic Jordan chain basis for an order-p automorphism.

    Raises NotOrderPError unless sigma^p = id (equivalently, delta^p = 0
    with delta = sigma - 1, since the binomial theorem mod p collapses).
    Heads of length ell are found longest-first; a candidate v is accepted
    when delta^(ell-1) v lies outside im(delta^ell) + span of the tails
    delta^(ell-1) h of the already accepted heads.  Candidates are the
    canonical kernel basis vectors of delta^ell, scanned in order, which
    pins the whole output down.
    """
    check_modulus(p)
    sigma = reduce_mod(sigma, p)
    n = sigma.shape[0]
    if sigma.shape != (n, n):
        raise ValueError("sigma must be square")
    if not np.array_equal(mat_pow(sigma, p, p), np.eye(n, dtype=np.int64)):
        raise NotOrderPError(f"matrix does not satisfy sigma^{p} = id")

    delta = (sigma - np.eye(n, dtype=np.int64)) % p
    powers = [np.eye(n, dtype=np.int64)]
    for _ in range(p):
        powers.append((powers[-1] @ delta) % p)
    ranks = [rank(q, p) for q in powers]
    # number of blocks of length exactly ell
    counts = {
        ell: ranks[ell - 1] - 2 * ranks[ell] + ranks[ell + 1] if ell < p else ranks[ell - 1] - ranks[ell]
        for ell in range(1, p + 1)
    }

    result = ChainBasis(p=p, dim=n)
    tails = RowSpace(n, p)  # spans im(delta^ell) + accepted tails, per stage
    for ell in range(p, 0, -1):
        want = counts[ell]
        if want == 0:
            continue
        dpow = powers[ell - 1]
        tails = RowSpace(n, p)
        tails.add_many(powers[ell].T)  # im(delta^ell) = column space
        for chain in result.chains:
            tails.add((dpow @ chain[0]) % p)
        got = 0
        for cand in kernel_basis(powers[ell], p):
            if got == want:
                break
            tail = (dpow @ cand) % p
            if tails.add(tail):
                chain = np.array([(powers[j] @ cand) % p for j in range(ell)])
                result.chains.append(chain)
                got += 1
        if got != want:  # pragma: no cover - would indicate a logic error
            raise RuntimeError(f"chain extraction incomplete at length {ell}")

    # the stacked chain basis must be a basis; cheap to confirm, so do it
    if rank(result.basis, p) != n:  # pragma: no cover
        raise RuntimeError("chain vectors do not form a basis")
    return result
