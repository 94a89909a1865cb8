"""Structure-constant algebras and superalgebras over GF(p).

An algebra lives here as a cube of structure constants: ``c[i, j, k]`` is
the coefficient of b_k in the product b_i b_j.  Everything downstream
(identity checking, derivations, ideals, traces) is exact linear algebra
over GF(p) on top of that cube.

Identity checking policies:

* the Jordan identity ((x.x).y).x = (x.x).(y.x) is checked through its full
  linearization, exhaustively over basis quadruples (a commutativity check
  comes first: the linearized form degenerates on noncommutative input);
* the Jacobi identity is checked exhaustively over basis triples, batched
  through exact float32 matrix products; a seeded sampled variant exists
  for quick runs on the largest algebras;
* super variants go through the Grassmann envelope: every odd slot of an
  identity is lifted with its own anticommuting generator and the ordinary
  identity is evaluated on the lifted elements, so all Koszul signs come
  out of actual monomial arithmetic instead of hand-written sign rules.

Grassmann monomials are kept as sorted tuples of generator indices, and
``grassmann_mul`` gives the merge sign (or annihilation) of a product.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations

import numpy as np

from . import ffla

__all__ = [
    "BasedAlgebra",
    "SuperAlgebra",
    "GrassmannEnvelope",
    "NoTraceError",
    "TraceNotUniqueError",
    "grassmann_mul",
    "check_commutative",
    "check_anticommutative",
    "check_super_commutative",
    "check_super_anticommutative",
    "check_grading",
    "find_jordan_counterexample",
    "check_jordan_identity",
    "find_jacobi_counterexample",
    "check_lie_jacobi",
    "check_lie_jacobi_sampled",
    "find_super_jacobi_counterexample",
    "check_super_jacobi",
    "find_super_jordan_counterexample",
    "check_super_jordan",
    "find_ch3_counterexample",
    "check_super_cayley_hamilton3",
    "derivation_algebra",
    "super_derivation_algebra",
    "lie_algebra_from_operators",
    "super_algebra_from_operators",
    "ideal_closure",
    "module_closure",
    "is_simple",
    "is_simple_super",
    "normalized_trace",
    "restricted_algebra",
    "algebra_to_json",
    "algebra_from_json",
]

SIMPLICITY_SEED = 0  # fixed seed behind the random simplicity probes
SIMPLICITY_TRIALS = 64


class NoTraceError(ValueError):
    """The normalized-trace system is inconsistent."""


class TraceNotUniqueError(ValueError):
    """The normalized-trace system is underdetermined."""

    def __init__(self, solution_dim: int):
        self.solution_dim = solution_dim
        super().__init__(f"normalized trace not unique: {solution_dim} free dimensions")


@dataclass
class BasedAlgebra:
    """Algebra with a distinguished basis, given by structure constants.

    ``grading`` (optional) assigns each basis index a tuple of exponents in
    the finite abelian group Z/m_1 x ... x Z/m_r given by ``grading_orders``.
    """

    p: int
    c: np.ndarray
    unit: np.ndarray | None = None
    grading: np.ndarray | None = None
    grading_orders: tuple[int, ...] | None = None

    def __post_init__(self):
        ffla.check_modulus(self.p)
        self.c = np.ascontiguousarray(ffla.reduce_mod(self.c, self.p).astype(np.int16))
        n = self.c.shape[0]
        if self.c.shape != (n, n, n):
            raise ValueError(f"structure constants must be (n, n, n), got {self.c.shape}")
        if self.unit is not None:
            self.unit = ffla.reduce_mod(self.unit, self.p)
            eye = np.eye(n, dtype=np.int64)
            lu = np.einsum("i,ijk->kj", self.unit, self.c.astype(np.int64)) % self.p
            ru = np.einsum("j,ijk->ki", self.unit, self.c.astype(np.int64)) % self.p
            if not (np.array_equal(lu, eye) and np.array_equal(ru, eye)):
                raise ValueError("claimed unit is not a two-sided unit")
        if self.grading is not None:
            self.grading = np.asarray(self.grading, dtype=np.int64)
            if self.grading_orders is None:
                raise ValueError("grading needs grading_orders")

    @property
    def dim(self) -> int:
        return self.c.shape[0]

    def multiply(self, x, y) -> np.ndarray:
        x = ffla.reduce_mod(x, self.p)
        y = ffla.reduce_mod(y, self.p)
        if x.shape != (self.dim,) or y.shape != (self.dim,):
            raise ValueError("operand dimension mismatch")
        return np.einsum("i,j,ijk->k", x, y, self.c.astype(np.int64)) % self.p

    def left_mul(self, x) -> np.ndarray:
        """Matrix of y -> x y (acting on column vectors)."""
        x = ffla.reduce_mod(x, self.p)
        return np.einsum("i,ijk->kj", x, self.c.astype(np.int64)) % self.p

    def right_mul(self, y) -> np.ndarray:
        """Matrix of x -> x y."""
        y = ffla.reduce_mod(y, self.p)
        return np.einsum("j,ijk->ki", y, self.c.astype(np.int64)) % self.p

    def basis_product(self, i: int, j: int) -> np.ndarray:
        return self.c[i, j].astype(np.int64)


@dataclass
class SuperAlgebra(BasedAlgebra):
    """BasedAlgebra plus a parity marking (0 even, 1 odd) on the basis."""

    parity: np.ndarray | None = None

    def __post_init__(self):
        super().__post_init__()
        if self.parity is None:
            raise ValueError("SuperAlgebra needs a parity vector")
        self.parity = np.asarray(self.parity, dtype=np.int64) % 2
        if self.parity.shape != (self.dim,):
            raise ValueError("parity vector has wrong length")
        # parity-graded structure constants: c[i,j,k] != 0 forces |k| = |i| + |j|
        nz = np.nonzero(self.c)
        if nz[0].size:
            want = (self.parity[nz[0]] + self.parity[nz[1]]) % 2
            if not np.array_equal(self.parity[nz[2]], want):
                raise ValueError("structure constants are not parity-graded")

    @property
    def even_dim(self) -> int:
        return int(np.sum(self.parity == 0))

    @property
    def odd_dim(self) -> int:
        return int(np.sum(self.parity == 1))

    @property
    def even_indices(self) -> np.ndarray:
        return np.nonzero(self.parity == 0)[0]

    @property
    def odd_indices(self) -> np.ndarray:
        return np.nonzero(self.parity == 1)[0]

    def even_part(self) -> BasedAlgebra:
        idx = self.even_indices
        c = self.c[np.ix_(idx, idx, idx)]
        unit = None
        if self.unit is not None and not self.unit[self.odd_indices].any():
            unit = self.unit[idx]
        return BasedAlgebra(p=self.p, c=c, unit=unit)


def _parity_signs(parity) -> np.ndarray:
    """(-1)^{|i||j|} as an (n, n) array of +-1."""
    parity = np.asarray(parity, dtype=np.int64) % 2
    return 1 - 2 * np.outer(parity, parity)


def check_commutative(a: BasedAlgebra) -> bool:
    return np.array_equal(a.c, a.c.swapaxes(0, 1))


def check_anticommutative(a: BasedAlgebra) -> bool:
    neg = (-a.c.swapaxes(0, 1).astype(np.int64)) % a.p
    if not np.array_equal(a.c.astype(np.int64), neg):
        return False
    return not any(a.c[i, i].any() for i in range(a.dim))


def check_super_commutative(s: SuperAlgebra) -> bool:
    sign = _parity_signs(s.parity)[:, :, None]
    want = (sign * s.c.swapaxes(0, 1).astype(np.int64)) % s.p
    return np.array_equal(s.c.astype(np.int64), want)


def check_super_anticommutative(s: SuperAlgebra) -> bool:
    sign = _parity_signs(s.parity)[:, :, None]
    want = (-sign * s.c.swapaxes(0, 1).astype(np.int64)) % s.p
    if not np.array_equal(s.c.astype(np.int64), want):
        return False
    # [x, x] = 0 must still hold for even x (odd squares may survive)
    return not any(s.c[i, i].any() for i in s.even_indices)


def check_grading(a: BasedAlgebra) -> bool:
    if a.grading is None:
        raise ValueError("algebra carries no grading")
    orders = np.asarray(a.grading_orders, dtype=np.int64)
    i, j, k = np.nonzero(a.c)
    want = (a.grading[i] + a.grading[j]) % orders
    return np.array_equal(a.grading[k] % orders, want)


# ---------------------------------------------------------------------------
# Grassmann machinery


def grassmann_mul(s: tuple, t: tuple):
    """Product xi_s xi_t of sorted monomials: (sign, merged) or (0, None)."""
    if set(s) & set(t):
        return 0, None
    seq = s + t
    inv = sum(
        1 for x in range(len(seq)) for y in range(x + 1, len(seq)) if seq[x] > seq[y]
    )
    return (-1 if inv % 2 else 1), tuple(sorted(seq))


def _monomials(g: int) -> list[tuple]:
    out = []
    for size in range(g + 1):
        out.extend(combinations(range(1, g + 1), size))
    out.sort(key=lambda m: (len(m), m))
    return out


@dataclass
class GrassmannEnvelope:
    """Lambda_0 (x) A_0 + Lambda_1 (x) A_1 over g anticommuting generators.

    The envelope basis is the list of pairs (monomial, base index) with
    matching parities, ordered by monomial then base index; ``algebra`` is
    the induced ordinary BasedAlgebra, with the sign rule

        (xi_S (x) a)(xi_T (x) b) = (-1)^{|a||T|} xi_S xi_T (x) ab.
    """

    base: SuperAlgebra
    g: int

    def __post_init__(self):
        if self.g < 0:
            raise ValueError("need g >= 0 generators")
        self.monomials = _monomials(self.g)
        par = self.base.parity
        self.basis = [
            (mono, int(i))
            for mono in self.monomials
            for i in range(self.base.dim)
            if len(mono) % 2 == par[i]
        ]
        self.index = {pair: k for k, pair in enumerate(self.basis)}
        n = len(self.basis)
        base_c = self.base.c.astype(np.int64)
        c = np.zeros((n, n, n), dtype=np.int64)
        for x, (ms, i) in enumerate(self.basis):
            for y, (mt, j) in enumerate(self.basis):
                sign, merged = grassmann_mul(ms, mt)
                if merged is None:
                    continue
                if par[i] and len(mt) % 2:
                    sign = -sign
                prod = base_c[i, j]
                for k in np.nonzero(prod)[0]:
                    c[x, y, self.index[(merged, int(k))]] = (sign * prod[k]) % self.base.p
        unit = None
        if self.base.unit is not None:
            unit = np.zeros(n, dtype=np.int64)
            for i in np.nonzero(self.base.unit)[0]:
                unit[self.index[((), int(i))]] = self.base.unit[i]
        self.algebra = BasedAlgebra(p=self.base.p, c=c, unit=unit)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def even_monomials(self) -> list[tuple]:
        return [m for m in self.monomials if len(m) % 2 == 0]

    def scalar_action(self, mono: tuple) -> np.ndarray:
        """Matrix of multiplication by the even scalar xi_mono on the envelope."""
        if len(mono) % 2:
            raise ValueError("scalar action needs an even monomial")
        n = self.dim
        m = np.zeros((n, n), dtype=np.int64)
        for col, (ms, i) in enumerate(self.basis):
            sign, merged = grassmann_mul(mono, ms)
            if merged is None:
                continue
            m[self.index[(merged, i)], col] = sign % self.base.p
        return m

    def trace_matrix(self, t_base) -> np.ndarray:
        """Rows = even monomials: maps an envelope vector to its Lambda_0 trace.

        A base trace extends by t(xi_S (x) a) = xi_S t(a) and vanishes on odd
        base elements, so only even monomials can carry a value.
        """
        t_base = ffla.reduce_mod(t_base, self.base.p)
        evens = self.even_monomials
        mat = np.zeros((len(evens), self.dim), dtype=np.int64)
        pos = {m: r for r, m in enumerate(evens)}
        for col, (ms, i) in enumerate(self.basis):
            if len(ms) % 2 == 0:
                mat[pos[ms], col] = t_base[i]
        return mat

    def monomial_products(self) -> np.ndarray:
        """Structure constants of Lambda_0 on the even monomials."""
        evens = self.even_monomials
        pos = {m: r for r, m in enumerate(evens)}
        k = len(evens)
        out = np.zeros((k, k, k), dtype=np.int64)
        for x, ms in enumerate(evens):
            for y, mt in enumerate(evens):
                sign, merged = grassmann_mul(ms, mt)
                if merged is not None:
                    out[x, y, pos[merged]] = sign % self.base.p
        return out


# ---------------------------------------------------------------------------
# Jordan identity


def _centered_float(arr, p: int) -> np.ndarray:
    arr = ffla.reduce_mod(arr, p)
    half = p // 2
    return np.where(arr > half, arr - p, arr).astype(np.float32)


def find_jordan_counterexample(a: BasedAlgebra):
    """First witness against "a is a Jordan algebra", or None.

    Commutativity is part of being Jordan, and the linearized identity below
    degenerates on associative noncommutative input, so noncommutativity is
    reported first as ("commutativity", i, j).  The identity itself is the
    full linearization of [L_{x.x}, L_x] = 0: for all basis triples
    i <= j <= k the operator

        [L_{b_i b_j}, L_{b_k}] + [L_{b_i b_k}, L_{b_j}] + [L_{b_j b_k}, L_{b_i}]

    must vanish (p >= 5 makes the polarization denominators invertible); a
    failure is reported as ("jordan", i, j, k, y) with b_y the fourth slot.
    """
    if a.p < 5:
        raise ValueError("the Jordan linearization needs p >= 5")
    n, p = a.dim, a.p
    if not check_commutative(a):
        diff = (a.c.astype(np.int64) - a.c.swapaxes(0, 1)) % p
        i, j, _ = np.unravel_index(int(np.argmax(diff > 0)), diff.shape)
        return ("commutativity", int(i), int(j))
    # two chained float32 products: |sum of commutators| <= 6 n^2 (p//2)^3
    if 6 * n * n * (p // 2) ** 3 >= (1 << 24):
        raise ValueError("dimension too large for the exact float32 path")
    lstack = _centered_float(np.ascontiguousarray(a.c.transpose(0, 2, 1)), p)
    # s[i, j] = matrix of L_{b_i b_j}, congruent mod p (entries not reduced)
    cf = _centered_float(a.c, p).reshape(n * n, n)
    s = (cf @ lstack.reshape(n, n * n)).reshape(n, n, n, n)
    block = max(1, (1 << 20) // (n * n * max(1, n // 8)))
    for i in range(n):
        li = lstack[i]
        si = s[i]
        lk = lstack[i:]
        sk = si[i:]
        for j0 in range(i, n, block):
            j1 = min(n, j0 + block)
            sj = si[j0:j1]
            lj = lstack[j0:j1]
            m1 = np.matmul(sj[:, None], lk[None, :]) - np.matmul(lk[None, :], sj[:, None])
            m2 = np.matmul(sk[None, :], lj[:, None]) - np.matmul(lj[:, None], sk[None, :])
            m3 = np.matmul(s[j0:j1, i:], li) - np.matmul(li, s[j0:j1, i:])
            total = (m1 + m2 + m3).astype(np.int64) % p
            bad = np.nonzero(total)
            if bad[0].size:
                jj = j0 + int(bad[0][0])
                kk = i + int(bad[1][0])
                return ("jordan", i, jj, kk, int(bad[3][0]))
    return None


def check_jordan_identity(a: BasedAlgebra) -> bool:
    return find_jordan_counterexample(a) is None


# ---------------------------------------------------------------------------
# Jacobi identity, plain and super


def _term_sign(parities, supports, order) -> int:
    """Envelope sign of the term x_{o0} (x_{o1} x_{o2}) of the Jacobi sum.

    Each slot m carries the Grassmann monomial supports[m]; the sign is read
    off the coefficient of the merged monomial, exactly as the envelope
    product produces it.
    """
    a, b, c = order
    sign_inner, mono_inner = grassmann_mul(supports[b], supports[c])
    if mono_inner is None:
        return 0
    if parities[b] and len(supports[c]) % 2:
        sign_inner = -sign_inner
    sign_outer, mono = grassmann_mul(supports[a], mono_inner)
    if mono is None:
        return 0
    if parities[a] and len(mono_inner) % 2:
        sign_outer = -sign_outer
    return sign_inner * sign_outer


def _jacobi_sign_tables():
    """Signs of the three cyclic Jacobi terms per parity pattern (pi, pj, pk).

    Odd slots are lifted with generators xi_1, xi_2, xi_3 in slot order; the
    tables give the envelope signs in front of b_i(b_j b_k), b_j(b_k b_i),
    b_k(b_i b_j).
    """
    tables = [np.zeros((2, 2, 2), dtype=np.int64) for _ in range(3)]
    orders = [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
    for pi in range(2):
        for pj in range(2):
            for pk in range(2):
                pars = (pi, pj, pk)
                sups = ((1,) if pi else (), (2,) if pj else (), (3,) if pk else ())
                for t, order in zip(tables, orders):
                    t[pi, pj, pk] = _term_sign(pars, sups, order)
    return tables


def _jacobi_failure(a: BasedAlgebra, parity=None):
    """First basis triple (i, j, k) violating (possibly super) Jacobi, or None.

    Exhaustive over all dim^3 triples, batched per i through matrix products
    that are exact in float32 for the sizes at hand.  With a parity vector
    the three cyclic terms b_i(b_j b_k) + b_j(b_k b_i) + b_k(b_i b_j) get
    the Grassmann-envelope signs of the canonical disjoint-generator lift.
    """
    n, p = a.dim, a.p
    half = p // 2
    fast = 3 * n * half * half < (1 << 24)
    c64 = a.c.astype(np.int64)
    if fast:
        cf = _centered_float(c64, p)
        mf = cf.reshape(n * n, n)
        ctf = np.ascontiguousarray(cf.transpose(1, 0, 2)).reshape(n, n * n)
    else:
        mf = c64.reshape(n * n, n)
        ctf = np.ascontiguousarray(c64.transpose(1, 0, 2)).reshape(n, n * n)
    if parity is not None:
        par = np.asarray(parity, dtype=np.int64) % 2
        tables = _jacobi_sign_tables()
    for i in range(n):
        if fast:
            t1 = np.matmul(mf, cf[i]).reshape(n, n, n)
            t2 = np.matmul(cf[:, i, :], ctf).reshape(n, n, n).transpose(1, 0, 2)
            t3 = np.matmul(cf[i], ctf).reshape(n, n, n)
        else:
            t1 = ffla.gemm(mf, c64[i], p).reshape(n, n, n)
            t2 = ffla.gemm(c64[:, i, :], ctf, p).reshape(n, n, n).transpose(1, 0, 2)
            t3 = ffla.gemm(c64[i], ctf, p).reshape(n, n, n)
        if parity is None:
            total = np.asarray(t1 + t2 + t3).astype(np.int64) % p
        else:
            pi = int(par[i])
            s1 = tables[0][pi][np.ix_(par, par)][:, :, None]
            s2 = tables[1][pi][np.ix_(par, par)][:, :, None]
            s3 = tables[2][pi][np.ix_(par, par)][:, :, None]
            total = (
                s1 * t1.astype(np.int64)
                + s2 * t2.astype(np.int64)
                + s3 * t3.astype(np.int64)
            ) % p
        bad = np.nonzero(total)
        if bad[0].size:
            return (i, int(bad[0][0]), int(bad[1][0]))
    return None


def find_jacobi_counterexample(a: BasedAlgebra):
    return _jacobi_failure(a)


def check_lie_jacobi(a: BasedAlgebra) -> bool:
    """Exhaustive Jacobi over all dim^3 basis triples."""
    return _jacobi_failure(a) is None


def check_lie_jacobi_sampled(a: BasedAlgebra, samples: int = 10**6, seed: int = 0) -> bool:
    """Jacobi on a seeded sample of basis triples (quick mode for big algebras)."""
    n, p = a.dim, a.p
    half = p // 2
    if 3 * n * half * half >= (1 << 24):
        raise ValueError("dimension too large for the exact float32 path")
    cf = _centered_float(a.c, p)
    rng = np.random.default_rng(seed)

    def bucket_product(rows, mat_idx):
        # out[a] = rows[a] @ cf[mat_idx[a]], grouped to avoid gathering cubes
        out = np.empty(rows.shape, dtype=np.float32)
        for v in np.unique(mat_idx):
            sel = np.nonzero(mat_idx == v)[0]
            out[sel] = rows[sel] @ cf[v]
        return out

    chunk = 1 << 16
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        ijk = rng.integers(0, n, size=(m, 3))
        i, j, k = ijk[:, 0], ijk[:, 1], ijk[:, 2]
        t1 = bucket_product(cf[j, k], i)
        t2 = bucket_product(cf[k, i], j)
        t3 = bucket_product(cf[i, j], k)
        if ((t1 + t2 + t3).astype(np.int64) % p).any():
            return False
        done += m
    return True


def find_super_jacobi_counterexample(s: SuperAlgebra, g: int = 3):
    """First base triple violating super Jacobi, through envelope lifts.

    Each odd slot is lifted with its own generator, so g >= 3 is required
    (one per slot); triples sharing a generator vanish identically in the
    envelope, which makes the disjoint lift the whole content of the check.
    """
    if g < 3:
        raise ValueError("the three slots of Jacobi need g >= 3 odd generators")
    return _jacobi_failure(s, parity=s.parity)


def check_super_jacobi(s: SuperAlgebra, g: int = 3) -> bool:
    return find_super_jacobi_counterexample(s, g) is None


# ---------------------------------------------------------------------------
# Super Jordan and degree-3 Cayley-Hamilton, via explicit envelope elements


def find_super_jordan_counterexample(s: SuperAlgebra, g: int = 4):
    """First witness against "s is a Jordan superalgebra", or None.

    Super-commutativity is reported first as ("commutativity", i, j).  The
    linearized Jordan identity has four slots (three x-polarizations and one
    y), so every odd slot gets its own generator and g >= 4 is required; a
    failing base quadruple is returned as ("jordan", i, j, k, y).
    """
    if s.p < 5:
        raise ValueError("the Jordan linearization needs p >= 5")
    if g < 4:
        raise ValueError("the four slots of linearized Jordan need g >= 4")
    n, p = s.dim, s.p
    if not check_super_commutative(s):
        signs = _parity_signs(s.parity)
        for i in range(n):
            for j in range(n):
                diff = (s.c[i, j].astype(np.int64) - signs[i, j] * s.c[j, i]) % p
                if diff.any():
                    return ("commutativity", i, j)
    c64 = s.c.astype(np.int64)
    par = s.parity

    def env_mul(xs, xv, ys, yv):
        sign, merged = grassmann_mul(xs, ys)
        if merged is None:
            return None, None
        if len(xs) % 2 and len(ys) % 2:
            # left base parity equals left monomial parity in a valid lift
            sign = -sign
        prod = np.einsum("i,j,ijk->k", xv, yv, c64) % p
        return merged, (sign * prod) % p

    eye = np.eye(n, dtype=np.int64)

    def slot(gen, idx):
        return ((gen,) if par[idx] else (), eye[idx])

    for i in range(n):
        for j in range(i, n):
            for k in range(j, n):
                xs = [slot(1, i), slot(2, j), slot(3, k)]
                for y in range(n):
                    ys, yv = slot(4, y)
                    acc = {}
                    for a, b, d in permutations(range(3)):
                        ms, mv = env_mul(*xs[a], *xs[b])
                        if ms is None:
                            continue
                        # ((x_a x_b) y) x_d  -  (x_a x_b)(y x_d)
                        t1s, t1v = env_mul(ms, mv, ys, yv)
                        if t1s is not None:
                            t2s, t2v = env_mul(t1s, t1v, *xs[d])
                            if t2s is not None:
                                acc[t2s] = (acc.get(t2s, 0) + t2v) % p
                        u1s, u1v = env_mul(ys, yv, *xs[d])
                        if u1s is not None:
                            u2s, u2v = env_mul(ms, mv, u1s, u1v)
                            if u2s is not None:
                                acc[u2s] = (acc.get(u2s, 0) - u2v) % p
                    if any(np.asarray(v).any() for v in acc.values()):
                        return ("jordan", i, j, k, y)
    return None


def check_super_jordan(s: SuperAlgebra, g: int = 4) -> bool:
    return find_super_jordan_counterexample(s, g) is None


def find_ch3_counterexample(
    s: SuperAlgebra, t, g: int = 3, seed: int = 0, samples: int = 256
):
    """Does ch3 vanish on the Grassmann envelope of s?  None, or a witness.

    ch3(x) = x^3 - 3 t(x) x^2 + (9/2 t(x)^2 - 3/2 t(x^2)) x
             - (t(x^3) - 9/2 t(x^2) t(x) + 9/2 t(x)^3) 1

    with x^2 = x x, x^3 = x^2 x and traces valued in the even scalars
    Lambda_0.  Evaluated on every sum of at most three envelope basis
    elements with pairwise disjoint xi-supports, plus ``samples`` seeded
    pseudorandom envelope elements.  A witness is returned as its envelope
    coordinate vector (the envelope basis order of GrassmannEnvelope).
    """
    if s.unit is None:
        raise ValueError("ch3 needs a unital algebra")
    p = s.p
    t = ffla.reduce_mod(t, p)
    env = GrassmannEnvelope(base=s, g=g)
    n = env.dim
    alg = env.algebra
    tmat = env.trace_matrix(t)
    mono_mul = env.monomial_products()
    evens = env.even_monomials
    actions = [env.scalar_action(m) for m in evens]
    unit_vec = alg.unit

    supports = [frozenset(ms) for ms, _ in env.basis]
    pair_rows = []
    triple_rows = []
    for x in range(n):
        for y in range(x + 1, n):
            if supports[x] & supports[y]:
                continue
            v = np.zeros(n, dtype=np.int64)
            v[x] = v[y] = 1
            pair_rows.append(v)
            for z in range(y + 1, n):
                if (supports[x] | supports[y]) & supports[z]:
                    continue
                w = v.copy()
                w[z] = 1
                triple_rows.append(w)
    rng = np.random.default_rng(seed)
    rows = [np.eye(n, dtype=np.int64)]
    if pair_rows:
        rows.append(np.array(pair_rows))
    if triple_rows:
        rows.append(np.array(triple_rows))
    rows.append(rng.integers(0, p, size=(samples, n)))
    xs = np.vstack(rows) % p

    c64 = alg.c.astype(np.int64)
    ct = np.ascontiguousarray(c64.transpose(1, 0, 2))
    half = ffla.inv_mod(2, p)
    c92 = (9 * half) % p
    c32 = (3 * half) % p
    step = max(1, (1 << 22) // (n * n))
    for lo in range(0, xs.shape[0], step):
        x = xs[lo : lo + step]
        # rmul[a, i, k] = coordinates of b_i x_a, so v @ rmul[a] is v . x_a
        rmul = np.tensordot(x, ct, axes=(1, 0)) % p
        x2 = np.einsum("ai,aik->ak", x, rmul) % p
        x3 = np.einsum("ai,aik->ak", x2, rmul) % p
        tx = x @ tmat.T % p
        tx2 = x2 @ tmat.T % p
        tx3 = x3 @ tmat.T % p
        txtx = np.einsum("am,an,mnr->ar", tx, tx, mono_mul) % p
        txtxtx = np.einsum("am,an,mnr->ar", txtx, tx, mono_mul) % p
        tx2tx = np.einsum("am,an,mnr->ar", tx2, tx, mono_mul) % p
        coe1 = (c92 * txtx - c32 * tx2) % p
        coe0 = (tx3 - c92 * tx2tx + c92 * txtxtx) % p
        ch = x3.copy()
        for r, act in enumerate(actions):
            ch = (
                ch
                - 3 * tx[:, r : r + 1] * (x2 @ act.T)
                + coe1[:, r : r + 1] * (x @ act.T)
                - coe0[:, r : r + 1] * (unit_vec @ act.T)[None, :]
            ) % p
        bad = np.nonzero(ch.any(axis=1))[0]
        if bad.size:
            return xs[lo + int(bad[0])]
    return None


def check_super_cayley_hamilton3(
    s: SuperAlgebra, t, g: int = 3, seed: int = 0, samples: int = 256
) -> bool:
    return find_ch3_counterexample(s, t, g=g, seed=seed, samples=samples) is None


# ---------------------------------------------------------------------------
# Derivations


def _build_leibniz(a: BasedAlgebra, sign_vec=None) -> np.ndarray:
    """(n^3, n^2) matrix M with M @ vec(D) = 0 iff D satisfies Leibniz.

    vec(D) is row-major (unknown D[r, c] at r*n + c, D acting as D @ v).
    Row (i, j, z) encodes the z-coordinate of

        D(b_i b_j) - D(b_i) b_j - s_i b_i D(b_j)

    where s_i = sign_vec[i]; pass (-1)^{|b_i|} for odd superderivations.
    """
    n = a.dim
    c16 = a.c.astype(np.int16)
    if sign_vec is None:
        sign_vec = np.ones(n, dtype=np.int16)
    else:
        sign_vec = np.asarray(sign_vec, dtype=np.int16)
    m = np.zeros((n, n, n, n, n), dtype=np.int16)
    right = np.ascontiguousarray(c16.transpose(1, 2, 0))  # right[j, z, t] = c[t, j, z]
    left = np.ascontiguousarray(c16.transpose(0, 2, 1))  # left[i, z, t] = c[i, t, z]
    for z in range(n):
        m[:, :, z, z, :] += c16
    for i in range(n):
        m[i, :, :, :, i] -= right
    for j in range(n):
        m[:, j, :, :, j] -= sign_vec[:, None, None] * left
    return m.reshape(n**3, n * n) % a.p


def derivation_algebra(a: BasedAlgebra):
    """All D with D(xy) = D(x)y + xD(y): (Lie algebra of commutators, matrices).

    The nullspace basis of the Leibniz system is canonical, so the returned
    (k, n, n) matrix stack and structure constants are deterministic.
    """
    n = a.dim
    flat = ffla.kernel_basis_tall(_build_leibniz(a), a.p)
    mats = flat.reshape(-1, n, n)
    lie, _ = lie_algebra_from_operators(mats, a.p)
    return lie, mats


def super_derivation_algebra(s: SuperAlgebra):
    """Even and odd superderivations of s: (Lie superalgebra, matrices).

    Even derivations preserve parity and satisfy plain Leibniz; odd ones
    reverse parity and satisfy D(xy) = D(x)y + (-1)^{|x|} x D(y).
    """
    n, p = s.dim, s.p
    par = s.parity

    def solve_part(sign_vec, parity_flip):
        m = _build_leibniz(s, sign_vec)
        r, c = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
        wrong = ((par[r] + par[c]) % 2 != parity_flip).ravel()
        extra = np.eye(n * n, dtype=np.int16)[wrong]
        return ffla.kernel_basis_tall(np.vstack([m, extra]), p).reshape(-1, n, n)

    even = solve_part(None, 0)
    odd = solve_part(1 - 2 * par, 1)
    mats = np.vstack([even, odd])
    parity = np.array([0] * len(even) + [1] * len(odd), dtype=np.int64)
    lie, _ = super_algebra_from_operators(mats, parity, p)
    return lie, mats


def lie_algebra_from_operators(mats, p: int):
    """Commutator structure constants on a linearly independent matrix family."""
    mats = ffla.reduce_mod(np.asarray(mats), p)
    k, n, _ = mats.shape
    flat = mats.reshape(k, n * n)
    if ffla.rank(flat, p) != k:
        raise ValueError("operator family is linearly dependent")
    prods = ffla.gemm(mats[:, None], mats[None, :], p)
    comm = (prods - prods.transpose(1, 0, 2, 3)) % p
    coords = ffla.solve(flat.T, comm.reshape(k * k, n * n).T, p)
    return BasedAlgebra(p=p, c=coords.T.reshape(k, k, k)), mats


def super_algebra_from_operators(mats, parity, p: int):
    """Super-commutator structure constants on parity-homogeneous matrices."""
    mats = ffla.reduce_mod(np.asarray(mats), p)
    parity = np.asarray(parity, dtype=np.int64) % 2
    k, n, _ = mats.shape
    flat = mats.reshape(k, n * n)
    if ffla.rank(flat, p) != k:
        raise ValueError("operator family is linearly dependent")
    prods = ffla.gemm(mats[:, None], mats[None, :], p)
    sign = _parity_signs(parity)
    comm = (prods - sign[:, :, None, None] * prods.transpose(1, 0, 2, 3)) % p
    coords = ffla.solve(flat.T, comm.reshape(k * k, n * n).T, p)
    return SuperAlgebra(p=p, c=coords.T.reshape(k, k, k), parity=parity), mats


# ---------------------------------------------------------------------------
# Ideals, simplicity, module closures


def ideal_closure(a: BasedAlgebra, seed) -> np.ndarray:
    """Smallest subspace containing the seed rows, closed under both products.

    Monotone: the span only grows, and it reaches its fixed point in at most
    dim rounds.  Rows of the returned array span the ideal.
    """
    n, p = a.dim, a.p
    c64 = a.c.astype(np.int64)
    lflat = c64.reshape(n, n * n)
    rflat = np.ascontiguousarray(c64.transpose(1, 0, 2)).reshape(n, n * n)
    span = ffla.RowSpace(n, p)
    span.add_block(np.atleast_2d(ffla.reduce_mod(seed, p)))
    frontier = span.rows.copy()
    while frontier.shape[0] and span.rank < n:
        before = span.rank
        lprod = ffla.gemm(frontier, lflat, p).reshape(-1, n)
        rprod = ffla.gemm(frontier, rflat, p).reshape(-1, n)
        span.add_block(np.vstack([lprod, rprod]))
        frontier = span.rows[before:].copy()
    return span.rows.copy()


def module_closure(ops, seed, p: int) -> np.ndarray:
    """Closure of the seed rows under a stack of operators (op @ v convention)."""
    ops = ffla.reduce_mod(np.asarray(ops), p)
    n = ops.shape[-1]
    span = ffla.RowSpace(n, p)
    span.add_block(np.atleast_2d(ffla.reduce_mod(seed, p)))
    frontier = span.rows.copy()
    while frontier.shape[0] and span.rank < n:
        before = span.rank
        prods = ffla.gemm(ops, frontier.T, p)
        span.add_block(prods.transpose(0, 2, 1).reshape(-1, n))
        frontier = span.rows[before:].copy()
    return span.rows.copy()


def _simplicity_probes(n: int, p: int):
    probes = [row for row in np.eye(n, dtype=np.int64)]
    rng = np.random.default_rng(SIMPLICITY_SEED)
    sample = rng.integers(0, p, size=(SIMPLICITY_TRIALS, n))
    probes.extend(row for row in sample if row.any())
    return probes


def is_simple(a: BasedAlgebra) -> bool:
    """Nonzero product, and every probed nonzero ideal closure is everything.

    Probes are all basis vectors plus 64 vectors from a fixed-seed generator.
    A "False" answer is exact (the offending closure is a proper ideal); a
    "True" answer certifies that no proper ideal meets the probe set.
    """
    if not a.c.any():
        return False
    n = a.dim
    for probe in _simplicity_probes(n, a.p):
        if ideal_closure(a, probe).shape[0] != n:
            return False
    return True


def is_simple_super(s: SuperAlgebra) -> bool:
    """Simplicity against graded ideals: homogeneous probes only.

    Each probe vector is split into its even and odd components before
    closing up, since a graded ideal contains the components of each of its
    elements.
    """
    if not s.c.any():
        return False
    n = s.dim
    even_mask = (s.parity == 0).astype(np.int64)
    for probe in _simplicity_probes(n, s.p):
        for part in (probe * even_mask, probe * (1 - even_mask)):
            if part.any() and ideal_closure(s, part).shape[0] != n:
                return False
    return True


# ---------------------------------------------------------------------------
# Normalized traces and subalgebra restriction


def normalized_trace(a: BasedAlgebra) -> np.ndarray:
    """The unique t with t(1) = 1 and t((xy)z) = t(x(yz)) on basis triples.

    Raises NoTraceError if the system is inconsistent and TraceNotUniqueError
    (carrying the solution-space dimension) if it is underdetermined.
    """
    if a.unit is None:
        raise ValueError("normalized trace needs a unital algebra")
    n, p = a.dim, a.p
    c64 = a.c.astype(np.int64)
    left = np.tensordot(c64, c64, axes=([2], [0]))  # [i, j, k, out] = (b_i b_j) b_k
    right = np.tensordot(c64, c64, axes=([2], [1]))  # [j, k, i, out] = b_i (b_j b_k)
    right = right.transpose(2, 0, 1, 3)
    rows = (left - right).reshape(n**3, n) % p
    unit_row = ffla.reduce_mod(a.unit, p)[None, :]
    sys = np.vstack([rows, unit_row])
    rhs = np.zeros(sys.shape[0], dtype=np.int64)
    rhs[-1] = 1
    try:
        t = ffla.solve(sys, rhs, p)
    except ValueError as exc:
        raise NoTraceError(str(exc)) from exc
    hom = ffla.kernel_basis_tall(rows, p)
    vals = hom @ unit_row[0] % p if hom.size else np.zeros(0, dtype=np.int64)
    free = hom.shape[0] - (1 if vals.any() else 0)
    if free:
        raise TraceNotUniqueError(int(free))
    return t


def restricted_algebra(a: BasedAlgebra, rows) -> BasedAlgebra:
    """Induced structure constants on a subalgebra spanned by the given rows.

    Raises ValueError if the rows are dependent or the span is not closed
    under the product.  The unit is carried over when it lies in the span.
    """
    rows = np.atleast_2d(ffla.reduce_mod(rows, a.p))
    m, n = rows.shape
    if ffla.rank(rows, a.p) != m:
        raise ValueError("basis rows are linearly dependent")
    c64 = a.c.astype(np.int64)
    t1 = np.tensordot(rows, c64, axes=(1, 0))  # [a, j, k] = coords of row_a . b_j
    prods = np.matmul(rows[None, :, :], t1) % a.p  # [a, b, k] = row_a . row_b
    try:
        coords = ffla.solve(rows.T, prods.reshape(m * m, n).T, a.p)
    except ValueError as exc:
        raise ValueError("subspace is not closed under the product") from exc
    unit = None
    if a.unit is not None:
        try:
            unit = ffla.solve(rows.T, a.unit, a.p)
        except ValueError:
            unit = None
    return BasedAlgebra(p=a.p, c=coords.T.reshape(m, m, m), unit=unit)


# ---------------------------------------------------------------------------
# Serialization


def algebra_to_json(a: BasedAlgebra) -> dict:
    """Sparse JSON form: entries [i, j, k, value] in ascending (i, j, k)."""
    entries = [
        [int(i), int(j), int(k), int(a.c[i, j, k])] for i, j, k in np.argwhere(a.c)
    ]
    out = {"p": int(a.p), "dim": int(a.dim), "c": entries}
    out["unit"] = None if a.unit is None else [int(v) for v in a.unit]
    if isinstance(a, SuperAlgebra):
        out["parity"] = [int(v) for v in a.parity]
    return out


def algebra_from_json(d: dict):
    n = int(d["dim"])
    c = np.zeros((n, n, n), dtype=np.int64)
    for i, j, k, v in d["c"]:
        c[i, j, k] = v
    unit = None if d.get("unit") is None else np.array(d["unit"], dtype=np.int64)
    if d.get("parity") is not None:
        return SuperAlgebra(
            p=int(d["p"]), c=c, unit=unit, parity=np.array(d["parity"], dtype=np.int64)
        )
    return BasedAlgebra(p=int(d["p"]), c=c, unit=unit)
