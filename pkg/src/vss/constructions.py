"""Octonions, the Albert algebra, triality, and the Tits construction.

Everything is built over GF(p) from integer structure constants:

* octonions with the standard Fano-plane table, their norm, conjugation,
  and the para-product x * y = conj(x) conj(y);
* the 27-dimensional exceptional Jordan algebra ("Albert algebra") of
  hermitian 3x3 matrices over the octonions, in the basis
  E1, E2, E3, iota_1(e0..e7), iota_2(e0..e7), iota_3(e0..e7);
* a distinguished order-5 related triple (chi, rho_plus, rho_minus) of
  norm isometries, the induced order-5 automorphism of the Albert algebra,
  and the chain splitting whose semisimplification is the 10-dimensional
  Kac superalgebra;
* the derivation algebra of the Albert algebra as triality derivations
  plus inner derivations, with its induced automorphism and splitting;
* the Tits construction Der(C) + C0 x J0 + Der(J) producing the exceptional
  Lie algebras (and, with J a superalgebra, their super analogues).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import ffla
from .algebra import (
    BasedAlgebra,
    SuperAlgebra,
    derivation_algebra,
    lie_algebra_from_operators,
    normalized_trace,
    super_algebra_from_operators,
    super_derivation_algebra,
)
from .recipes import CpAlgebra, SplittingData, _pair_products, splitting_with_heads

__all__ = [
    "NotRelatedTripleError",
    "OctonionAlgebra",
    "AlbertAlgebra",
    "TrialityTriple",
    "CompositionAlgebra",
    "TitsAlgebra",
    "build_octonions",
    "build_albert",
    "build_rho_chi",
    "build_sigma",
    "paper_splitting",
    "so_norm_basis",
    "triality_complete",
    "triality_basis",
    "triality_derivation",
    "inner_derivation",
    "der_albert",
    "ad_matrix",
    "der_sigma",
    "der_splitting",
    "composition_octonions",
    "composition_matrices2",
    "composition_split_pair",
    "composition_field",
    "tits_construction",
    "tits_automorphism",
]


class NotRelatedTripleError(ValueError):
    """The three maps fail phi1(x * y) = phi2(x) * phi3(y) on the para product."""


# ---------------------------------------------------------------------------
# Octonions

# each (a, b, c) satisfies e_a e_b = e_c and cyclically, minus when flipped
FANO_TRIPLES = [(1, 2, 4), (2, 3, 5), (3, 4, 6), (4, 5, 7), (5, 6, 1), (6, 7, 2), (7, 1, 3)]


@dataclass
class OctonionAlgebra:
    """Octonions with norm data and the para-Hurwitz companion product."""

    algebra: BasedAlgebra  # unital octonion product
    para: BasedAlgebra  # x * y = conj(x) conj(y)
    norm: np.ndarray  # polarized norm matrix, n(e_i, e_j) = 2 delta_ij
    conj: np.ndarray  # conjugation: fixes e0, negates e1..e7

    @property
    def p(self) -> int:
        return self.algebra.p


def build_octonions(p: int) -> OctonionAlgebra:
    """Split octonions over GF(p) in the orthonormal Fano basis."""
    ffla.check_modulus(p)
    c = np.zeros((8, 8, 8), dtype=np.int64)
    c[0, 0, 0] = 1
    for i in range(1, 8):
        c[0, i, i] = 1
        c[i, 0, i] = 1
        c[i, i, 0] = p - 1
    for a, b, d in FANO_TRIPLES:
        for x, y, z in ((a, b, d), (b, d, a), (d, a, b)):
            c[x, y, z] = 1
            c[y, x, z] = p - 1
    unit = np.zeros(8, dtype=np.int64)
    unit[0] = 1
    conj = -np.eye(8, dtype=np.int64) % p
    conj[0, 0] = 1
    signs = conj.diagonal()
    para = np.einsum("i,j,ijk->ijk", signs, signs, c) % p
    return OctonionAlgebra(
        algebra=BasedAlgebra(p=p, c=c, unit=unit),
        para=BasedAlgebra(p=p, c=para),
        norm=2 * np.eye(8, dtype=np.int64) % p,
        conj=conj,
    )


# ---------------------------------------------------------------------------
# Albert algebra


@dataclass
class AlbertAlgebra:
    """The 27-dimensional exceptional Jordan algebra over GF(p)."""

    algebra: BasedAlgebra
    octonions: OctonionAlgebra

    @property
    def p(self) -> int:
        return self.algebra.p

    def e_vec(self, i: int) -> np.ndarray:
        """The idempotent E_i, i in 1..3."""
        v = np.zeros(27, dtype=np.int64)
        v[(i - 1) % 3] = 1
        return v

    def iota_vec(self, i: int, x) -> np.ndarray:
        """iota_i(x) for an octonion coordinate vector x, i in 1..3."""
        v = np.zeros(27, dtype=np.int64)
        v[self.iota_slice(i)] = ffla.reduce_mod(np.asarray(x), self.p)
        return v

    @staticmethod
    def iota_slice(i: int) -> slice:
        o = 3 + 8 * ((i - 1) % 3)
        return slice(o, o + 8)


def build_albert(p: int) -> AlbertAlgebra:
    """Hermitian 3x3 octonion matrices with the symmetrized product.

    In this basis the off-diagonal embeddings iota_i carry a factor 2, so
    iota_i(a) iota_i(b) = 2 n(a,b) (E_{i+1} + E_{i+2}) and the squares
    iota_i(a)^2 land on 4 n(a) rather than n(a).
    """
    oct_ = build_octonions(p)
    para = oct_.para.c.astype(np.int64)
    half = (p + 1) // 2
    c = np.zeros((27, 27, 27), dtype=np.int64)
    off = [3, 11, 19]
    for i in range(3):
        c[i, i, i] = 1
    for i in range(3):
        for k in range(8):
            col = off[i] + k
            for j in (1, 2):
                c[(i + j) % 3, col, col] = half
                c[col, (i + j) % 3, col] = half
    for i in range(3):
        a0, b0, t0 = off[i], off[(i + 1) % 3], off[(i + 2) % 3]
        for a in range(8):
            for b in range(8):
                for k in np.nonzero(para[a, b])[0]:
                    c[a0 + a, b0 + b, t0 + k] = para[a, b, k]
                    c[b0 + b, a0 + a, t0 + k] = para[a, b, k]
    four = 4 % p
    for i in range(3):
        for a in range(8):
            c[off[i] + a, off[i] + a, (i + 1) % 3] = four
            c[off[i] + a, off[i] + a, (i + 2) % 3] = four
    unit = np.zeros(27, dtype=np.int64)
    unit[:3] = 1
    grading = np.zeros((27, 2), dtype=np.int64)
    grading[3:11] = (0, 1)
    grading[11:19] = (1, 0)
    grading[19:27] = (1, 1)
    algebra = BasedAlgebra(p=p, c=c, unit=unit, grading=grading, grading_orders=(2, 2))
    return AlbertAlgebra(algebra=algebra, octonions=oct_)


# ---------------------------------------------------------------------------
# The distinguished related triple and the Albert automorphism


@dataclass
class TrialityTriple:
    """Norm isometries with chi(x * y) = rho_plus(x) * rho_minus(y)."""

    chi: np.ndarray
    rho_plus: np.ndarray
    rho_minus: np.ndarray


def related_triple_holds(oct_: OctonionAlgebra, phi1, phi2, phi3) -> bool:
    """Check phi1(x * y) = phi2(x) * phi3(y) on all basis pairs (para product)."""
    p = oct_.p
    para = oct_.para.c.astype(np.int64)
    lhs = np.einsum("ijk,mk->ijm", para, phi1) % p
    rhs = np.einsum("ai,bj,abm->ijm", phi2, phi3, para) % p
    return np.array_equal(lhs, rhs)


def build_rho_chi(p: int = 5) -> TrialityTriple:
    """The order-5 related triple built from two pairs of para-multiplications.

    rho_minus is the composition l_{e3-e4} r_{e4-e5} l_{e5-e6} r_{e6-e7}
    (the scalar -1/4 that normalizes it over a general field is 1 mod 5),
    rho_plus its conjugate under the octonion conjugation, and chi the
    5-cycle e3 -> e4 -> ... -> e7 -> e3 fixing e0, e1, e2.
    """
    if p != 5:
        raise ValueError("the distinguished related triple is a GF(5) object")
    oct_ = build_octonions(p)
    para = oct_.para

    def diff(i: int, j: int) -> np.ndarray:
        v = np.zeros(8, dtype=np.int64)
        v[i], v[j] = 1, p - 1
        return v

    rho_minus = (
        para.left_mul(diff(3, 4))
        @ para.right_mul(diff(4, 5))
        % p
        @ para.left_mul(diff(5, 6))
        % p
        @ para.right_mul(diff(6, 7))
        % p
    )
    rho_plus = (
        para.right_mul(diff(3, 4))
        @ para.left_mul(diff(4, 5))
        % p
        @ para.right_mul(diff(5, 6))
        % p
        @ para.left_mul(diff(6, 7))
        % p
    )
    if not np.array_equal(rho_plus, oct_.conj @ rho_minus % p @ oct_.conj % p):
        raise NotRelatedTripleError("rho_plus is not the conjugate of rho_minus")
    chi = np.zeros((8, 8), dtype=np.int64)
    for i in range(3):
        chi[i, i] = 1
    for i in range(3, 8):
        chi[3 + (i - 2) % 5, i] = 1
    triple = TrialityTriple(chi=chi, rho_plus=rho_plus, rho_minus=rho_minus)
    if not related_triple_holds(oct_, chi, rho_plus, rho_minus):
        raise NotRelatedTripleError("chi, rho_plus, rho_minus are not related")
    return triple


def build_sigma(albert: AlbertAlgebra, triple: TrialityTriple) -> np.ndarray:
    """The Albert automorphism acting blockwise by chi, rho_plus, rho_minus.

    E_i are fixed; iota_1 transforms by chi, iota_2 by rho_plus, iota_3 by
    rho_minus.  The triple must be related, otherwise this is not an
    algebra map.
    """
    if not related_triple_holds(albert.octonions, triple.chi, triple.rho_plus, triple.rho_minus):
        raise NotRelatedTripleError("the triple does not satisfy the triality identity")
    p = albert.p
    sigma = np.zeros((27, 27), dtype=np.int64)
    sigma[:3, :3] = np.eye(3, dtype=np.int64)
    sigma[3:11, 3:11] = triple.chi % p
    sigma[11:19, 11:19] = triple.rho_plus % p
    sigma[19:27, 19:27] = triple.rho_minus % p
    return sigma


def paper_splitting(cpa: CpAlgebra) -> SplittingData:
    """The splitting with even part E_i, iota_1(e0..e2), odd part iota_2/3(e0), (e2).

    Heads are unit coordinate vectors in the Albert basis; the head
    conditions (fixed even heads, odd heads generating length-4 chains)
    are checked by the splitting constructor.
    """
    eye = np.eye(27, dtype=np.int64)
    even = eye[[0, 1, 2, 3, 4, 5]]
    odd = eye[[11, 13, 19, 21]]
    return splitting_with_heads(cpa.space, even, odd)


# ---------------------------------------------------------------------------
# Triality Lie algebra and derivations of the Albert algebra


def so_norm_basis(support, n: int = 8) -> np.ndarray:
    """Basis E_ij - E_ji (i < j in support) of skew matrices in size n.

    With the polarized norm a multiple of the identity, these span the
    orthogonal Lie algebra of the form restricted to the support indices.
    """
    support = list(support)
    mats = []
    for a in range(len(support)):
        for b in range(a + 1, len(support)):
            i, j = support[a], support[b]
            m = np.zeros((n, n), dtype=np.int64)
            m[i, j] = 1
            m[j, i] = -1
            mats.append(m)
    return np.array(mats) if mats else np.zeros((0, n, n), dtype=np.int64)


def _triality_system(oct_: OctonionAlgebra) -> np.ndarray:
    """Coefficient matrix of d2(x) * y + x * d3(y) over all basis pairs."""
    para = oct_.para.c.astype(np.int64)
    a = np.zeros((512, 128), dtype=np.int64)
    cols = np.arange(8) * 8
    for i in range(8):
        for j in range(8):
            r0 = (i * 8 + j) * 8
            a[r0 : r0 + 8, cols + i] = para[:, j, :].T
            a[r0 : r0 + 8, 64 + cols + j] = para[i, :, :].T
    return a % oct_.p


def triality_complete(oct_: OctonionAlgebra, d1) -> tuple:
    """The unique (d2, d3) with d1(x * y) = d2(x) * y + x * d3(y)."""
    p = oct_.p
    para = oct_.para.c.astype(np.int64)
    rhs = (np.einsum("ijk,mk->ijm", para, ffla.reduce_mod(d1, p)) % p).ravel()
    sol = ffla.solve(_triality_system(oct_), rhs, p)
    return sol[:64].reshape(8, 8), sol[64:].reshape(8, 8)


def triality_basis(oct_: OctonionAlgebra) -> tuple:
    """(d1s, d2s, d3s): completions of the 28 standard skew matrices."""
    p = oct_.p
    d1s = so_norm_basis(range(8)) % p
    system = _triality_system(oct_)
    para = oct_.para.c.astype(np.int64)
    rhs = np.stack(
        [(np.einsum("ijk,mk->ijm", para, d1) % p).ravel() for d1 in d1s], axis=1
    )
    sols = ffla.solve(system, rhs, p)
    d2s = sols[:64].T.reshape(-1, 8, 8)
    d3s = sols[64:].T.reshape(-1, 8, 8)
    return d1s, d2s, d3s


def triality_derivation(d1, d2, d3, p: int) -> np.ndarray:
    """The Albert derivation killing E_i and acting by d_i on iota_i."""
    d = np.zeros((27, 27), dtype=np.int64)
    d[3:11, 3:11] = ffla.reduce_mod(d1, p)
    d[11:19, 11:19] = ffla.reduce_mod(d2, p)
    d[19:27, 19:27] = ffla.reduce_mod(d3, p)
    return d


def inner_derivation(albert: AlbertAlgebra, i: int, x) -> np.ndarray:
    """D_i(x) = 2 [L_{iota_i(x)}, L_{E_{i+1}}] as a 27x27 matrix, i in 1..3."""
    p = albert.p
    la = albert.algebra.left_mul(albert.iota_vec(i, x))
    lb = albert.algebra.left_mul(albert.e_vec(i % 3 + 1))
    return 2 * (la @ lb - lb @ la) % p


def der_albert(albert: AlbertAlgebra) -> tuple:
    """Derivation algebra in the structured basis (triality | D_1 | D_2 | D_3).

    Returns (lie, mats): 28 triality derivations followed by the 24 inner
    derivations D_i(e_k), with the commutator structure constants and the
    square-class grading (triality (0,0), D_i matching the iota_i component).
    """
    p = albert.p
    d1s, d2s, d3s = triality_basis(albert.octonions)
    mats = [triality_derivation(a, b, c, p) for a, b, c in zip(d1s, d2s, d3s)]
    eye8 = np.eye(8, dtype=np.int64)
    for i in (1, 2, 3):
        mats.extend(inner_derivation(albert, i, eye8[k]) for k in range(8))
    lie, mats = lie_algebra_from_operators(np.array(mats), p)
    grading = np.zeros((52, 2), dtype=np.int64)
    grading[28:36] = (0, 1)
    grading[36:44] = (1, 0)
    grading[44:52] = (1, 1)
    lie = BasedAlgebra(p=p, c=lie.c, grading=grading, grading_orders=(2, 2))
    return lie, mats


def ad_matrix(g, mats, p: int) -> np.ndarray:
    """Coordinates of D -> g D g^{-1} on the span of mats (columns = images)."""
    mats = ffla.reduce_mod(np.asarray(mats), p)
    k = mats.shape[0]
    ginv = ffla.inverse(g, p)
    conj = np.array([g @ m % p @ ginv % p for m in mats])
    flat = mats.reshape(k, -1)
    return ffla.solve(flat.T, conj.reshape(k, -1).T, p)


def der_sigma(albert: AlbertAlgebra, sigma, mats) -> np.ndarray:
    """The automorphism Ad_sigma of Der(Albert) in the given basis."""
    return ad_matrix(sigma, mats, albert.p)


def der_splitting(space) -> SplittingData:
    """Splitting of Der(Albert) under Ad_sigma in the structured basis.

    Even heads: the three triality derivations whose first component is
    skew on span(e0, e1, e2), plus D_1(e0), D_1(e1), D_1(e2).  Odd heads:
    D_2(e0), D_2(e2), D_3(e0), D_3(e2).
    """
    eye = np.eye(52, dtype=np.int64)
    even = eye[[0, 1, 7, 28, 29, 30]]
    odd = eye[[36, 38, 44, 46]]
    return splitting_with_heads(space, even, odd)


# ---------------------------------------------------------------------------
# Composition algebras for the Tits construction


@dataclass
class CompositionAlgebra:
    """A unital algebra with a multiplicative norm, packaged for Tits.

    ``zero_part`` spans the trace-zero subspace {x : n(1, x) = 0} and
    ``der_mats`` the derivation algebra.
    """

    algebra: BasedAlgebra
    norm: np.ndarray
    zero_part: np.ndarray
    der_mats: np.ndarray

    @property
    def p(self) -> int:
        return self.algebra.p


def composition_octonions(p: int) -> CompositionAlgebra:
    oct_ = build_octonions(p)
    _, mats = derivation_algebra(oct_.algebra)
    return CompositionAlgebra(
        algebra=oct_.algebra,
        norm=oct_.norm,
        zero_part=np.eye(8, dtype=np.int64)[1:],
        der_mats=mats,
    )


def composition_matrices2(p: int) -> CompositionAlgebra:
    """2x2 matrices with the determinant norm, basis E11, E12, E21, E22."""
    c = np.zeros((4, 4, 4), dtype=np.int64)
    for a in range(2):
        for b in range(2):
            for d in range(2):
                c[2 * a + b, 2 * b + d, 2 * a + d] = 1
    unit = np.array([1, 0, 0, 1], dtype=np.int64)
    norm = np.zeros((4, 4), dtype=np.int64)
    norm[0, 3] = norm[3, 0] = 1
    norm[1, 2] = norm[2, 1] = p - 1
    zero = np.array([[0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, p - 1]], dtype=np.int64)
    _, mats = derivation_algebra(BasedAlgebra(p=p, c=c, unit=unit))
    return CompositionAlgebra(
        algebra=BasedAlgebra(p=p, c=c, unit=unit), norm=norm, zero_part=zero, der_mats=mats
    )


def composition_split_pair(p: int) -> CompositionAlgebra:
    """F + F with the product norm; no derivations."""
    c = np.zeros((2, 2, 2), dtype=np.int64)
    c[0, 0, 0] = 1
    c[1, 1, 1] = 1
    norm = np.array([[0, 1], [1, 0]], dtype=np.int64)
    return CompositionAlgebra(
        algebra=BasedAlgebra(p=p, c=c, unit=np.array([1, 1])),
        norm=norm,
        zero_part=np.array([[1, p - 1]], dtype=np.int64),
        der_mats=np.zeros((0, 2, 2), dtype=np.int64),
    )


def composition_field(p: int) -> CompositionAlgebra:
    """The ground field with n(x) = x^2; the zero part is trivial."""
    c = np.ones((1, 1, 1), dtype=np.int64)
    return CompositionAlgebra(
        algebra=BasedAlgebra(p=p, c=c, unit=np.array([1])),
        norm=np.array([[2]], dtype=np.int64) % p,
        zero_part=np.zeros((0, 1), dtype=np.int64),
        der_mats=np.zeros((0, 1, 1), dtype=np.int64),
    )


# ---------------------------------------------------------------------------
# Tits construction


@dataclass
class TitsAlgebra:
    """Der(C) + C0 x J0 + Der(J) with its bracket, plus building data."""

    lie: BasedAlgebra
    comp: CompositionAlgebra
    j: BasedAlgebra
    trace: np.ndarray
    j_zero: np.ndarray
    der_j_mats: np.ndarray

    @property
    def offsets(self) -> tuple:
        kc = self.comp.der_mats.shape[0]
        m = self.comp.zero_part.shape[0]
        q = self.j_zero.shape[0]
        return kc, kc + m * q, self.lie.dim


def _coords_rows(basis_rows, vecs, p):
    """Coordinates of vecs (rows) in the row basis basis_rows."""
    if basis_rows.shape[0] == 0:
        if np.any(np.asarray(vecs) % p):
            raise ValueError("vector outside the empty span")
        return np.zeros((len(vecs), 0), dtype=np.int64)
    return ffla.solve(basis_rows.T, np.asarray(vecs).T % p, p).T


def tits_construction(comp: CompositionAlgebra, j: BasedAlgebra, trace=None) -> TitsAlgebra:
    """The Lie (super)algebra Der(C) + C0 x J0 + Der(J).

    The bracket restricted to the tensor summand is

        [a x, b y] = t(xy) D_{a,b} + [a,b] (xy - t(xy) 1) - 2 n(a,b) d_{x,y}

    with t the normalized trace of J, D_{a,b} the standard inner derivation
    of C, and d_{x,y} = [L_x, L_y] (a super commutator when J is super).
    Both derivation summands act componentwise and commute with each other.
    Raises the trace errors of normalized_trace when no trace is supplied
    and J does not determine one.
    """
    p = j.p
    if comp.p != p:
        raise ValueError("composition algebra and J live over different fields")
    if trace is None:
        trace = normalized_trace(j)
    trace = ffla.reduce_mod(trace, p)
    is_super = isinstance(j, SuperAlgebra)

    cC = comp.algebra.c.astype(np.int64)
    nc = comp.algebra.dim
    c0 = comp.zero_part % p
    m = c0.shape[0]
    der_c = comp.der_mats % p
    kc = der_c.shape[0]

    j0 = ffla.kernel_basis(trace[None, :], p)
    q = j0.shape[0]
    nj = j.dim
    cJ = j.c.astype(np.int64)
    if is_super:
        lie_j, der_j = super_derivation_algebra(j)
        par_d = lie_j.parity
        par_x = np.array([int(j.parity[np.nonzero(row)[0]].max()) for row in j0])
        for row, px in zip(j0, par_x):
            if j.parity[np.nonzero(row)[0]].min() != px:
                raise ValueError("trace-zero basis is not parity homogeneous")
    else:
        lie_j, der_j = derivation_algebra(j)
        par_d = np.zeros(lie_j.dim, dtype=np.int64)
        par_x = np.zeros(q, dtype=np.int64)
    kj = lie_j.dim

    if kc:
        lie_c, der_c = lie_algebra_from_operators(der_c, p)
    else:
        lie_c = BasedAlgebra(p=p, c=np.zeros((0, 0, 0), dtype=np.int64))

    n = kc + m * q + kj
    o2, o3 = kc, kc + m * q
    c = np.zeros((n, n, n), dtype=np.int64)
    c[:kc, :kc, :kc] = lie_c.c
    c[o3:, o3:, o3:] = lie_j.c

    if kc and m:
        imgs = np.einsum("kuv,av->kau", der_c, c0) % p
        coords = _coords_rows(c0, imgs.reshape(-1, nc), p).reshape(kc, m, m)
        eye_q = np.eye(q, dtype=np.int64)
        for k in range(kc):
            block = np.kron(coords[k], eye_q)
            c[k, o2:o3, o2:o3] = block
            c[o2:o3, k, o2:o3] = (p - block) % p
    if kj and m:
        imgs = np.einsum("ruv,xv->rxu", der_j, j0) % p
        coords = _coords_rows(j0, imgs.reshape(-1, nj), p).reshape(kj, q, q)
        eye_m = np.eye(m, dtype=np.int64)
        for r in range(kj):
            block = np.kron(eye_m, coords[r])
            c[o3 + r, o2:o3, o2:o3] = block
            back = np.kron(eye_m, ((-1) ** (par_x * par_d[r]))[:, None] * coords[r])
            c[o2:o3, o3 + r, o2:o3] = (p - back) % p

    if m:
        # products and trace values in J
        pj = _pair_products(j0, j0, cJ, p)  # (q, q, nj)
        tau = pj @ trace % p
        # [a, b] and (xy - t(xy) 1) coordinates
        pc = _pair_products(c0, c0, cC, p)
        comm = (pc - pc.transpose(1, 0, 2)) % p
        gamma = _coords_rows(c0, comm.reshape(-1, nc), p).reshape(m, m, m)
        depleted = pj.copy()
        if j.unit is None:
            raise ValueError("J must be unital")
        depleted = (depleted - tau[:, :, None] * j.unit[None, None, :]) % p
        zeta = _coords_rows(j0, depleted.reshape(-1, nj), p).reshape(q, q, q)
        # D_{a,b} = ad([a,b]) + 3((.a)b - a(.b)) as matrices, in Der(C) coordinates
        lc = np.einsum("ai,ijk->akj", c0, cC) % p
        rc = np.einsum("bj,ijk->bki", c0, cC) % p
        adcomm = (
            np.einsum("abi,ijk->abkj", comm, cC) - np.einsum("abj,ijk->abki", comm, cC)
        ) % p
        dab = (adcomm + 3 * (np.matmul(rc[None, :], lc[:, None]) - np.matmul(lc[:, None], rc[None, :]))) % p
        if kc:
            dab_coords = _coords_rows(
                der_c.reshape(kc, -1), dab.reshape(m * m, -1), p
            ).reshape(m, m, kc)
        else:
            if dab.any():
                raise ValueError("inner derivations do not vanish on a trivial Der(C)")
            dab_coords = np.zeros((m, m, 0), dtype=np.int64)
        # d_{x,y} = L_x L_y - (-1)^{|x||y|} L_y L_x in Der(J) coordinates
        lj = np.einsum("xi,ijk->xkj", j0, cJ) % p
        prods = np.matmul(lj[:, None], lj[None, :])
        sgn = (-1) ** np.outer(par_x, par_x)
        dxy = (prods - sgn[:, :, None, None] * prods.transpose(1, 0, 2, 3)) % p
        if kj:
            dxy_coords = _coords_rows(
                der_j.reshape(kj, -1), dxy.reshape(q * q, -1), p
            ).reshape(q, q, kj)
        else:
            if dxy.any():
                raise ValueError("inner derivations do not vanish on a trivial Der(J)")
            dxy_coords = np.zeros((q, q, 0), dtype=np.int64)
        n0 = c0 @ comp.norm % p @ c0.T % p
        mq = m * q
        if kc:
            c[o2:o3, o2:o3, :kc] = np.einsum("xy,abk->axbyk", tau, dab_coords).reshape(
                mq, mq, kc
            )
        c[o2:o3, o2:o3, o2:o3] = np.einsum("abc,xyz->axbycz", gamma, zeta).reshape(
            mq, mq, mq
        )
        if kj:
            c[o2:o3, o2:o3, o3:] = np.einsum(
                "ab,xyr->axbyr", (-2 * n0) % p, dxy_coords
            ).reshape(mq, mq, kj) % p

    parity = np.concatenate([np.zeros(kc, dtype=np.int64), np.tile(par_x, m), par_d])
    if is_super:
        lie = SuperAlgebra(p=p, c=c % p, parity=parity)
    else:
        lie = BasedAlgebra(p=p, c=c % p)
    return TitsAlgebra(lie=lie, comp=comp, j=j, trace=trace, j_zero=j0, der_j_mats=der_j)


def tits_automorphism(tits: TitsAlgebra, sigma_j) -> np.ndarray:
    """The automorphism acting trivially on Der(C), by sigma on J0, by Ad on Der(J)."""
    p = tits.j.p
    sigma_j = ffla.reduce_mod(sigma_j, p)
    kc, o3, n = tits.offsets
    q = tits.j_zero.shape[0]
    m = tits.comp.zero_part.shape[0]
    out = np.zeros((n, n), dtype=np.int64)
    out[:kc, :kc] = np.eye(kc, dtype=np.int64)
    if m and q:
        s0 = ffla.solve(tits.j_zero.T, sigma_j @ tits.j_zero.T % p, p)
        out[kc:o3, kc:o3] = np.kron(np.eye(m, dtype=np.int64), s0)
    if n > o3:
        out[o3:, o3:] = ad_matrix(sigma_j, tits.der_j_mats, p)
    return out
