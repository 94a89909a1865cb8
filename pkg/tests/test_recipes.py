"""Tests for the semisimplification recipes on synthetic algebras."""

import numpy as np
import pytest

from vss import ffla, recipes, repcp
from vss.algebra import BasedAlgebra
from vss.repcp import CpBilinearMap, NotEquivariantError


def block_diag(blocks):
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n), dtype=np.int64)
    o = 0
    for b in blocks:
        k = b.shape[0]
        out[o : o + k, o : o + k] = b
        o += k
    return out


def random_cp_algebra(p, lengths, seed):
    """Random algebra with an order-p automorphism of prescribed chain type.

    sigma is a direct sum of unipotent Jordan blocks (one per entry of
    lengths) conjugated by a random change of basis.  The product starts
    from a random cube and is symmetrized over the cyclic group,
    c = sum_k sigma^-k c0(sigma^k ., sigma^k .), which forces sigma to be
    an automorphism.
    """
    rng = np.random.default_rng(seed)
    n = sum(lengths)
    sigma0 = block_diag([repcp.standard_indecomposable(ell, p).sigma for ell in lengths])
    while True:
        g = rng.integers(0, p, size=(n, n))
        if ffla.rank(g, p) == n:
            break
    sigma = g @ sigma0 % p @ ffla.inverse(g, p) % p
    c0 = rng.integers(0, p, size=(n, n, n))
    c = np.zeros_like(c0)
    sk = np.eye(n, dtype=np.int64)
    sinvk = np.eye(n, dtype=np.int64)
    sinv = ffla.inverse(sigma, p)
    for _ in range(p):
        c += np.einsum("ai,bj,abm,cm->ijc", sk, sk, c0, sinvk)
        c %= p
        sk = sk @ sigma % p
        sinvk = sinv @ sinvk % p
    return recipes.CpAlgebra(BasedAlgebra(p=p, c=c), sigma)


CASES = [
    (3, [1, 1, 2, 2, 3], 11),
    (5, [1, 1, 4, 2], 12),
    (7, [1, 6, 4], 13),
]


@pytest.mark.parametrize("p,lengths,seed", CASES)
def test_generator_census_matches_requested_lengths(p, lengths, seed):
    cpa = random_cp_algebra(p, lengths, seed)
    census = cpa.space.decompose().census
    expected = {}
    for ell in lengths:
        expected[ell] = expected.get(ell, 0) + 1
    assert census == expected


@pytest.mark.parametrize("p,lengths,seed", CASES)
def test_splitting_projectors(p, lengths, seed):
    cpa = random_cp_algebra(p, lengths, seed)
    split = recipes.splitting_from_chains(cpa.space)
    k0, k1 = split.even_dim, split.odd_dim
    assert k0 == sum(1 for ell in lengths if ell == 1)
    assert k1 == sum(1 for ell in lengths if ell == p - 1)
    assert np.array_equal(split.proj_even @ split.even_basis.T % p, np.eye(k0, dtype=np.int64))
    assert np.array_equal(split.proj_odd @ split.odd_basis.T % p, np.eye(k1, dtype=np.int64))
    assert not (split.proj_even @ split.odd_basis.T % p).any()
    assert not (split.proj_odd @ split.even_basis.T % p).any()
    for rows in split.middle_components.values():
        assert not (split.proj_even @ rows.T % p).any()
        assert not (split.proj_odd @ rows.T % p).any()


@pytest.mark.parametrize("p,lengths,seed", CASES)
def test_recipe_dims_and_unit(p, lengths, seed):
    cpa = random_cp_algebra(p, lengths, seed)
    result = recipes.recipe_algebra(cpa)
    sup = result.super
    assert sup.even_dim == sum(1 for ell in lengths if ell == 1)
    assert sup.odd_dim == sum(1 for ell in lengths if ell == p - 1)
    # parity-gradedness of the product is enforced by the constructor


def test_identity_sigma_echoes_the_algebra():
    rng = np.random.default_rng(3)
    p, n = 5, 4
    c = rng.integers(0, p, size=(n, n, n))
    alg = BasedAlgebra(p=p, c=c)
    cpa = recipes.CpAlgebra(alg, np.eye(n, dtype=np.int64))
    result = recipes.recipe_algebra(cpa)
    assert result.super.odd_dim == 0
    assert np.array_equal(result.super.c, alg.c)


def test_rejects_non_automorphism_and_wrong_order():
    cpa = random_cp_algebra(5, [1, 1, 4, 2], 12)
    other = random_cp_algebra(5, [1, 1, 4, 2], 99)
    with pytest.raises(NotEquivariantError):
        recipes.CpAlgebra(cpa.algebra, other.sigma)
    with pytest.raises(ffla.NotOrderPError):
        recipes.CpAlgebra(cpa.algebra, 2 * np.eye(cpa.algebra.dim, dtype=np.int64))


@pytest.mark.parametrize("p,lengths,seed", CASES)
def test_splitting_with_heads_accepts_modified_heads(p, lengths, seed):
    cpa = random_cp_algebra(p, lengths, seed)
    base = recipes.splitting_from_chains(cpa.space)
    delta = cpa.delta
    even2 = base.even_basis.copy()
    even2[0] = 2 * even2[0] % p
    odd2 = base.odd_basis.copy()
    odd2[0] = (2 * odd2[0] + delta @ odd2[0]) % p
    split2 = recipes.splitting_with_heads(cpa.space, even2, odd2)
    result2 = recipes.recipe_algebra(cpa, split2)
    assert result2.super.even_dim == base.even_dim
    assert result2.super.odd_dim == base.odd_dim


def test_splitting_with_heads_rejects_bad_data():
    cpa = random_cp_algebra(5, [1, 1, 4, 2], 12)
    base = recipes.splitting_from_chains(cpa.space)
    even, odd = base.even_basis, base.odd_basis
    with pytest.raises(recipes.SplittingError):
        recipes.splitting_with_heads(cpa.space, even[:1], odd)
    with pytest.raises(recipes.SplittingError):
        recipes.splitting_with_heads(cpa.space, np.vstack([even[0], odd[0]]), odd)
    with pytest.raises(recipes.SplittingError):
        recipes.splitting_with_heads(cpa.space, even, np.vstack([even[0], odd[0]]))
    dup = np.vstack([even[0], even[0]])
    with pytest.raises(recipes.SplittingError):
        recipes.splitting_with_heads(cpa.space, dup, odd)


@pytest.mark.parametrize("p,lengths,seed", CASES)
def test_recipe_bilinear_matches_recipe_algebra(p, lengths, seed):
    cpa = random_cp_algebra(p, lengths, seed)
    split = recipes.splitting_from_chains(cpa.space)
    mu = CpBilinearMap(a=cpa.space, b=cpa.space, c=cpa.space, mu=cpa.algebra.c)
    out = recipes.recipe_bilinear(mu, split, split, split)
    result = recipes.recipe_algebra(cpa, split)
    assert np.array_equal(out.m, result.super.c)
    assert np.array_equal(out.parity_a, result.super.parity)


def test_recipe_bilinear_rejects_non_equivariant():
    cpa = random_cp_algebra(5, [1, 1, 4, 2], 12)
    split = recipes.splitting_from_chains(cpa.space)
    rng = np.random.default_rng(5)
    bad = rng.integers(0, 5, size=cpa.algebra.c.shape)
    mu = CpBilinearMap(a=cpa.space, b=cpa.space, c=cpa.space, mu=bad)
    assert not mu.is_equivariant()
    with pytest.raises(NotEquivariantError):
        recipes.recipe_bilinear(mu, split, split, split)


@pytest.mark.parametrize("p,lengths,seed", CASES)
def test_w_expansion_matches_odd_odd_block(p, lengths, seed):
    """The single-term odd product equals its invariant w-expansion."""
    cpa = random_cp_algebra(p, lengths, seed)
    split = recipes.splitting_from_chains(cpa.space)
    result = recipes.recipe_algebra(cpa, split)
    k0 = result.super.even_dim
    block = result.super.c[k0:, k0:, :k0]
    assert np.array_equal(recipes.w_expansion_products(cpa.algebra, split), block)


@pytest.mark.parametrize("p,lengths,seed", CASES)
def test_canonical_matches_recipe_through_phi(p, lengths, seed):
    cpa = random_cp_algebra(p, lengths, seed)
    result = recipes.canonical_semisimplify(cpa)
    k0 = sum(1 for ell in lengths if ell == 1)
    k1 = sum(1 for ell in lengths if ell == p - 1)
    assert result.star.even_dim == k0
    assert result.star.odd_dim == k1
    assert result.phi.shape == (k0 + k1, k0 + k1)
    assert ffla.rank(result.phi, p) == k0 + k1
    # the constructor has already checked that phi intertwines the products


@pytest.mark.parametrize("p,lengths,seed", CASES)
def test_canonical_star_ignores_representative_choice(p, lengths, seed):
    cpa = random_cp_algebra(p, lengths, seed)
    r = recipes.canonical_semisimplify(cpa)
    p_, n = cpa.p, cpa.algebra.dim
    delta = cpa.delta
    rng = np.random.default_rng(seed + 1)
    even2 = r.even_reps.copy()
    if len(r.even_mod):
        even2 = (even2 + rng.integers(0, p_, (len(even2), len(r.even_mod))) @ r.even_mod) % p_
    odd2 = r.odd_reps.copy()
    if len(r.odd_mod):
        odd2 = (odd2 + rng.integers(0, p_, (len(odd2), len(r.odd_mod))) @ r.odd_mod) % p_
    dpow = ffla.mat_pow(delta, p_ - 2, p_)
    if len(odd2):
        pre2 = ffla.solve(dpow, odd2.T, p_).T
        kerpow = ffla.kernel_basis(dpow, p_)
        if len(kerpow):
            pre2 = (pre2 + rng.integers(0, p_, (len(pre2), len(kerpow))) @ kerpow) % p_
    else:
        pre2 = r.odd_pre
    m2 = recipes._star_products(cpa.algebra, delta, even2, r.even_mod, odd2, r.odd_mod, pre2)
    assert np.array_equal(m2, r.star.c)


@pytest.mark.parametrize("p,lengths,seed", CASES)
def test_two_head_choices_are_phi_conjugate(p, lengths, seed):
    cpa = random_cp_algebra(p, lengths, seed)
    base = recipes.splitting_from_chains(cpa.space)
    delta = cpa.delta
    even2 = base.even_basis.copy()
    even2[-1] = 2 * even2[-1] % p
    odd2 = base.odd_basis.copy()
    odd2[-1] = (odd2[-1] + delta @ odd2[-1]) % p
    split2 = recipes.splitting_with_heads(cpa.space, even2, odd2)
    r1 = recipes.canonical_semisimplify(cpa, base)
    r2 = recipes.canonical_semisimplify(cpa, split2)
    assert np.array_equal(r1.star.c, r2.star.c)
    c1 = recipes.recipe_algebra(cpa, base).super.c.astype(np.int64)
    c2 = recipes.recipe_algebra(cpa, split2).super.c.astype(np.int64)
    t = r1.phi @ ffla.inverse(r2.phi, p) % p
    lhs = np.tensordot(c1, t, axes=(2, 0)) % p
    rhs = np.einsum("au,bv,uvc->abc", t, t, c2) % p
    assert np.array_equal(lhs, rhs)


def truncated_polynomial_algebra(p):
    """F[y]/(y^p) with the derivation y^2 d/dy (chain type 1 + (p-1))."""
    n = p
    c = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            if i + j < n:
                c[i, j, i + j] = 1
    unit = np.zeros(n, dtype=np.int64)
    unit[0] = 1
    d = np.zeros((n, n), dtype=np.int64)
    for k in range(1, n - 1):
        d[k + 1, k] = k
    return BasedAlgebra(p=p, c=c, unit=unit), d


def test_alpha_zero_derivation_is_identity():
    alg, _ = truncated_polynomial_algebra(5)
    apa = recipes.AlphaPAlgebra(alg, np.zeros((5, 5), dtype=np.int64))
    result = recipes.recipe_algebra_alpha(apa)
    assert result.super.odd_dim == 0
    assert np.array_equal(result.super.c, alg.c)
    assert np.array_equal(result.super.unit, alg.unit)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_alpha_truncated_polynomials(p):
    """y^2 d/dy leaves span(1) even and span(y) odd; y . y dies at y^p = 0."""
    alg, d = truncated_polynomial_algebra(p)
    apa = recipes.AlphaPAlgebra(alg, d)
    assert apa.space.decompose().census == {1: 1, p - 1: 1}
    result = recipes.recipe_algebra_alpha(apa)
    sup = result.super
    assert (sup.even_dim, sup.odd_dim) == (1, 1)
    expected = np.zeros((2, 2, 2), dtype=np.int64)
    expected[0, 0, 0] = 1
    expected[0, 1, 1] = 1
    expected[1, 0, 1] = 1
    assert np.array_equal(sup.c, expected)
    assert np.array_equal(sup.unit, [1, 0])


def test_alpha_rejects_non_derivation():
    alg, _ = truncated_polynomial_algebra(5)
    shift = np.zeros((5, 5), dtype=np.int64)
    for k in range(4):
        shift[k, k + 1] = 1
    with pytest.raises(NotEquivariantError):
        recipes.AlphaPAlgebra(alg, shift)


def test_alpha_rejects_unrestricted_derivation():
    n = 6
    zero = BasedAlgebra(p=5, c=np.zeros((n, n, n), dtype=np.int64))
    shift = np.zeros((n, n), dtype=np.int64)
    for k in range(n - 1):
        shift[k + 1, k] = 1
    with pytest.raises(ValueError):
        recipes.AlphaPAlgebra(zero, shift)


def sl2_with_exp_ad_e():
    """sl2 over GF(5) with the order-5 automorphism exp(ad e)."""
    p = 5
    c = np.zeros((3, 3, 3), dtype=np.int64)
    c[0, 2, 1], c[2, 0, 1] = 1, p - 1  # [e,f] = h
    c[1, 0, 0], c[0, 1, 0] = 2, p - 2  # [h,e] = 2e
    c[1, 2, 2], c[2, 1, 2] = p - 2, 2  # [h,f] = -2f
    alg = BasedAlgebra(p=p, c=c)
    ade = np.zeros((3, 3), dtype=np.int64)
    ade[0, 1] = p - 2  # ad e: h -> -2e
    ade[1, 2] = 1  # ad e: f -> h
    sigma = (np.eye(3, dtype=np.int64) + ade + 3 * (ade @ ade)) % p
    return recipes.CpAlgebra(alg, sigma)


def test_sl2_exp_ad_has_empty_semisimplification():
    """A single length-3 chain at p = 5 is killed entirely."""
    cpa = sl2_with_exp_ad_e()
    assert cpa.space.decompose().census == {3: 1}
    result = recipes.recipe_algebra(cpa)
    assert result.super.dim == 0
    canonical = recipes.canonical_semisimplify(cpa)
    assert canonical.star.dim == 0
    assert canonical.phi.shape == (0, 0)
