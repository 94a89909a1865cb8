import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vss import ffla


def rng(seed=0):
    return np.random.default_rng(seed)


def random_invertible(n, p, seed=0):
    g = rng(seed)
    while True:
        a = g.integers(0, p, size=(n, n))
        try:
            ffla.inverse(a, p)
            return a % p
        except ValueError:
            seed += 1
            g = rng(seed)


def jordan_unipotent(lengths, p):
    """Block diagonal unipotent matrix with 1s on each block's superdiagonal."""
    n = sum(lengths)
    m = np.eye(n, dtype=np.int64)
    at = 0
    for ell in lengths:
        for i in range(ell - 1):
            m[at + i, at + i + 1] = 1
        at += ell
    return m % p


def test_identity_rank():
    assert ffla.rank(np.eye(3, dtype=int), 5) == 3


def test_scalar_helpers():
    assert ffla.inv_mod(3, 5) == 2
    assert ffla.inv_mod(2, 7) == 4
    with pytest.raises(ZeroDivisionError):
        ffla.inv_mod(0, 5)
    with pytest.raises(ValueError):
        ffla.check_modulus(9)
    with pytest.raises(ValueError):
        ffla.check_modulus(2)
    assert ffla.check_modulus(5) == 5


def test_inverse_round_trip():
    p = 5
    for seed in range(5):
        a = random_invertible(6, p, seed)
        inv = ffla.inverse(a, p)
        assert np.array_equal(ffla.mat_mul(a, inv, p), np.eye(6, dtype=np.int64))


def test_solve_particular_and_inconsistent():
    p = 5
    a = np.array([[1, 2], [2, 4]])  # rank 1
    b = np.array([1, 2])
    x = ffla.solve(a, b, p)
    assert np.array_equal((a @ x) % p, b % p)
    with pytest.raises(ValueError):
        ffla.solve(a, np.array([1, 0]), p)


def test_solve_matrix_rhs():
    p = 7
    a = random_invertible(5, p, seed=3)
    b = rng(4).integers(0, p, size=(5, 3))
    x = ffla.solve(a, b, p)
    assert np.array_equal((a @ x) % p, b % p)


@settings(max_examples=60, deadline=None)
@given(
    p=st.sampled_from([3, 5, 7]),
    seed=st.integers(0, 10_000),
    nrows=st.integers(1, 8),
    ncols=st.integers(1, 8),
)
def test_rank_nullity(p, seed, nrows, ncols):
    a = rng(seed).integers(0, p, size=(nrows, ncols))
    k = ffla.kernel_basis(a, p)
    assert ffla.rank(a, p) + len(k) == ncols
    if len(k):
        assert not ((a @ k.T) % p).any()
        assert ffla.rank(k, p) == len(k)


def test_gemm_matches_int_path():
    p = 5
    g = rng(11)
    a = g.integers(0, p, size=(40, 30))
    b = g.integers(0, p, size=(30, 20))
    assert np.array_equal(ffla.gemm(a, b, p), ffla.mat_mul(a, b, p))
    # batched
    a3 = g.integers(0, p, size=(4, 9, 9))
    b3 = g.integers(0, p, size=(4, 9, 9))
    want = np.stack([ffla.mat_mul(x, y, p) for x, y in zip(a3, b3)])
    assert np.array_equal(ffla.gemm(a3, b3, p), want)


def test_unipotent_chains_on_plain_jordan_matrix():
    p = 5
    sigma = jordan_unipotent([4, 4], p)
    cb = ffla.unipotent_chains(sigma, p)
    assert cb.census == {4: 2}
    assert np.array_equal(ffla.mat_pow(sigma, p, p), np.eye(8, dtype=np.int64))


@settings(max_examples=25, deadline=None)
@given(p=st.sampled_from([3, 5]), seed=st.integers(0, 5000))
def test_jordan_type_is_similarity_invariant(p, seed):
    lengths_pool = [[1, 1, 2], [3, 1], [2, 2, 1], [p, 1], [p - 1, 2]]
    lengths = lengths_pool[seed % len(lengths_pool)]
    sigma = jordan_unipotent(lengths, p)
    n = sigma.shape[0]
    t = random_invertible(n, p, seed=seed)
    conj = ffla.mat_mul(ffla.mat_mul(t, sigma, p), ffla.inverse(t, p), p)
    cb = ffla.unipotent_chains(conj, p)
    want = {}
    for ell in lengths:
        want[ell] = want.get(ell, 0) + 1
    assert cb.census == want


def test_chain_structure_and_reassembly():
    p = 5
    sigma = jordan_unipotent([4, 4, 1], p)
    t = random_invertible(9, p, seed=42)
    conj = ffla.mat_mul(ffla.mat_mul(t, sigma, p), ffla.inverse(t, p), p)
    cb = ffla.unipotent_chains(conj, p)
    delta = (conj - np.eye(9, dtype=np.int64)) % p
    for chain in cb.chains:
        for j in range(len(chain) - 1):
            assert np.array_equal((delta @ chain[j]) % p, chain[j + 1])
        assert not ((delta @ chain[-1]) % p).any()
    # stacked chains form a basis
    ffla.inverse(cb.basis, p)


def test_chains_deterministic():
    p = 5
    sigma = jordan_unipotent([4, 2, 1], p)
    t = random_invertible(7, p, seed=7)
    conj = ffla.mat_mul(ffla.mat_mul(t, sigma, p), ffla.inverse(t, p), p)
    one = ffla.unipotent_chains(conj, p)
    two = ffla.unipotent_chains(conj, p)
    assert np.array_equal(one.basis, two.basis)


def test_not_order_p():
    p = 5
    with pytest.raises(ffla.NotOrderPError):
        ffla.unipotent_chains(2 * np.eye(3, dtype=int), p)


def test_kernel_basis_tall_matches_plain_kernel():
    p = 5
    g = rng(3)
    # rank-deficient tall matrix: random (200, 12) times random (12, 20)
    a = (g.integers(0, p, size=(200, 12)) @ g.integers(0, p, size=(12, 20))) % p
    tall = ffla.kernel_basis_tall(a, p)
    plain = ffla.kernel_basis(a, p)
    assert np.array_equal(tall, plain)
    assert not ffla.gemm(a, tall.T, p).any()


def test_row_space_add_block_matches_add_many():
    p = 7
    g = rng(11)
    vecs = g.integers(0, p, size=(40, 9))
    one = ffla.RowSpace(9, p)
    one.add_many(vecs)
    two = ffla.RowSpace(9, p)
    added = two.add_block(vecs)
    assert added == one.rank == two.rank == ffla.rank(vecs, p)
    # both hold a basis of the same row space
    for v in one.rows:
        assert two.contains(v)
    for v in two.rows:
        assert one.contains(v)
