import numpy as np
import pytest

from vss import ffla, repcp


@pytest.mark.parametrize("p", [3, 5, 7])
def test_standard_indecomposable_shape(p):
    for ell in range(1, p + 1):
        sp = repcp.standard_indecomposable(ell, p)
        assert sp.decompose().census == {ell: 1}
        # delta(v_i) = v_{i+1}
        want = repcp.shift_matrix(ell)
        assert np.array_equal(sp.delta, want % p)


def test_indecomposable_bounds():
    with pytest.raises(ValueError):
        repcp.standard_indecomposable(6, 5)
    with pytest.raises(ValueError):
        repcp.standard_indecomposable(0, 5)


def test_w_p3_is_bare_antidiagonal():
    w = repcp.build_w(3)
    want = np.zeros((2, 2), dtype=np.int64)
    want[1, 0] = 1
    want[0, 1] = 2  # -1 mod 3
    assert np.array_equal(w, want)


def test_w_p5_leading_coefficients():
    w = repcp.build_w(5)
    assert w[3, 0] == 1
    assert w[0, 3] == 4  # -1 mod 5
    # leading part is the antidiagonal, corrections live at i + j >= p - 1
    for i in range(4):
        for j in range(4):
            if i + j < 3:
                assert w[i, j] == 0
            elif i + j == 3:
                assert w[i, j] == (1 if i % 2 == 1 else 4) or w[i, j] == (
                    1 if j % 2 == 0 else 4
                )
    # antidiagonal signs: coefficient of v_{3-i} (x) v_i is (-1)^i
    for i in range(4):
        assert w[3 - i, i] == (1 if i % 2 == 0 else 4)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_w_is_invariant(p):
    m = p - 1
    sigma = repcp.standard_indecomposable(m, p).sigma
    big = np.kron(sigma, sigma) % p
    w = repcp.build_w(p).reshape(-1)
    assert np.array_equal((big @ w) % p, w)


def test_w_invariance_explicit_16x16_oracle():
    # independent oracle at p = 5: assemble sigma (x) sigma entry by entry
    p = 5
    sigma = repcp.standard_indecomposable(4, p).sigma
    big = np.zeros((16, 16), dtype=np.int64)
    for i in range(4):
        for j in range(4):
            for k in range(4):
                for l in range(4):
                    big[i * 4 + j, k * 4 + l] = sigma[i, k] * sigma[j, l] % p
    w = repcp.build_w(p).reshape(-1)
    assert np.array_equal((big @ w) % p, w)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_w_correction_terms_skew(p):
    w = repcp.build_w(p)
    m = p - 1
    for i in range(m):
        for j in range(m):
            if i + j >= p - 1:
                assert (w[i, j] + w[j, i]) % p == 0


@pytest.mark.parametrize("p", [3, 5, 7])
def test_lambda_properties(p):
    lam = repcp.build_lambda(p)
    m = p - 1
    assert lam[0, m - 1] == 1
    # annihilates im(delta): recheck directly
    sigma = repcp.standard_indecomposable(m, p).sigma
    dmat = (np.kron(sigma, sigma) - np.eye(m * m, dtype=np.int64)) % p
    assert not ((lam.reshape(-1) @ dmat) % p).any()
    # recursion along the antidiagonal
    for i in range(m - 1):
        assert (lam[m - 2 - i, i + 1] + lam[m - 1 - i, i]) % p == 0
    # induced pairing on L_{p-1} is nondegenerate
    assert ffla.rank(lam, p) == m


def test_lambda_p5_values():
    lam = repcp.build_lambda(5)
    assert lam[0, 3] == 1
    assert lam[3, 0] == 4  # -1


@pytest.mark.parametrize("p", [3, 5, 7])
def test_lambda_of_w_is_one(p):
    pairing = repcp.canonical_pairing(p)
    assert pairing.lam_of(pairing.w) == 1


@pytest.mark.parametrize("p", [3, 5, 7])
def test_w_alpha_killed_by_derivation(p):
    m = p - 1
    d = repcp.shift_matrix(m)
    # d acts on the tensor square as d (x) 1 + 1 (x) d
    dd = (np.kron(d, np.eye(m, dtype=np.int64)) + np.kron(np.eye(m, dtype=np.int64), d)) % p
    w = repcp.build_w_alpha(p).reshape(-1)
    assert not ((dd @ w) % p).any()


def test_alpha_space_rejects_non_nilpotent():
    with pytest.raises(ValueError):
        repcp.AlphaPSpace(p=5, d=np.eye(3, dtype=int))


def test_bilinear_map_equivariance_flag():
    # polynomial multiplication span(x, 1) x span(x, 1) -> span(x^2, x, 1)
    # is equivariant for the substitution automorphism x |-> x + 1
    p = 5
    a = repcp.standard_indecomposable(2, p)  # basis (x, 1)
    sigma_c = np.array([[1, 0, 0], [2, 1, 0], [1, 1, 1]], dtype=np.int64)
    c = repcp.CpSpace(p=p, sigma=sigma_c)  # basis (x^2, x, 1)
    mu = np.zeros((2, 2, 3), dtype=np.int64)
    mu[0, 0, 0] = 1  # x * x = x^2
    mu[0, 1, 1] = 1  # x * 1 = x
    mu[1, 0, 1] = 1
    mu[1, 1, 2] = 1  # 1 * 1 = 1
    bm = repcp.CpBilinearMap(a=a, b=a, c=c, mu=mu)
    assert bm.is_equivariant()
    # perturbing x * x to x^2 + x breaks equivariance
    mu_bad = mu.copy()
    mu_bad[0, 0, 1] = 1
    assert not repcp.CpBilinearMap(a=a, b=a, c=c, mu=mu_bad).is_equivariant()
