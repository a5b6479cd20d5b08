import mpmath
import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from sqrt_atlas.errors import NonConvergence
from sqrt_atlas.numkit import (
    DEFAULT_TOL, J2, Tolerances, as_matrix, cluster_points, direct_sum, eig, eigvals, expm,
    hessenberg, null_basis, random_orthogonal, random_unitary, rho, rho_inverse, rotation_block,
    scale, svd_rank,
)


def _sorted(z):
    return np.sort_complex(np.asarray(z, dtype=complex).round(12))


def test_tolerances_scale_with_norm():
    tol = Tolerances.from_resid(1e-6)
    assert tol.cluster == tol.resid == 1e-6
    A = 100 * np.eye(4)
    assert tol.resid_abs(A) == pytest.approx(1e-6 * 200)
    assert DEFAULT_TOL.resid_abs(np.zeros((2, 2)) + 1e-3) == DEFAULT_TOL.resid


def test_as_matrix_rejects_non_square():
    with pytest.raises(ValueError):
        as_matrix(np.ones((2, 3)))


def test_rotation_block_and_j2():
    np.testing.assert_allclose(rotation_block(np.pi / 2), J2, atol=1e-16)
    np.testing.assert_allclose(J2 @ J2, -np.eye(2))
    R = rotation_block(0.3)
    np.testing.assert_allclose(R @ R, rotation_block(0.6), atol=1e-15)


def test_direct_sum_skips_empty_blocks():
    D = direct_sum([np.eye(1), np.zeros((0, 0)), 2 * np.eye(2)])
    np.testing.assert_array_equal(D, np.diag([1.0, 2.0, 2.0]))
    assert direct_sum([]).shape == (0, 0)


def test_hessenberg_is_similar():
    rng = np.random.default_rng(0)
    A = rng.standard_normal((7, 7))
    H = hessenberg(A)
    assert np.allclose(np.tril(H, -2), 0)
    np.testing.assert_allclose(_sorted(np.linalg.eigvals(H)), _sorted(np.linalg.eigvals(A)), atol=1e-10)


@pytest.mark.parametrize("seed", range(40))
def test_eigvals_matches_lapack(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 10))
    A = rng.standard_normal((n, n))
    ours = _sorted(eigvals(A))
    ref = _sorted(np.linalg.eigvals(A))
    np.testing.assert_allclose(ours, ref, atol=1e-10 * max(1, np.linalg.norm(A)))


def test_eigvals_known_spectra():
    np.testing.assert_allclose(_sorted(eigvals(J2)), _sorted([1j, -1j]), atol=1e-15)
    np.testing.assert_allclose(np.sort(eigvals(np.diag([3.0, -1.0, 2.0])).real), [-1, 2, 3])
    # companion matrix of (x-1)(x-2)(x-3)
    C = np.array([[6.0, -11.0, 6.0], [1, 0, 0], [0, 1, 0]])
    np.testing.assert_allclose(np.sort(eigvals(C).real), [1, 2, 3], atol=1e-12)


def test_eigvals_nonconvergence_raises():
    rng = np.random.default_rng(1)
    with pytest.raises(NonConvergence):
        eigvals(rng.standard_normal((6, 6)), max_iter=0)


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, (5, 5), elements=st.floats(-10, 10, allow_nan=False, width=64)))
def test_eigvals_trace_and_det(A):
    lam = eigvals(A)
    assert abs(lam.sum() - np.trace(A)) <= 1e-9 * max(1, np.abs(A).sum())
    assert abs(np.prod(lam) - np.linalg.det(A)) <= 1e-8 * max(1, np.linalg.norm(A)) ** 5


def test_cluster_points_single_linkage():
    groups = cluster_points([0.0, 0.5, 1.0, 5.0], 0.6)
    assert sorted(map(sorted, groups)) == [[0, 1, 2], [3]]


def test_null_basis_and_eig():
    A = np.diag([2.0, 2.0, 5.0])
    N = null_basis(A - 2 * np.eye(3), 2)
    np.testing.assert_allclose((A - 2 * np.eye(3)) @ N, 0, atol=1e-14)
    rng = np.random.default_rng(3)
    B = rng.standard_normal((6, 6))
    for lam, v in eig(B):
        assert np.linalg.norm(B @ v - lam * v) <= 1e-10 * np.linalg.norm(B)


def test_svd_rank_reference():
    assert svd_rank(np.diag([1.0, 1e-12])) == 1
    assert svd_rank(1e-16 * np.eye(3)) == 3
    assert svd_rank(1e-16 * np.eye(3), ref=1.0) == 0
    assert svd_rank(np.zeros((0, 0))) == 0


@pytest.mark.parametrize("norm", [1e-3, 0.7, 3.0, 10.0, 40.0])
def test_expm_against_mpmath(norm):
    rng = np.random.default_rng(int(norm * 100))
    A = rng.standard_normal((5, 5))
    A *= norm / np.linalg.norm(A)
    ref = np.array(mpmath.expm(mpmath.matrix(A.tolist())).tolist(), dtype=float)
    err = np.linalg.norm(expm(A) - ref) / np.linalg.norm(ref)
    assert err <= 1e-12


def test_expm_against_scipy_and_identities():
    rng = np.random.default_rng(5)
    K = rng.standard_normal((4, 4))
    K = K - K.T
    Q = expm(K)
    np.testing.assert_allclose(Q.T @ Q, np.eye(4), atol=1e-13)
    np.testing.assert_allclose(Q, scipy.linalg.expm(K), atol=1e-13)
    np.testing.assert_allclose(expm(np.zeros((3, 3))), np.eye(3))
    np.testing.assert_allclose(expm(np.pi / 2 * J2), J2, atol=1e-15)


def test_rho_round_trip():
    rng = np.random.default_rng(7)
    Z = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    np.testing.assert_allclose(rho_inverse(rho(Z)), Z)
    np.testing.assert_allclose(rho(np.array([[1j]])), J2)


def test_random_orthogonal_and_unitary():
    Q = random_orthogonal(5, 0)
    np.testing.assert_allclose(Q.T @ Q, np.eye(5), atol=1e-14)
    U = random_unitary(4, np.random.default_rng(0))
    np.testing.assert_allclose(U.conj().T @ U, np.eye(4), atol=1e-14)
    np.testing.assert_array_equal(random_orthogonal(3, 11), random_orthogonal(3, 11))


def test_random_orthogonal_is_haar_on_average():
    # E[Q] = 0 and E[Q_ij^2] = 1/n for Haar measure
    Qs = np.array([random_orthogonal(3, s) for s in range(4000)])
    assert np.abs(Qs.mean(axis=0)).max() < 0.05
    assert np.abs((Qs ** 2).mean(axis=0) - 1 / 3).max() < 0.03


def test_scale():
    assert scale(np.zeros((2, 2))) == 1.0
    assert scale(3 * np.eye(4)) == pytest.approx(6.0)
