import numpy as np
import pytest

from generators import random_semisimple
from sqrt_atlas.branches import (
    BranchIndex, branch_seed, build_rja, count_if_finite, dimension_of, enumerate_branches,
    expected_root_spectrum, finite_roots, is_finite, is_generalized_principal,
    negative_component_label, principal_branch_index, psr_component_count, representative,
    root_residual, sample_branch, sample_centralizer, verify_fixed_point,
)
from sqrt_atlas.errors import CountUndefined, IndexOutOfRange
from sqrt_atlas.numkit import J2, rotation_block
from sqrt_atlas.oracles import denman_beavers
from sqrt_atlas.spectral import SpectralProfile, classify_spectrum, rjs_decompose


def _spectrum(Y):
    return np.sort_complex(np.linalg.eigvals(Y).round(8))


def test_rotation_shift_by_pi():
    np.testing.assert_allclose(rotation_block(1.3 - np.pi), -rotation_block(1.3), atol=1e-15)


def test_build_rja_examples():
    np.testing.assert_array_equal(build_rja(classify_spectrum(-np.eye(2)), BranchIndex()), J2)
    p4 = classify_spectrum(np.array([[4.0]]))
    assert build_rja(p4, BranchIndex((1,))) == pytest.approx(2.0)
    assert build_rja(p4, BranchIndex((0,))) == pytest.approx(-2.0)
    pc = classify_spectrum(4 * rotation_block(2 * np.pi / 3))
    np.testing.assert_allclose(build_rja(pc, BranchIndex((), ((1,),))), 2 * rotation_block(np.pi / 3), atol=1e-14)
    np.testing.assert_allclose(build_rja(pc, BranchIndex((), ((0,),))), -2 * rotation_block(np.pi / 3), atol=1e-14)


@pytest.mark.parametrize("seed", range(20))
def test_rja_squares_to_rjs(seed):
    _, prof = random_semisimple(seed)
    for idx in enumerate_branches(prof):
        R = build_rja(prof, idx)
        np.testing.assert_allclose(R @ R, prof.rjs_matrix(), atol=1e-13)


def test_enumerate_counts_and_order():
    assert len(enumerate_branches(classify_spectrum(np.diag([1.0, 4.0])))) == 4
    assert [i.u for i in enumerate_branches(classify_spectrum(np.eye(2)))] == [(2,), (1,), (0,)]
    assert enumerate_branches(classify_spectrum(-np.eye(2))) == [BranchIndex()]


def test_index_validation():
    prof = classify_spectrum(np.diag([1.0, 4.0]))
    with pytest.raises(IndexOutOfRange):
        BranchIndex((2, 0)).validate(prof)
    with pytest.raises(IndexOutOfRange):
        BranchIndex((1,)).validate(prof)
    idx = BranchIndex((1, 0))
    assert BranchIndex.from_dict(idx.to_dict()) == idx


def test_representative_examples():
    dec = rjs_decompose(np.diag([1.0, 4.0]))
    np.testing.assert_allclose(representative(dec, BranchIndex((1, 1))).representative, np.diag([1.0, 2.0]))
    b = representative(rjs_decompose(-np.eye(2)), BranchIndex())
    np.testing.assert_array_equal(b.representative, J2)
    assert b.residual == 0.0
    rng = np.random.default_rng(5)
    P = rng.standard_normal((2, 2))
    M = P @ np.diag([4.0, 9.0]) @ np.linalg.inv(P)
    Y = representative(rjs_decompose(M), BranchIndex((1, 0))).representative
    assert root_residual(M, Y) <= 1e-8 * np.linalg.norm(M)
    np.testing.assert_allclose(_spectrum(Y), [-3, 2], atol=1e-8)


@pytest.mark.parametrize("seed", range(25))
def test_samples_have_branch_spectrum(seed):
    M, _ = random_semisimple(200 + seed)
    dec = rjs_decompose(M)
    for idx in enumerate_branches(dec.profile):
        Y = sample_branch(dec, idx, branch_seed(seed, idx))
        assert root_residual(M, Y) <= 1e-8 * max(1, np.linalg.norm(M))
        expected = np.sort_complex(np.array([v for v, k in expected_root_spectrum(dec.profile, idx)
                                              for _ in range(k)]).round(8))
        np.testing.assert_allclose(_spectrum(Y), expected, atol=1e-5)


def test_involutions_of_identity():
    dec = rjs_decompose(np.eye(2))
    Ys = [sample_branch(dec, BranchIndex((1,)), s) for s in range(1, 11)]
    for Y in Ys:
        np.testing.assert_allclose(Y @ Y, np.eye(2), atol=1e-10)
        assert abs(np.trace(Y)) < 1e-10
    assert len({Y.round(6).tobytes() for Y in Ys}) == 10


def test_sample_is_deterministic():
    M, _ = random_semisimple(3)
    dec = rjs_decompose(M)
    idx = enumerate_branches(dec.profile)[-1]
    np.testing.assert_array_equal(sample_branch(dec, idx, 42), sample_branch(dec, idx, 42))


def test_dimension_examples():
    assert dimension_of(classify_spectrum(np.eye(2)), BranchIndex((1,))) == 2
    assert dimension_of(classify_spectrum(-np.eye(2)), BranchIndex()) == 2
    p = classify_spectrum(np.diag([1.0, 4.0]))
    assert all(dimension_of(p, i) == 0 for i in enumerate_branches(p))


def test_dimension_complex_term():
    # rho(GL_2(C)) acting on a mixed mu=1 of m=2 branch: 2 * 2 * mu (m - mu) = 4
    prof = SpectralProfile((), ((0.8, ((1.0, 2),)),))
    assert dimension_of(prof, BranchIndex((), ((1,),))) == 4
    assert dimension_of(prof, BranchIndex((), ((2,),))) == 0


def test_finite_counts():
    p = classify_spectrum(np.diag([1.0, 4.0]))
    assert is_finite(p) and count_if_finite(p) == 4
    p = classify_spectrum(2 * rotation_block(np.pi / 3))
    assert is_finite(p) and count_if_finite(p) == 2
    p = classify_spectrum(np.eye(2))
    assert not is_finite(p)
    with pytest.raises(CountUndefined):
        count_if_finite(p)


def test_finite_roots_are_distinct_roots():
    M = np.diag([1.0, 4.0, 9.0])
    roots = finite_roots(rjs_decompose(M))
    assert len(roots) == 8
    assert len({np.round(Y, 8).tobytes() for Y in roots}) == 8


def test_principal_examples():
    dec = rjs_decompose(np.diag([4.0, 9.0]))
    idx = principal_branch_index(dec.profile)
    Y = representative(dec, idx).representative
    np.testing.assert_allclose(Y, np.diag([2.0, 3.0]))
    assert is_generalized_principal(dec.M, Y)
    others = [representative(dec, i).representative for i in enumerate_branches(dec.profile) if i != idx]
    assert not any(is_generalized_principal(dec.M, Z) for Z in others)
    M = 3 * rotation_block(0.9)
    dec = rjs_decompose(M)
    Y = representative(dec, principal_branch_index(dec.profile)).representative
    np.testing.assert_allclose(Y, np.sqrt(3) * rotation_block(0.45), atol=1e-14)
    assert psr_component_count(classify_spectrum(-np.eye(2))) == 2


@pytest.mark.parametrize("seed", range(10))
def test_principal_matches_iteration(seed):
    M, _ = random_semisimple(500 + seed, negative=False)
    dec = rjs_decompose(M)
    Y = representative(dec, principal_branch_index(dec.profile)).representative
    ref = denman_beavers(M)
    assert np.linalg.norm(Y - ref) <= 1e-8 * max(1, np.linalg.norm(ref))


def test_negative_components_labelled():
    dec = rjs_decompose(-np.eye(4))
    labels = set()
    for comp in (1, -1):
        for s in range(5):
            Y = sample_branch(dec, BranchIndex(), s, component=(comp,))
            labels.add((comp, negative_component_label(dec, Y)))
    assert labels == {(1, (1,)), (-1, (-1,))}
    X = sample_centralizer(dec.profile, 0, component=(-1,))
    assert np.linalg.det(X) < 0


def test_fixed_point_examples():
    assert verify_fixed_point(np.array([[4.0]]), np.array([[2.0]]))
    assert verify_fixed_point(-np.eye(2), J2)
    assert not verify_fixed_point(np.eye(2), np.array([[1.0, 1.0], [0.0, 1.0]]))
