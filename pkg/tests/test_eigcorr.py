"""Correlation matrices and eigenvalue tracks."""

import numpy as np
import pytest

from peaksync import (
    MultiChannelRecord,
    ValidationError,
    corr_matrix,
    eigen_track,
    jacobi_eigenvalues,
)


def pearson_two_pass(x: np.ndarray, y: np.ndarray) -> float:
    """Independent textbook two-pass Pearson formula."""
    xm = x - x.mean()
    ym = y - y.mean()
    return float(np.sum(xm * ym) / np.sqrt(np.sum(xm * xm) * np.sum(ym * ym)))


def cubic_eigenvalues(m: np.ndarray) -> np.ndarray:
    """Roots of the characteristic cubic of a symmetric 3x3, descending.

    Trigonometric solution of det(M - lambda I) = 0; independent of any
    iterative eigensolver.
    """
    p1 = m[0, 1] ** 2 + m[0, 2] ** 2 + m[1, 2] ** 2
    q = np.trace(m) / 3.0
    p2 = sum((m[i, i] - q) ** 2 for i in range(3)) + 2.0 * p1
    p = np.sqrt(p2 / 6.0)
    if p == 0.0:
        return np.full(3, q)
    b = (m - q * np.eye(3)) / p
    r = np.linalg.det(b) / 2.0
    r = min(1.0, max(-1.0, r))
    phi = np.arccos(r) / 3.0
    eig1 = q + 2.0 * p * np.cos(phi)
    eig3 = q + 2.0 * p * np.cos(phi + 2.0 * np.pi / 3.0)
    eig2 = 3.0 * q - eig1 - eig3
    return np.sort([eig1, eig2, eig3])[::-1]


def test_identical_rows():
    rng = np.random.default_rng(0)
    row = rng.standard_normal(64)
    m = corr_matrix(np.stack([row, row]))
    np.testing.assert_allclose(m, [[1.0, 1.0], [1.0, 1.0]], atol=1e-14)


def test_negated_row():
    rng = np.random.default_rng(1)
    row = rng.standard_normal(64)
    m = corr_matrix(np.stack([row, -row]))
    np.testing.assert_allclose(m, [[1.0, -1.0], [-1.0, 1.0]], atol=1e-14)


def test_matches_two_pass_pearson():
    rng = np.random.default_rng(2)
    window = rng.standard_normal((3, 256))
    m = corr_matrix(window)
    for i in range(3):
        for j in range(3):
            expected = 1.0 if i == j else pearson_two_pass(window[i], window[j])
            assert m[i, j] == pytest.approx(expected, abs=1e-12)
    assert np.array_equal(m, m.T)


def test_constant_row_convention():
    rng = np.random.default_rng(3)
    window = np.vstack([np.full(32, 2.5), rng.standard_normal((2, 32))])
    m = corr_matrix(window)
    assert m[0, 0] == 1.0
    assert np.all(m[0, 1:] == 0.0)
    assert np.all(m[1:, 0] == 0.0)


def test_corr_matrix_rejects_short_window():
    with pytest.raises(ValidationError):
        corr_matrix(np.zeros((2, 1)))


def test_jacobi_vs_analytic_2x2():
    for rho in (-0.99, -0.5, 0.0, 0.3, 0.999):
        m = np.array([[1.0, rho], [rho, 1.0]])
        eig = jacobi_eigenvalues(m)
        np.testing.assert_allclose(eig, [1.0 + abs(rho), 1.0 - abs(rho)], atol=1e-12)


def test_jacobi_vs_cubic_roots():
    rng = np.random.default_rng(4)
    for _ in range(50):
        window = rng.standard_normal((3, 128))
        m = corr_matrix(window)
        got = jacobi_eigenvalues(m)
        expected = cubic_eigenvalues(m)
        np.testing.assert_allclose(got, expected, atol=1e-8)


def test_jacobi_vs_numpy_on_larger_matrices():
    rng = np.random.default_rng(5)
    for r in (4, 5, 6):
        window = rng.standard_normal((r, 200))
        m = corr_matrix(window)
        got = jacobi_eigenvalues(m)
        expected = np.sort(np.linalg.eigvalsh(m))[::-1]
        np.testing.assert_allclose(got, expected, atol=1e-10)


def test_track_identical_channels_rank_one():
    rng = np.random.default_rng(6)
    row = rng.standard_normal(1024)
    record = MultiChannelRecord(
        ("a", "b", "c"), np.stack([row, row, row]), 256.0
    )
    track = eigen_track(record, ["a", "b", "c"], m=256, hop=128)
    for eig in track.eigenvalues:
        assert eig[0] == pytest.approx(3.0, abs=1e-12)
        np.testing.assert_allclose(eig[1:], 0.0, atol=1e-12)


def test_track_sum_equals_trace_and_psd():
    rng = np.random.default_rng(7)
    record = MultiChannelRecord(
        tuple("abcd"), rng.standard_normal((4, 2048)), 256.0
    )
    track = eigen_track(record, list("abcd"), m=512, hop=256)
    for eig in track.eigenvalues:
        assert np.sum(eig) == pytest.approx(4.0, abs=1e-9)
        assert np.all(np.diff(eig) <= 1e-12)  # descending
        assert np.all(eig >= -1e-9)
        assert 1.0 - 1e-9 <= eig[0] <= 4.0 + 1e-9


def test_track_geometry_and_permutation_invariance():
    rng = np.random.default_rng(8)
    record = MultiChannelRecord(
        ("a", "b", "c"), rng.standard_normal((3, 1000)), 250.0
    )
    track = eigen_track(record, ["a", "b", "c"], m=200, hop=100)
    expected_centers = [s + 100 for s in range(0, 801, 100)]
    assert track.window_centers.tolist() == expected_centers
    permuted = eigen_track(record, ["c", "a", "b"], m=200, hop=100)
    # identical spectra; rotation order differs, so compare at solver accuracy
    np.testing.assert_allclose(track.eigenvalues, permuted.eigenvalues, atol=1e-11)


def test_track_validation():
    rng = np.random.default_rng(9)
    record = MultiChannelRecord(("a", "b"), rng.standard_normal((2, 100)), 10.0)
    with pytest.raises(ValidationError, match="exceeds"):
        eigen_track(record, ["a", "b"], m=101, hop=10)
    with pytest.raises(ValidationError, match="at least 2"):
        eigen_track(record, ["a"], m=10, hop=10)
    with pytest.raises(ValidationError, match="hop"):
        eigen_track(record, ["a", "b"], m=10, hop=0)
