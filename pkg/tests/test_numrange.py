import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wcolab import numrange as nr
from wcolab.numrange import (RegionKind, RegionSpec, contains_point, contains_region,
                             ellipse_of_2x2, is_convex_position, numerical_range_boundary,
                             rank_one_range, region_mismatch, support_function, support_gap,
                             support_values)
from wcolab.operators import wco_matrix
from wcolab.series import TruncatedSeries
from wcolab.spaces import kernel_series
from strategies import complex_arrays, square_matrices

NIL = np.array([[0, 0], [1, 0]], dtype=complex)


def test_support_function_examples():
    s, p = support_function(np.diag([0, 1]), 0.0)
    assert s == pytest.approx(1) and p == pytest.approx(1)
    c = 0.3 - 1.1j
    for th in np.linspace(0, 6, 7):
        assert support_function(np.array([[0, 0], [c, 0]]), th)[0] == pytest.approx(abs(c) / 2)
    H = np.array([[2, 1j], [-1j, -1]])
    assert support_function(H, 0.0)[0] == pytest.approx(np.linalg.eigvalsh(H)[-1])


def test_rejects_non_square():
    with pytest.raises(ValueError):
        support_function(np.zeros((2, 3)), 0.0)
    with pytest.raises(ValueError):
        numerical_range_boundary(np.eye(2), 4)


def test_boundary_examples():
    b = numerical_range_boundary(np.diag([0, 1]), 360)
    assert np.all(np.abs(b.points.imag) <= 1e-12)
    assert np.all((b.points.real >= -1e-12) & (b.points.real <= 1 + 1e-12))
    b = numerical_range_boundary(NIL, 360)
    assert np.max(np.abs(np.abs(b.points) - 0.5)) <= 1e-9
    assert np.all(np.diff(b.thetas) > 0)


def test_contains_point_examples():
    seg = np.diag([0, 1]).astype(complex)
    hit = contains_point(seg, 0.5)
    assert hit and abs(hit.margin) <= 1e-12
    hit = contains_point(NIL, 0)
    assert hit and hit.margin == pytest.approx(0.5)
    assert not contains_point(seg, 2)
    with pytest.raises(ValueError):
        contains_point(seg, 0, tol=-1)


def test_contains_region_examples():
    ok = contains_region(NIL, RegionSpec.disk(0, 0.5), tol=1e-12)
    assert ok and abs(ok.margin) <= 1e-12
    assert not contains_region(NIL, RegionSpec.disk(0, 0.6), tol=1e-8)
    point = contains_region(NIL, RegionSpec.disk(0.1, 0))
    assert point.margin == pytest.approx(contains_point(NIL, 0.1).margin)


@given(square_matrices(2, 7))
def test_boundary_points_attain_support(A):
    b = numerical_range_boundary(A, 90)
    reach = (np.exp(1j * b.thetas) * b.points).real
    assert np.all(reach >= b.support - 1e-9)
    assert is_convex_position(b)


@given(square_matrices(2, 7))
def test_spectrum_is_contained(A):
    b = numerical_range_boundary(A, 180)
    for lam in np.linalg.eigvals(A):
        assert contains_point(b, lam, 1e-8)


@given(square_matrices(3, 7), st.floats(0, 2 * math.pi))
def test_diagonal_unitary_invariance(A, seed_angle):
    n = A.shape[0]
    D = np.diag(np.exp(1j * seed_angle * np.arange(1, n + 1) ** 2))
    th = np.linspace(0, 2 * np.pi, 48, endpoint=False)
    s1 = support_values(A, th)[0]
    s2 = support_values(D.conj().T @ A @ D, th)[0]
    assert np.max(np.abs(s1 - s2)) <= 1e-12 * max(1.0, np.linalg.norm(A))


@given(square_matrices(2, 5), square_matrices(2, 5))
def test_direct_sum_support_is_max(A, B):
    n, m = A.shape[0], B.shape[0]
    S = np.zeros((n + m, n + m), dtype=complex)
    S[:n, :n] = A
    S[n:, n:] = B
    th = np.linspace(0, 2 * np.pi, 60, endpoint=False)
    want = np.maximum(support_values(A, th)[0], support_values(B, th)[0])
    assert np.max(np.abs(support_values(S, th)[0] - want)) <= 1e-10


@given(complex_arrays(max_size=5), complex_arrays(min_size=2, max_size=4))
def test_truncation_monotone(psi_c, phi_c):
    c = np.array(phi_c)
    c[0] = 0
    c = 0.9 * c / max(np.sum(np.abs(c)), 1e-300)
    psi, phi = TruncatedSeries(psi_c), TruncatedSeries(c)
    th = np.linspace(0, 2 * np.pi, 72, endpoint=False)
    prev = None
    for N in (4, 9, 20):
        s = support_values(wco_matrix(psi, phi, N).entries, th)[0]
        if prev is not None:
            assert np.all(prev <= s + 1e-12)
        prev = s


def test_normal_matrix_range_is_hull_of_eigenvalues(rng):
    lam = rng.normal(size=6) + 1j * rng.normal(size=6)
    Q, _ = np.linalg.qr(rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6)))
    A = Q @ np.diag(lam) @ Q.conj().T
    th = np.linspace(0, 2 * np.pi, 100, endpoint=False)
    want = np.max((np.exp(1j * th)[:, None] * lam[None, :]).real, axis=1)
    assert np.allclose(support_values(A, th)[0], want, atol=1e-12)


def test_low_rank_path_agrees_with_dense(rng, monkeypatch):
    n = 64
    P = rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))
    Q = rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))
    A = P @ Q.conj().T
    th = np.linspace(0, 2 * np.pi, 40, endpoint=False)
    fast = support_values(A, th)[0]
    monkeypatch.setattr(nr, '_low_rank_factors', lambda M: None)
    slow = support_values(A, th)[0]
    assert np.allclose(fast, slow, atol=1e-10)


def test_large_matrix_path(rng):
    n = 150
    A = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / n
    th = np.array([0.0, 1.0, 2.5])
    s, _ = support_values(A, th)
    for t, v in zip(th, s):
        H = (np.exp(1j * t) * A + np.exp(-1j * t) * A.conj().T) / 2
        assert v == pytest.approx(np.linalg.eigvalsh(H)[-1], abs=1e-12)


# -- regions -------------------------------------------------------------------------

def test_region_constructors_degenerate():
    d = RegionSpec.ellipse(1, 1, 2.0, 2.0)
    assert d.kind is RegionKind.DISK and d.radius == 1.0 and d.center == 1
    s = RegionSpec.ellipse(0, 1, 1.0, 0.0)
    assert s.kind is RegionKind.SEGMENT
    with pytest.raises(ValueError):
        RegionSpec.disk(0, -1)


@given(st.tuples(st.floats(-2, 2), st.floats(-2, 2)), st.floats(0.1, 3), st.floats(0, 2 * math.pi))
def test_ellipse_support_matches_boundary(f, minor, ang):
    f1 = complex(*f)
    f2 = f1 + 0.7 * np.exp(1j * ang)
    major = math.sqrt(minor ** 2 + abs(f1 - f2) ** 2)
    E = RegionSpec.ellipse(f1, f2, major, minor)
    pts = E.boundary_points(2000)
    assert np.max(np.abs(E.excess(pts))) <= 1e-12
    th = np.linspace(0, 2 * np.pi, 50, endpoint=False)
    sampled = np.max((np.exp(1j * th)[:, None] * pts[None, :]).real, axis=1)
    assert np.all(sampled <= E.support(th) + 1e-12)
    assert np.allclose(sampled, E.support(th), atol=1e-5)


def test_to_dict():
    assert RegionSpec.disk(1j, 2).to_dict() == {'kind': 'Disk', 'center': [0.0, 1.0], 'radius': 2.0}
    e = RegionSpec.ellipse(0, 1, 2, math.sqrt(3)).to_dict()
    assert e['kind'] == 'Ellipse' and e['foci'] == [[0.0, 0.0], [1.0, 0.0]]


@given(square_matrices(2, 2))
def test_elliptical_range(A):
    E = ellipse_of_2x2(A)
    b = numerical_range_boundary(A, 180)
    assert np.max(np.abs(E.excess(b.points))) <= 1e-8
    if E.kind is RegionKind.ELLIPSE:
        assert E.major ** 2 == pytest.approx(E.minor ** 2 + abs(E.a - E.b) ** 2, rel=1e-12)


def test_ellipse_of_2x2_cases():
    assert ellipse_of_2x2(NIL).kind is RegionKind.DISK
    assert ellipse_of_2x2(NIL).radius == pytest.approx(0.5)
    seg = ellipse_of_2x2(np.diag([1, 2j]))
    assert seg.kind is RegionKind.SEGMENT
    T = np.array([[1, 0], [math.sqrt(2), 1j]])
    E = ellipse_of_2x2(T)
    assert E.minor == pytest.approx(math.sqrt(2), rel=1e-14)
    assert region_mismatch(E, RegionSpec.ellipse(1, 1j, math.sqrt(4), math.sqrt(2))) <= 1e-14
    with pytest.raises(ValueError):
        ellipse_of_2x2(np.eye(3))


# -- rank one ------------------------------------------------------------------------

def test_rank_one_trichotomy():
    k = kernel_series(0.5, 512)
    seg = rank_one_range(k, 0.5, 512)
    assert seg.kind is RegionKind.SEGMENT
    assert abs(seg.b) == pytest.approx(4 * math.log(4 / 3), rel=1e-12)
    disk = rank_one_range(TruncatedSeries([-0.5, 1]), 0.5, 512)
    assert disk.kind is RegionKind.DISK
    assert disk.radius == pytest.approx(0.5 * 1.5 * math.sqrt(4 * math.log(4 / 3)), rel=1e-12)
    ell = rank_one_range(TruncatedSeries([1, 1]), 0.5, 512)
    assert ell.kind is RegionKind.ELLIPSE
    assert region_mismatch(ell, RegionSpec.ellipse(1.5, 0, ell.major, ell.minor)) <= 1e-15
    with pytest.raises(ValueError):
        rank_one_range(TruncatedSeries([0]), 0.5, 8)


def test_support_gap_of_identical_regions():
    d = RegionSpec.disk(0.3, 1)
    assert support_gap(d, d) == 0
    assert support_gap(NIL, RegionSpec.disk(0, 0.5)) <= 1e-12


def test_nilpotent_perturbation_example():
    E = ellipse_of_2x2(np.array([[1, 0], [1, -1]]))
    assert E.kind is RegionKind.ELLIPSE
    assert E.minor == pytest.approx(1, rel=1e-14)
    assert region_mismatch(E, RegionSpec.ellipse(1, -1, math.sqrt(5), 1)) <= 1e-14


def test_rank_one_at_origin_is_a_segment():
    seg = rank_one_range(TruncatedSeries([1]), 0, 16)
    assert seg.kind is RegionKind.SEGMENT
    assert {seg.a, seg.b} == {0, 1}
