import numpy as np
import pytest

from shellbend.diffgeo import point_geometry, surface_geometry
from shellbend.errors import MismatchedPoint, SingularDeformation
from shellbend.families import FAMILIES, cylinder_expr, plane_expr, random_surface_pair
from shellbend.harness import interior_grid
from shellbend.kinematics import polar_decompose, pullback_metric, u_frobenius_norm
from shellbend.surface_lang import SurfaceExpr
from shellbend.transforms import random_rotation, rigid_transform_surface, scale_surface


def sqrtm_2x2(m):
    """Closed-form principal square root of a 2x2 matrix with positive eigenvalues."""
    s = np.sqrt(np.linalg.det(m))
    t = np.sqrt(np.trace(m) + 2 * s)
    return (m + s * np.eye(2)) / t


def pair_states(pair, n=7):
    ref, dfm = pair
    x1, x2 = interior_grid(ref.domain, n, n)
    return polar_decompose(surface_geometry(ref, x1, x2), surface_geometry(dfm, x1, x2))


ALL_PAIRS = [(kind, seed) for kind in sorted(FAMILIES) for seed in range(3)]


def test_pullback_of_identity_is_reference_metric():
    ref, _ = random_surface_pair(0, "graph-polynomial")
    g = point_geometry(ref, (0.2, 0.1))
    np.testing.assert_array_equal(pullback_metric(g, g), g.metric)


def test_pullback_scales_quadratically():
    ref, _ = random_surface_pair(0, "sphere-chart")
    g = point_geometry(ref, (0.2, 0.1))
    h = point_geometry(scale_surface(ref, 2.0), (0.2, 0.1))
    np.testing.assert_allclose(pullback_metric(g, h), 4 * g.metric, rtol=1e-15)


def test_pullback_plane_to_cylinder_is_isometric():
    for xi in [(0.0, 0.0), (0.5, -0.3), (-0.8, 0.7)]:
        c = pullback_metric(point_geometry(plane_expr(), xi), point_geometry(cylinder_expr(2.0), xi))
        np.testing.assert_allclose(c, np.eye(2), atol=1e-15)


def test_mismatched_points():
    with pytest.raises(MismatchedPoint):
        pullback_metric(point_geometry(plane_expr(), (0.1, 0.1)), point_geometry(plane_expr(), (0.2, 0.1)))


@pytest.mark.parametrize("seed", range(5))
def test_rigid_motion_gives_identity_stretch(seed):
    ref, _ = random_surface_pair(seed, "graph-trigonometric")
    motion = random_rotation(seed)
    xi = (0.3, -0.2)
    g = point_geometry(ref, xi)
    st = polar_decompose(g, point_geometry(rigid_transform_surface(ref, motion), xi))
    np.testing.assert_allclose(st.u_mixed, np.eye(2), atol=1e-14)
    assert st.u_norm == pytest.approx(np.sqrt(2), rel=1e-14)
    np.testing.assert_allclose(st.r_cols, motion.rotation @ g.basis, atol=1e-14)


def test_uniform_scaling_of_deformed():
    ref, dfm = random_surface_pair(4, "graph-polynomial")
    xi = (-0.1, 0.6)
    g = point_geometry(ref, xi)
    base = polar_decompose(g, point_geometry(dfm, xi))
    scaled = polar_decompose(g, point_geometry(scale_surface(dfm, 3.0), xi))
    np.testing.assert_allclose(scaled.u_mixed, 3 * base.u_mixed, rtol=1e-14, atol=1e-15)
    np.testing.assert_allclose(scaled.r_cols, base.r_cols, atol=1e-14)
    np.testing.assert_allclose(scaled.c_cov, 9 * base.c_cov, rtol=1e-14)
    assert scaled.u_norm == pytest.approx(3 * base.u_norm, rel=1e-14)


@pytest.mark.parametrize("kind,seed", ALL_PAIRS)
def test_polar_factors_on_random_pairs(kind, seed):
    st = pair_states(random_surface_pair(seed, kind))
    n = st.u_mixed.shape[0]
    for i in range(n):
        u = st.u_mixed[i]
        c_mixed = st.c_mixed[i]
        scale = np.max(np.abs(c_mixed))
        np.testing.assert_allclose(u @ u, c_mixed, atol=1e-12 * scale)
        # independent square root
        np.testing.assert_allclose(u, sqrtm_2x2(c_mixed), atol=1e-12 * np.max(np.abs(u)))
        basis = st.deformed.basis[i]
        np.testing.assert_allclose(st.r_cols[i] @ u, basis, atol=1e-12 * np.max(np.abs(basis)))
        A = st.ref.metric[i]
        np.testing.assert_allclose(st.r_cols[i].T @ st.r_cols[i], A, atol=1e-12 * np.max(np.abs(A)))
        assert np.max(np.abs(st.r_cols[i].T @ st.deformed.normal[i])) <= 1e-12
        uc = st.u_cov[i]
        assert abs(uc[0, 1] - uc[1, 0]) <= 1e-12 * np.max(np.abs(uc))
        np.testing.assert_allclose(st.u_inv_mixed[i] @ u, np.eye(2), atol=1e-12)


@pytest.mark.parametrize("kind,seed", ALL_PAIRS)
def test_eigenvalues_are_squared_principal_stretches(kind, seed):
    st = pair_states(random_surface_pair(seed, kind))
    for i in range(st.u_mixed.shape[0]):
        # f expressed from a reference-orthonormal frame: F = e_a (L^-T)
        L = np.linalg.cholesky(st.ref.metric[i])
        F = st.deformed.basis[i] @ np.linalg.inv(L).T
        stretches = np.linalg.svd(F, compute_uv=False)
        np.testing.assert_allclose(np.sort(st.stretch_sq[i]), np.sort(stretches ** 2), rtol=1e-13)
        trace = np.einsum("ab,ab->", st.c_cov[i], np.linalg.inv(st.ref.metric[i]))
        assert st.u_norm[i] ** 2 == pytest.approx(trace, rel=1e-13)
        assert u_frobenius_norm(st)[i] ** 2 == pytest.approx(trace, rel=1e-13)


@pytest.mark.parametrize("seed", range(3))
def test_kinematic_objectivity(seed):
    pair = random_surface_pair(seed, "sphere-chart")
    motion = random_rotation(100 + seed)
    base = pair_states(pair)
    moved = pair_states((pair[0], rigid_transform_surface(pair[1], motion)))
    np.testing.assert_allclose(moved.c_cov, base.c_cov, rtol=1e-12, atol=1e-14)
    np.testing.assert_allclose(moved.u_mixed, base.u_mixed, rtol=1e-12, atol=1e-14)
    np.testing.assert_allclose(moved.u_norm, base.u_norm, rtol=1e-12)
    np.testing.assert_allclose(moved.r_cols, motion.rotation @ base.r_cols, atol=1e-12)


@pytest.mark.parametrize("a", [0.5, 2.0, 10.0])
def test_kinematic_scaling(a):
    ref, dfm = random_surface_pair(2, "graph-trigonometric")
    base = pair_states((ref, dfm))
    sc = pair_states((ref, scale_surface(dfm, a)))
    np.testing.assert_allclose(sc.c_cov, a * a * base.c_cov, rtol=1e-12, atol=1e-14)
    np.testing.assert_allclose(sc.u_mixed, a * base.u_mixed, rtol=1e-12, atol=1e-13)
    np.testing.assert_allclose(sc.u_norm, a * base.u_norm, rtol=1e-12)
    np.testing.assert_allclose(sc.r_cols, base.r_cols, rtol=1e-12, atol=1e-13)


def test_frobenius_norm_examples():
    plane = plane_expr()
    g = point_geometry(plane, (0.2, 0.4))
    ident = polar_decompose(g, g)
    assert u_frobenius_norm(ident) == pytest.approx(np.sqrt(2), rel=1e-15)
    a = 1.7
    scaled = polar_decompose(g, point_geometry(scale_surface(plane, a), (0.2, 0.4)))
    assert u_frobenius_norm(scaled) == pytest.approx(a * np.sqrt(2), rel=1e-15)
    stretch = SurfaceExpr.from_strings(["2*xi1", "3*xi2", "0"])
    st = polar_decompose(g, point_geometry(stretch, (0.2, 0.4)))
    assert u_frobenius_norm(st) == pytest.approx(np.sqrt(13), rel=1e-15)
    assert st.u_norm == pytest.approx(np.sqrt(13), rel=1e-15)
    np.testing.assert_allclose(st.u_mixed, np.diag([2.0, 3.0]), atol=1e-15)


def test_conformal_stretch_has_unique_root():
    # repeated generalized eigenvalue: any eigenbasis must give U = 2 I
    ref, _ = random_surface_pair(6, "graph-polynomial")
    g = point_geometry(ref, (0.3, 0.3))
    st = polar_decompose(g, point_geometry(scale_surface(ref, 2.0), (0.3, 0.3)))
    np.testing.assert_allclose(st.u_mixed, 2 * np.eye(2), atol=1e-14)


def test_singular_deformation():
    squashed = SurfaceExpr.from_strings(["xi1", "1e-7*xi2", "0"])
    with pytest.raises(SingularDeformation):
        polar_decompose(point_geometry(plane_expr(), (0.1, 0.2)), point_geometry(squashed, (0.1, 0.2)))
