"""Randomized property checks for the scaling and rigid-motion behaviour of
the bending measures, producing :class:`CheckReport` records."""

from dataclasses import dataclass, field

import numpy as np

from .diffgeo import surface_geometry
from .errors import GeometryError
from .families import FAMILIES, random_surface_pair, sphere_expr
from .kinematics import polar_decompose, u_frobenius_norm
from .measures import MEASURE_NAMES, SCALING_MEASURES, bending_measures, scaling_transform_law
from .transforms import random_rotation, rigid_transform_surface, scale_surface

DEFAULT_TOL = 1e-10
NULLITY_TOL = 1e-11
POLAR_TOL = 1e-12
NORM_TOL = 1e-13
GRID_MARGIN = 0.1

NULLITY_FAMILIES = ("graph-polynomial", "graph-trigonometric", "sphere-chart")


@dataclass
class CheckReport:
    name: str
    pair: str
    points: int
    max_residual: float
    tolerance: float
    verdict: str
    worst: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.verdict == "pass"

    def to_dict(self):
        return {
            "name": self.name,
            "pair": self.pair,
            "points": self.points,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "worst": self.worst,
        }


def _verdict(residual, tol):
    # NaN residuals fail
    return "pass" if residual <= tol else "fail"


def interior_grid(domain, n1, n2, margin=GRID_MARGIN):
    """Flattened grid, row-major in xi1 then xi2, kept ``margin`` inside."""
    (a1, b1), (a2, b2) = domain
    d1, d2 = margin * (b1 - a1), margin * (b2 - a2)
    g1 = np.linspace(a1 + d1, b1 - d1, n1)
    g2 = np.linspace(a2 + d2, b2 - d2, n2)
    x1, x2 = np.meshgrid(g1, g2, indexing="ij")
    return x1.ravel(), x2.ravel()


def _grid_points(surface, grid):
    if isinstance(grid, tuple) and len(grid) == 2 and np.ndim(grid[0]) == 1 and np.size(grid[0]) > 1:
        return np.asarray(grid[0], float), np.asarray(grid[1], float)
    n1, n2 = (grid, grid) if np.isscalar(grid) else grid
    return interior_grid(surface.domain, int(n1), int(n2))


def deformation_field(reference, deformed, xi1, xi2):
    ref_g = surface_geometry(reference, xi1, xi2)
    def_g = surface_geometry(deformed, xi1, xi2)
    return polar_decompose(ref_g, def_g)


def _pointwise_failure(reference, deformed, xi1, xi2):
    """Return (index, error) of the first point that fails on its own."""
    for i, (p, q) in enumerate(zip(xi1, xi2)):
        try:
            bending_measures(deformation_field(reference, deformed, float(p), float(q)))
        except GeometryError as exc:
            if exc.xi is None:
                exc.xi = (float(p), float(q))
            return i, exc
    return None, None


def measure_field(reference, deformed, xi1, xi2):
    """Deformation state and measures at every point; errors name the point."""
    try:
        state = deformation_field(reference, deformed, xi1, xi2)
        return state, bending_measures(state)
    except GeometryError as exc:
        if exc.xi is None and np.ndim(xi1) > 0:
            _, located = _pointwise_failure(reference, deformed, np.ravel(xi1), np.ravel(xi2))
            if located is not None:
                raise located from exc
        elif exc.xi is None:
            exc.xi = (float(xi1), float(xi2))
        raise


def admissible_mask(reference, deformed, xi1, xi2):
    """Per-point success flags, evaluating points one at a time."""
    ok = np.ones(len(xi1), dtype=bool)
    for i, (p, q) in enumerate(zip(xi1, xi2)):
        try:
            bending_measures(deformation_field(reference, deformed, float(p), float(q)))
        except GeometryError:
            ok[i] = False
    return ok


def _worst(xi1, xi2, diff):
    per_point = np.max(np.abs(diff).reshape(len(xi1), -1), axis=1)
    i = int(np.nanargmax(per_point)) if np.any(np.isfinite(per_point)) else 0
    return float(per_point[i]), {
        "xi": [float(xi1[i]), float(xi2[i])],
        "residual": np.asarray(diff[i]).tolist(),
    }


def _absmax(x):
    return float(np.max(np.abs(x)))


def check_scaling_law(pair, a_list, grid=21, tol=DEFAULT_TOL, label="pair"):
    """One report per (measure, a): measures of (ref, a*def) against the law.

    The tolerance for each measure is ``tol * (1 + max|K(x)|)`` with ``K(x)``
    the unscaled measure.
    """
    reference, deformed = pair
    xi1, xi2 = _grid_points(reference, grid)
    _, base = measure_field(reference, deformed, xi1, xi2)
    reports = []
    for a in a_list:
        predicted = scaling_transform_law(base, a)
        _, scaled = measure_field(reference, scale_surface(deformed, a), xi1, xi2)
        for name in MEASURE_NAMES:
            diff = scaled[name] - predicted[name]
            residual, worst = _worst(xi1, xi2, diff)
            allowed = tol * (1.0 + _absmax(base[name]))
            kind = "equivariance" if name in SCALING_MEASURES else "invariance"
            reports.append(CheckReport(
                name=f"scaling_{kind}[{name}, a={a!r}]", pair=label, points=len(xi1),
                max_residual=residual, tolerance=allowed, verdict=_verdict(residual, allowed),
                worst=worst))
    return reports


def _motion_residuals(reference, deformed_list, xi1, xi2, baseline=None):
    worst_res, worst = -1.0, {}
    for k, deformed in enumerate(deformed_list):
        _, ms = measure_field(reference, deformed, xi1, xi2)
        for name in MEASURE_NAMES:
            diff = ms[name] if baseline is None else ms[name] - baseline[name]
            res, rec = _worst(xi1, xi2, diff)
            if not res <= worst_res:
                worst_res, worst = res, dict(rec, measure=name, motion=k)
    return worst_res, worst


def check_rigid_nullity(surface, motions, grid=21, tol=NULLITY_TOL, label="surface"):
    """All five measures vanish for deformed = motion(reference)."""
    if not motions:
        raise ValueError("at least one rigid motion is required")
    xi1, xi2 = _grid_points(surface, grid)
    moved = [rigid_transform_surface(surface, m) for m in motions]
    res, worst = _motion_residuals(surface, moved, xi1, xi2)
    return CheckReport("rigid_nullity", label, len(xi1), res, tol, _verdict(res, tol), worst)


def check_objectivity(pair, motions, grid=21, tol=NULLITY_TOL, label="pair"):
    """Superposed rigid motions of the deformed surface leave every measure unchanged."""
    if not motions:
        raise ValueError("at least one rigid motion is required")
    reference, deformed = pair
    xi1, xi2 = _grid_points(reference, grid)
    _, base = measure_field(reference, deformed, xi1, xi2)
    moved = [rigid_transform_surface(deformed, m) for m in motions]
    res, worst = _motion_residuals(reference, moved, xi1, xi2, baseline=base)
    return CheckReport("objectivity", label, len(xi1), res, tol, _verdict(res, tol), worst)


def check_sphere_dilation(R, a, grid=21, tol=DEFAULT_TOL):
    """Radial dilation of a sphere chart: all five measures vanish."""
    if not (R > 0 and a > 0):
        raise ValueError("radius and scale must be positive")
    reference = sphere_expr(R)
    xi1, xi2 = _grid_points(reference, grid)
    res, worst = _motion_residuals(reference, [scale_surface(reference, a)], xi1, xi2)
    worst.pop("motion", None)
    return CheckReport(f"sphere_dilation[R={R!r}, a={a!r}]", f"sphere(R={R!r})", len(xi1),
                       res, tol, _verdict(res, tol), worst)


def polar_residuals(state):
    """Relative residual arrays (one value per point) for the polar factors."""
    basis = state.deformed.basis
    A = state.ref.metric
    scale_f = np.max(np.abs(basis), axis=(-2, -1))
    recomposition = np.max(np.abs(basis - state.r_cols @ state.u_mixed), axis=(-2, -1)) / scale_f

    rtr = np.swapaxes(state.r_cols, -1, -2) @ state.r_cols
    scale_a = np.max(np.abs(A), axis=(-2, -1))
    tangency = np.einsum("...ka,...k->...a", state.r_cols, state.deformed.normal)
    r_norm = np.max(np.abs(state.r_cols), axis=(-2, -1))
    isometry = np.maximum(np.max(np.abs(rtr - A), axis=(-2, -1)) / scale_a,
                          np.max(np.abs(tangency), axis=-1) / r_norm)

    u = state.u_cov
    symmetry = np.abs(u[..., 0, 1] - u[..., 1, 0]) / np.max(np.abs(u), axis=(-2, -1))

    trace = np.einsum("...aa->...", state.c_mixed)
    norm = np.abs(state.u_norm ** 2 - trace) / trace
    direct = np.abs(u_frobenius_norm(state) ** 2 - trace) / trace
    return {
        "recomposition": recomposition,
        "isometry": isometry,
        "u_symmetry": symmetry,
        "u_norm": np.maximum(norm, direct),
    }


def check_polar_decomposition(pair, grid=21, tol=POLAR_TOL, norm_tol=NORM_TOL, label="pair"):
    reference, deformed = pair
    xi1, xi2 = _grid_points(reference, grid)
    state, _ = measure_field(reference, deformed, xi1, xi2)
    reports = []
    for key, values in polar_residuals(state).items():
        allowed = norm_tol if key == "u_norm" else tol
        i = int(np.argmax(values))
        res = float(values[i])
        reports.append(CheckReport(f"polar_{key}", label, len(xi1), res, allowed,
                                   _verdict(res, allowed),
                                   {"xi": [float(xi1[i]), float(xi2[i])]}))
    return reports


def seeded_motions(seed, count):
    return [random_rotation(1000 * int(seed) + k) for k in range(count)]


def run_suite(pairs=(), *, families=tuple(FAMILIES), seeds=(0, 1, 2), grid=21,
              scales=(0.5, 2.0, 10.0), tol=DEFAULT_TOL, nullity_tol=NULLITY_TOL,
              polar_tol=POLAR_TOL, norm_tol=NORM_TOL, n_motions=10,
              sphere_cases=((1.0, 0.5), (1.0, 2.0), (2.0, 0.5), (2.0, 2.0))):
    """Run every check; ``pairs`` holds extra ``(label, reference, deformed)``
    triples (e.g. from a config file) checked alongside the built-in families."""
    cases = [(label, (ref, dfm), seeds[0] if seeds else 0) for label, ref, dfm in pairs]
    for kind in families:
        for seed in seeds:
            cases.append((f"{kind}#seed={seed}", random_surface_pair(seed, kind), seed))

    reports = []
    for label, pair, seed in cases:
        motions = seeded_motions(seed, n_motions)
        reports += check_scaling_law(pair, scales, grid, tol, label)
        reports.append(check_objectivity(pair, motions, grid, nullity_tol, label))
        reports += check_polar_decomposition(pair, grid, polar_tol, norm_tol, label)
        reports.append(check_rigid_nullity(pair[0], motions, grid, nullity_tol, label + ":reference"))
    for R, a in sphere_cases:
        reports.append(check_sphere_dilation(R, a, grid, tol))
    return reports
