"""Seeded families of (reference, deformed) surface pairs."""

import zlib
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import FamilyExhausted, GeometryError
from .surface_lang import SurfaceExpr

RETRY_CAP = 50
SLOPE_BOUND = 1.5  # stays below the 2.0 slope ceiling on [-1, 1]^2
UNIT_SQUARE = ((-1.0, 1.0), (-1.0, 1.0))


def _lit(x):
    return repr(float(x))


def _poly_text(coeffs):
    terms = [f"{_lit(c)}*xi1^{i}*xi2^{j}" for (i, j), c in coeffs.items()]
    return " + ".join(terms)


def _random_poly(rng, degree=3):
    exps = [(i, j) for i in range(degree + 1) for j in range(degree + 1 - i)]
    coeffs = {ij: rng.uniform(-1.0, 1.0) for ij in exps}
    # |grad p| <= sum |c_ij| (i + j) on the unit square
    slope = sum(abs(c) * (i + j) for (i, j), c in coeffs.items())
    shrink = min(1.0, SLOPE_BOUND / slope) if slope > 0 else 1.0
    return {ij: c * shrink for ij, c in coeffs.items()}


def _graph_polynomial(rng):
    ref = SurfaceExpr.from_strings(["xi1", "xi2", _poly_text(_random_poly(rng))], domain=UNIT_SQUARE)
    s = np.eye(2) + rng.uniform(-0.3, 0.3, size=(2, 2))
    deformed = SurfaceExpr.from_strings(
        [f"{_lit(s[0, 0])}*xi1 + {_lit(s[0, 1])}*xi2",
         f"{_lit(s[1, 0])}*xi1 + {_lit(s[1, 1])}*xi2",
         _poly_text(_random_poly(rng))],
        domain=UNIT_SQUARE,
    )
    return ref, deformed


def _random_waves(rng, n=3):
    waves = [(rng.uniform(-1, 1), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(0, 2 * np.pi))
             for _ in range(n)]
    slope = sum(abs(a) * (abs(k1) + abs(k2)) for a, k1, k2, _ in waves)
    shrink = min(1.0, SLOPE_BOUND / slope)
    return " + ".join(
        f"{_lit(a * shrink)}*sin({_lit(k1)}*xi1 + {_lit(k2)}*xi2 + {_lit(p)})"
        for a, k1, k2, p in waves
    )


def _graph_trigonometric(rng):
    ref = SurfaceExpr.from_strings(["xi1", "xi2", _random_waves(rng)], domain=UNIT_SQUARE)
    # in-plane warp with |amplitude * frequency| <= 0.3 keeps det f > 0
    w1, w2 = rng.uniform(0.5, 2.0, size=2)
    b1, b2 = rng.uniform(-0.3, 0.3, size=2) / np.array([w1, w2])
    p1, p2 = rng.uniform(0, 2 * np.pi, size=2)
    deformed = SurfaceExpr.from_strings(
        [f"xi1 + {_lit(b1)}*sin({_lit(w1)}*xi2 + {_lit(p1)})",
         f"xi2 + {_lit(b2)}*cos({_lit(w2)}*xi1 + {_lit(p2)})",
         _random_waves(rng)],
        domain=UNIT_SQUARE,
    )
    return ref, deformed


def cylinder_expr(radius, stretch=1.0, axial=1.0, domain=UNIT_SQUARE):
    """Cylinder of the given radius rolled from the plane by arc length."""
    return SurfaceExpr.from_strings(
        ["R*sin(s*xi1/R)", "t*xi2", "R - R*cos(s*xi1/R)"],
        {"R": radius, "s": stretch, "t": axial},
        domain,
        label=f"cylinder(R={radius!r})",
    )


def sphere_expr(radius, domain=UNIT_SQUARE):
    """Longitude/latitude chart of a sphere with outward normal."""
    return SurfaceExpr.from_strings(
        ["R*cos(xi1)*cos(xi2)", "R*sin(xi1)*cos(xi2)", "R*sin(xi2)"],
        {"R": radius},
        domain,
        label=f"sphere(R={radius!r})",
    )


def plane_expr(domain=UNIT_SQUARE):
    return SurfaceExpr.from_strings(["xi1", "xi2", "0"], domain=domain, label="plane")


def _cylinder_roll(rng):
    ref = cylinder_expr(rng.uniform(1.5, 5.0))
    deformed = cylinder_expr(rng.uniform(1.0, 5.0), rng.uniform(0.7, 1.3), rng.uniform(0.7, 1.3))
    return ref, deformed


def _sphere_chart(rng):
    ref = sphere_expr(rng.uniform(0.5, 2.0))
    a, b, c = rng.uniform(0.5, 2.0, size=3)
    deformed = SurfaceExpr.from_strings(
        ["a*cos(xi1)*cos(xi2)", "b*sin(xi1)*cos(xi2)", "c*sin(xi2)"],
        {"a": a, "b": b, "c": c},
        UNIT_SQUARE,
    )
    return ref, deformed


@dataclass(frozen=True)
class SurfaceFamily:
    kind: str
    description: str
    domain: tuple = UNIT_SQUARE
    sampler: Optional[Callable] = field(default=None, repr=False, compare=False)
    fixed_pair: Optional[tuple] = field(default=None, repr=False, compare=False)


FAMILIES = {
    "graph-polynomial": SurfaceFamily(
        "graph-polynomial",
        "graphs z = sum c_ij xi1^i xi2^j (degree <= 3) over an affinely stretched plane",
        sampler=_graph_polynomial),
    "graph-trigonometric": SurfaceFamily(
        "graph-trigonometric",
        "graphs z = sum A sin(k.xi + phi) with a sinusoidal in-plane warp",
        sampler=_graph_trigonometric),
    "cylinder-roll": SurfaceFamily(
        "cylinder-roll",
        "arc-length cylinder re-rolled to a new radius with axial and hoop stretch",
        sampler=_cylinder_roll),
    "sphere-chart": SurfaceFamily(
        "sphere-chart",
        "longitude/latitude sphere chart mapped onto a triaxial ellipsoid",
        sampler=_sphere_chart),
}


def user_family(reference, deformed):
    return SurfaceFamily("user-config", "surface pair from a run configuration",
                         reference.domain, fixed_pair=(reference, deformed))


def _admissible(ref, deformed, n=9):
    # avoid a circular import at module load
    from .harness import measure_field
    (a1, b1), (a2, b2) = ref.domain
    x1, x2 = np.meshgrid(np.linspace(a1, b1, n)[1:-1], np.linspace(a2, b2, n)[1:-1], indexing="ij")
    try:
        measure_field(ref, deformed, x1.ravel(), x2.ravel())
    except GeometryError:
        return False
    return True


def random_surface_pair(seed, family):
    """Deterministic (reference, deformed) pair drawn from ``family``."""
    if isinstance(family, str):
        try:
            family = FAMILIES[family]
        except KeyError:
            raise ValueError(f"unknown surface family {family!r}") from None
    if family.fixed_pair is not None:
        return family.fixed_pair
    rng = np.random.default_rng([int(seed), zlib.crc32(family.kind.encode())])
    for _ in range(RETRY_CAP):
        ref, deformed = family.sampler(rng)
        if _admissible(ref, deformed):
            return ref, deformed
    raise FamilyExhausted(f"{family.kind}: no admissible pair after {RETRY_CAP} draws (seed {seed})")
