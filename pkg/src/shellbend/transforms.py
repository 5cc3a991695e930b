"""Symbolic transformations of surface expressions.

Transforms wrap the component ASTs with numeric literals, so the transformed
surface is differentiated exactly by the same jet pipeline.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidRotation, NonpositiveScale
from .surface_lang import Binary, Number, SurfaceExpr

ORTHOGONALITY_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class RigidMotion:
    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        q = np.array(self.rotation, dtype=float)
        t = np.array(self.translation, dtype=float)
        if q.shape != (3, 3) or t.shape != (3,):
            raise InvalidRotation("rotation must be 3x3 and translation length 3")
        if not np.all(np.isfinite(q)) or not np.all(np.isfinite(t)):
            raise InvalidRotation("rigid motion has non-finite entries")
        if np.max(np.abs(q.T @ q - np.eye(3))) > ORTHOGONALITY_TOL:
            raise InvalidRotation("rotation is not orthogonal")
        if abs(np.linalg.det(q) - 1.0) > ORTHOGONALITY_TOL:
            raise InvalidRotation("rotation is not proper (det != +1)")
        q.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "rotation", q)
        object.__setattr__(self, "translation", t)

    @classmethod
    def identity(cls):
        return cls(np.eye(3), np.zeros(3))

    def apply(self, points):
        return np.asarray(points) @ self.rotation.T + self.translation


def quaternion_to_matrix(q):
    w, x, y, z = np.asarray(q, dtype=float) / np.linalg.norm(q)
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


def axis_angle_rotation(axis, angle):
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    half = 0.5 * angle
    return quaternion_to_matrix(np.concatenate([[np.cos(half)], np.sin(half) * axis]))


def random_rotation(seed: int, translation_scale: float = 1.0) -> RigidMotion:
    """Deterministic proper rigid motion from a normalized Gaussian quaternion."""
    rng = np.random.default_rng(seed)
    q = rng.standard_normal(4)
    t = translation_scale * rng.uniform(-1.0, 1.0, size=3)
    return RigidMotion(quaternion_to_matrix(q), t)


def _scaled(node, a):
    return Binary("*", Number(float(a)), node)


def scale_surface(s: SurfaceExpr, a: float) -> SurfaceExpr:
    """The surface ``a * x(xi)``, for ``a > 0``."""
    if not (np.isfinite(a) and a > 0):
        raise NonpositiveScale(f"scale factor must be positive and finite, got {a!r}")
    comps = tuple(_scaled(c, a) for c in s.components)
    return SurfaceExpr(comps, dict(s.params), s.domain, label=f"{a!r}*({s.label})")


def rigid_transform_surface(s: SurfaceExpr, motion: RigidMotion) -> SurfaceExpr:
    """The surface ``Q x(xi) + c``."""
    if not isinstance(motion, RigidMotion):
        raise InvalidRotation("expected a RigidMotion")
    q, t = motion.rotation, motion.translation
    comps = []
    for k in range(3):
        node = Binary("+", _scaled(s.components[0], q[k, 0]), _scaled(s.components[1], q[k, 1]))
        node = Binary("+", node, _scaled(s.components[2], q[k, 2]))
        comps.append(Binary("+", node, Number(float(t[k]))))
    return SurfaceExpr(tuple(comps), dict(s.params), s.domain, label=f"motion({s.label})")
