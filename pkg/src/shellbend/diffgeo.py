"""Pointwise first- and second-order geometry of a parametrized surface.

All arrays carry an optional leading batch shape ``...`` so one call can
cover a whole grid.  Index conventions:

* ``basis[..., k, a]`` is ambient component ``k`` of the tangent ``pos,_a``;
* ``dbasis[..., k, a, b]`` is ``pos,_ab``;
* ``dnormal[..., k, b]`` is ``normal,_b``;
* ``sff[..., a, b] = basis_a . normal,_b``.

The normal is ``basis_1 x basis_2`` normalized, and curvature is signed
with ``b = n,_b (x) e^b``: the outward unit sphere has ``sff = metric``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateImmersion, OutsideParamDomain
from .surface_lang import SurfaceExpr, eval_surface

#: Relative floor on |basis_1 x basis_2| / (|basis_1| |basis_2|).
IMMERSION_FLOOR = 1e-10


@dataclass(frozen=True, eq=False)
class PointGeometry:
    xi: np.ndarray
    pos: np.ndarray
    basis: np.ndarray
    dbasis: np.ndarray
    metric: np.ndarray
    inv_metric: np.ndarray
    dual: np.ndarray
    normal: np.ndarray
    dnormal: np.ndarray
    sff: np.ndarray

    @property
    def batch_shape(self):
        return self.xi.shape[:-1]

    def at(self, index):
        """Single-point view of a batched geometry."""
        return PointGeometry(**{k: getattr(self, k)[index] for k in self.__dataclass_fields__})

    def select(self, mask):
        return self.at(mask)


def _stack_jets(jet_triple):
    """Ambient position, basis and second derivatives from three jets."""
    pos, basis, dbasis = [], [], []
    for j in jet_triple:
        pos.append(np.asarray(j.val, dtype=float))
        basis.append(j.grad)
        dbasis.append(j.hess)
    pos = np.broadcast_arrays(*pos)
    shape = pos[0].shape
    basis = [np.broadcast_to(b, shape + (2,)) for b in basis]
    dbasis = [np.broadcast_to(h, shape + (2, 2)) for h in dbasis]
    return (np.stack(pos, axis=-1),
            np.stack(basis, axis=-2),
            np.stack(dbasis, axis=-3))


def geometry_from_derivatives(xi, pos, basis, dbasis):
    """Assemble a :class:`PointGeometry` from position derivatives.

    Raises :class:`DegenerateImmersion` naming the first point where the
    tangents are (numerically) parallel.
    """
    xi = np.asarray(xi, dtype=float)
    b1 = basis[..., :, 0]
    b2 = basis[..., :, 1]
    cross = np.cross(b1, b2)
    cnorm = np.linalg.norm(cross, axis=-1)
    scale = np.linalg.norm(b1, axis=-1) * np.linalg.norm(b2, axis=-1)
    bad = ~(cnorm > IMMERSION_FLOOR * scale)
    if np.any(bad):
        pt = xi.reshape(-1, 2)[np.flatnonzero(bad)[0]]
        raise DegenerateImmersion("surface is not immersed", (float(pt[0]), float(pt[1])))

    metric = np.einsum("...ka,...kb->...ab", basis, basis)
    inv_metric = np.linalg.inv(metric)
    inv_metric = 0.5 * (inv_metric + np.swapaxes(inv_metric, -1, -2))
    dual = np.einsum("...ka,...ab->...kb", basis, inv_metric)

    normal = cross / cnorm[..., None]
    # d(b1 x b2)/d xi^beta, then project out the normal component
    dcross = np.stack(
        [np.cross(dbasis[..., :, 0, beta], b2) + np.cross(b1, dbasis[..., :, 1, beta])
         for beta in (0, 1)],
        axis=-1,
    )
    along = np.einsum("...k,...kb->...b", normal, dcross)
    dnormal = (dcross - normal[..., :, None] * along[..., None, :]) / cnorm[..., None, None]
    sff = np.einsum("...ka,...kb->...ab", basis, dnormal)
    return PointGeometry(xi=xi, pos=pos, basis=basis, dbasis=dbasis, metric=metric,
                         inv_metric=inv_metric, dual=dual, normal=normal,
                         dnormal=dnormal, sff=sff)


def surface_geometry(s: SurfaceExpr, xi1, xi2, strict=True) -> PointGeometry:
    """Batched geometry of ``s`` at the points ``(xi1[i], xi2[i])``."""
    xi1 = np.asarray(xi1, dtype=float)
    xi2 = np.asarray(xi2, dtype=float)
    if strict:
        inside = s.contains(xi1, xi2, strict=True)
        if not np.all(inside):
            i = np.flatnonzero(~inside)[0]
            pt = (float(xi1.reshape(-1)[i]), float(xi2.reshape(-1)[i]))
            raise OutsideParamDomain(f"point not interior to {s.domain}", pt)
    pos, basis, dbasis = _stack_jets(eval_surface(s, xi1, xi2))
    xi = np.stack(np.broadcast_arrays(xi1, xi2), axis=-1)
    return geometry_from_derivatives(xi, pos, basis, dbasis)


def point_geometry(s: SurfaceExpr, xi) -> PointGeometry:
    """Geometry of ``s`` at one interior point ``xi = (xi1, xi2)``."""
    return surface_geometry(s, float(xi[0]), float(xi[1]))


def mixed_curvature(g: PointGeometry) -> np.ndarray:
    """Curvature operator with first index raised: ``inv_metric @ sff``."""
    return g.inv_metric @ g.sff
