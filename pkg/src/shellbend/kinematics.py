"""Reference/deformed kinematics: stretch, polar factor and |U|.

Component conventions (``A`` is the reference metric):

* ``u_mixed[g, a]`` is ``U^g_a`` with ``U.E_a = U^g_a E_g``;
* ``u_cov = A @ u_mixed`` holds ``E_a . U . E_b``;
* ``r_cols[..., k, a]`` is the ambient vector ``r.E_a``.

U is obtained from the generalized symmetric eigenproblem
``c v = lam A v`` so that it is exactly A-self-adjoint.
"""

from dataclasses import dataclass

import numpy as np

from .diffgeo import PointGeometry
from .errors import MismatchedPoint, SingularDeformation

#: Relative floor on the generalized eigenvalues of (c, A).
RANK_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class DeformationState:
    ref: PointGeometry
    deformed: PointGeometry
    c_cov: np.ndarray
    c_mixed: np.ndarray
    stretch_sq: np.ndarray
    u_mixed: np.ndarray
    u_cov: np.ndarray
    u_inv_mixed: np.ndarray
    u_norm: np.ndarray
    r_cols: np.ndarray

    @property
    def xi(self):
        return self.ref.xi


def pullback_metric(ref: PointGeometry, deformed: PointGeometry) -> np.ndarray:
    """Covariant components ``c_ab = e_a . e_b`` of ``f^T f``."""
    if ref.xi.shape != deformed.xi.shape or not np.array_equal(ref.xi, deformed.xi):
        raise MismatchedPoint("reference and deformed geometries are at different points")
    return np.einsum("...ka,...kb->...ab", deformed.basis, deformed.basis)


def generalized_eigh(c, a):
    """Solve ``c v = lam a v`` with ``v^T a v = I`` for batches of 2x2 SPD pairs."""
    chol = np.linalg.cholesky(a)
    linv = np.linalg.inv(chol)
    ct = linv @ c @ np.swapaxes(linv, -1, -2)
    ct = 0.5 * (ct + np.swapaxes(ct, -1, -2))
    lam, w = np.linalg.eigh(ct)
    v = np.swapaxes(linv, -1, -2) @ w
    return lam, v


def polar_decompose(ref: PointGeometry, deformed: PointGeometry) -> DeformationState:
    """Right polar decomposition ``f = r.U`` at each point."""
    c_cov = pullback_metric(ref, deformed)
    A = ref.metric
    lam, v = generalized_eigh(c_cov, A)
    top = lam.max(axis=-1)
    bad = ~(lam.min(axis=-1) > RANK_FLOOR * top)
    if np.any(bad):
        pt = ref.xi.reshape(-1, 2)[np.flatnonzero(bad)[0]]
        raise SingularDeformation("deformation gradient is rank deficient",
                                  (float(pt[0]), float(pt[1])))

    av = A @ v
    av_t = np.swapaxes(av, -1, -2)
    root = np.sqrt(lam)
    # U = sum_i sqrt(lam_i) v_i (x) (A v_i)
    u_mixed = (v * root[..., None, :]) @ av_t
    u_inv_mixed = (v / root[..., None, :]) @ av_t
    u_cov = (av * root[..., None, :]) @ av_t
    c_mixed = ref.inv_metric @ c_cov
    r_cols = deformed.basis @ u_inv_mixed
    return DeformationState(
        ref=ref, deformed=deformed, c_cov=c_cov, c_mixed=c_mixed, stretch_sq=lam,
        u_mixed=u_mixed, u_cov=u_cov, u_inv_mixed=u_inv_mixed,
        u_norm=np.sqrt(lam.sum(axis=-1)), r_cols=r_cols,
    )


def u_frobenius_norm(state: DeformationState) -> np.ndarray:
    """``|U| = sqrt(U:U) = sqrt(tr(f^T f)) = sqrt(c_ab A^ab)``."""
    return np.sqrt(np.einsum("...ab,...ab->...", state.c_cov, state.ref.inv_metric))
