"""The five bending-strain measures, in covariant components on E^a (x) E^b.

With ``m = f^T.b.f`` (components ``e_a . n,_b``) and ``UB`` the components
``E_a . U . N,_b``::

    k_tilde     = m - UB
    k_check     = m - sym(UB)
    k_bar       = r^T.b.f - B        (components (r.E_a) . n,_b - B_ab)
    k_tilde_mod = k_tilde / |U|
    k_check_mod = k_check / |U|
"""

from dataclasses import dataclass

import numpy as np

from .errors import NonpositiveScale
from .kinematics import DeformationState

MEASURE_NAMES = ("k_tilde", "k_check", "k_bar", "k_tilde_mod", "k_check_mod")
#: Measures expected to scale linearly with the deformed surface; the rest are invariant.
SCALING_MEASURES = ("k_tilde", "k_check")


def _t(m):
    return np.swapaxes(m, -1, -2)


@dataclass(frozen=True, eq=False)
class MeasureSet:
    k_tilde: np.ndarray
    k_check: np.ndarray
    k_bar: np.ndarray
    k_tilde_mod: np.ndarray
    k_check_mod: np.ndarray
    u_norm: np.ndarray

    def __getitem__(self, name):
        if name not in MEASURE_NAMES and name != "u_norm":
            raise KeyError(name)
        return getattr(self, name)

    def items(self):
        return [(n, getattr(self, n)) for n in MEASURE_NAMES]

    def at(self, index):
        return MeasureSet(**{k: getattr(self, k)[index] for k in self.__dataclass_fields__})


def pulled_back_curvature(state: DeformationState) -> np.ndarray:
    """``m_ab = e_a . n,_b``: the deformed curvature pulled back by f."""
    d = state.deformed
    return np.einsum("...ka,...kb->...ab", d.basis, d.dnormal)


def u_dot_B(state: DeformationState) -> np.ndarray:
    """Components ``E_a . U . N,_b = u_cov A^-1 B``."""
    return state.u_cov @ state.ref.inv_metric @ state.ref.sff


def bending_measures(state: DeformationState) -> MeasureSet:
    m = pulled_back_curvature(state)
    ub = u_dot_B(state)
    k_tilde = m - ub
    k_check = m - 0.5 * (ub + _t(ub))
    # (r.E_a) . n,_b = (U^-1)^g_a e_g . n,_b
    k_bar = _t(state.u_inv_mixed) @ m - state.ref.sff
    norm = state.u_norm[..., None, None]
    return MeasureSet(
        k_tilde=k_tilde,
        k_check=k_check,
        k_bar=k_bar,
        k_tilde_mod=k_tilde / norm,
        k_check_mod=k_check / norm,
        u_norm=state.u_norm,
    )


def scaling_transform_law(measures: MeasureSet, a: float) -> MeasureSet:
    """Predicted measures after the deformed surface is scaled by ``a > 0``.

    ``k_tilde`` and ``k_check`` scale by ``a``; ``k_bar`` and the two
    normalized measures are unchanged.
    """
    if not a > 0:
        raise NonpositiveScale(f"scale factor must be positive, got {a!r}")
    return MeasureSet(
        k_tilde=a * measures.k_tilde,
        k_check=a * measures.k_check,
        k_bar=measures.k_bar,
        k_tilde_mod=measures.k_tilde_mod,
        k_check_mod=measures.k_check_mod,
        u_norm=a * measures.u_norm,
    )
