"""Twirling onto the isotropic family, in closed form.

Averaging (U (x) U*) rho (U (x) U*)^dag over Haar U projects any state onto
the isotropic line while preserving its singlet overlap, so the output is
fully described by the mixing parameter

    p = (d^2 s - 1) / (d^2 - 1),   s = <Psi_d+| rho |Psi_d+>.

Production paths always use this closed form; the Monte Carlo average over
sampled unitaries exists only as a test oracle.
"""

from __future__ import annotations

import numpy as np

from .bounds import Energy, TemperatureScale
from .states import BipartiteState, IsotropicParams, PureState, singlet_vector


def singlet_overlap(state: BipartiteState) -> float:
    psi = singlet_vector(state.d)
    return float((psi.conj() @ state.rho @ psi).real)


def twirl(state: BipartiteState) -> IsotropicParams:
    """Isotropic parameters of the Haar (U (x) U*) average of ``state``."""
    d = state.d
    s = singlet_overlap(state)
    return IsotropicParams(d, (d * d * s - 1.0) / (d * d - 1.0))


def twirl_work_cost(phi: PureState, t: TemperatureScale) -> Energy:
    """Minimal work cost of twirling a pure state: kBT ln ||T(phi)||_inf.

    The twirled state is isotropic, where the operator norm coincides with
    the fully entangled fraction, so the cost is kBT ln F[T(phi)].  It is
    never positive; a negative value is a work gain.
    """
    fef_twirled = twirl(phi.to_density()).fully_entangled_fraction()
    return Energy(float(np.log(fef_twirled)), t.kbt)
