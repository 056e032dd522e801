"""Von Neumann, conditional, and min-entropy quantities, all in bits.

Entropies are kept in log-base-2 units throughout the package; conversion
to energy happens only in the bounds module, so factor-of-ln2 mistakes
cannot creep into the entropic layer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import EIG_CLAMP, TOL_HERM, TOL_TRACE, ValidationError, as_complex_matrix, dagger, herm_defect
from .states import BipartiteState


def _clamped_spectrum(mat) -> np.ndarray:
    mat = as_complex_matrix(mat)
    defect = herm_defect(mat)
    if defect > TOL_HERM:
        raise ValidationError(f"density matrix is not Hermitian: defect {defect:.3e}")
    tr = complex(np.trace(mat))
    if abs(tr - 1.0) > TOL_TRACE:
        raise ValidationError(f"density matrix trace must be 1, got {tr:.12g}")
    w = np.linalg.eigvalsh((mat + dagger(mat)) / 2)
    if w[0] < -EIG_CLAMP:
        raise ValidationError(f"density matrix is not PSD: min eigenvalue {w[0]:.3e}")
    return np.clip(w, 0.0, None)


def von_neumann_entropy(mat) -> float:
    """-sum lambda log2 lambda over the clamped spectrum, with 0 log 0 := 0."""
    w = _clamped_spectrum(mat)
    w = w[w > 0.0]
    return float(-(w * np.log2(w)).sum())


@dataclass(frozen=True)
class EntropyReport:
    """All entropic quantities of one state, in bits.

    ``h_min_lower`` is -log2 ||rho||_inf, a lower bound on the smooth
    min-entropy (the ball supremum itself is never optimized here).
    """

    s: float
    s_a: float
    s_b: float
    s_a_given_b: float
    s_b_given_a: float
    s_min: float
    op_norm_rho: float
    h_min_lower: float

    def to_dict(self) -> dict:
        return {
            "S": self.s,
            "S_A": self.s_a,
            "S_B": self.s_b,
            "S_AgivenB": self.s_a_given_b,
            "S_BgivenA": self.s_b_given_a,
            "S_min": self.s_min,
            "opNormRho": self.op_norm_rho,
            "hMinLower": self.h_min_lower,
            "hMinLower_is_lower_bound": True,
        }


def entropy_report(state: BipartiteState) -> EntropyReport:
    s = von_neumann_entropy(state.rho)
    s_a = von_neumann_entropy(state.marginal("A"))
    s_b = von_neumann_entropy(state.marginal("B"))
    op_norm = float(np.linalg.eigvalsh(state.rho)[-1])
    return EntropyReport(
        s=s,
        s_a=s_a,
        s_b=s_b,
        s_a_given_b=s - s_b,
        s_b_given_a=s - s_a,
        s_min=min(s_a, s_b),
        op_norm_rho=op_norm,
        h_min_lower=float(-np.log2(op_norm)),
    )


def smooth_min_entropy_lower(state: BipartiteState) -> float:
    """-log2 ||rho||_inf, the certified lower bound on the smooth min-entropy."""
    return float(-np.log2(np.linalg.eigvalsh(state.rho)[-1]))
