"""Work-cost and work-extraction bound formulas, plus the aggregated report.

Entropic inputs arrive in bits; every energy leaves here as an Energy value
(dimensionless magnitude in units of kBT, paired with the scale), so reports
stay exact under temperature rescaling.  Operations guarded by the strict
entanglement-fraction threshold F > 1/d return None outside their domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .entropy import EntropyReport, entropy_report
from .fef import FefResult, fef_see_saw
from .linalg import ValidationError
from .qsdp import QResult, q_function
from .states import BipartiteState, IsotropicParams

LN2 = math.log(2.0)


@dataclass(frozen=True)
class TemperatureScale:
    """Bath energy scale kBT; all work values are multiples of it."""

    kbt: float = 1.0

    def __post_init__(self):
        if not (self.kbt > 0.0 and math.isfinite(self.kbt)):
            raise ValidationError(f"kBT must be positive and finite, got {self.kbt}")


@dataclass(frozen=True)
class Energy:
    """A work value stored as (magnitude in kBT units, kBT scale)."""

    value_over_kbt: float
    kbt: float = 1.0

    @property
    def absolute(self) -> float:
        return self.value_over_kbt * self.kbt

    def __add__(self, other: "Energy") -> "Energy":
        if abs(other.kbt - self.kbt) > 1e-15 * max(self.kbt, other.kbt):
            raise ValidationError("cannot add energies on different temperature scales")
        return Energy(self.value_over_kbt + other.value_over_kbt, self.kbt)

    def __neg__(self) -> "Energy":
        return Energy(-self.value_over_kbt, self.kbt)

    def to_dict(self) -> dict:
        return {"value": self.value_over_kbt, "units": "kBT", "kbt": self.kbt}


def lemma1_rhs(fef_lower: float, d: int):
    """-log2(F d) in bits, defined only on the strict threshold F > 1/d."""
    if fef_lower <= 1.0 / d:
        return None
    return -math.log2(fef_lower * d)


def theorem1_bound(fef_lower: float, d: int, t: TemperatureScale):
    """Guaranteed erasure work gain kBT ln(F d) for F > 1/d, else None."""
    if fef_lower <= 1.0 / d:
        return None
    return Energy(math.log(fef_lower * d), t.kbt)


def eq4_bound(entropy: EntropyReport, t: TemperatureScale) -> Energy:
    """Erasure-cost upper bound S(A|B) kBT ln 2; negative means guaranteed gain."""
    return Energy(entropy.s_a_given_b * LN2, t.kbt)


def eq6_fef_upper(w_erasure: Energy, d: int, t: TemperatureScale) -> float:
    """(1/d) exp(W / kBT), the entanglement-fraction ceiling implied by erasure work."""
    exponent = w_erasure.value_over_kbt * w_erasure.kbt / t.kbt
    return math.exp(exponent) / d


def eq12_extract_lower(entropy: EntropyReport, d: int, t: TemperatureScale) -> Energy:
    """Extractable-work floor kBT ln d^2 - S(rho) kBT ln 2."""
    return Energy(math.log(d * d) - entropy.s * LN2, t.kbt)


def lambda_gap(op_norm_rho: float, fef_lower: float, s_min: float, d: int) -> float:
    """log2 ||rho||_inf - [log2(F d) - S_min], the exactness residual in bits.

    Zero signals that the extraction approximation's spectral condition holds
    exactly, as it does on the whole isotropic family.
    """
    if fef_lower <= 0.0:
        raise ValidationError(f"fef_lower must be positive, got {fef_lower}")
    return math.log2(op_norm_rho) - (math.log2(fef_lower * d) - s_min)


@dataclass(frozen=True)
class Theorem2Result:
    applicable: bool
    delta_eps: float
    lambda_residual: float
    w_er_approx: Energy | None
    w_total_approx: Energy | None
    error_bar: Energy


def theorem2_approx(
    fef_lower: float,
    s_min: float,
    op_norm_rho: float,
    d: int,
    epsilon: float,
    t: TemperatureScale,
) -> Theorem2Result:
    """Approximate optimal extraction ledger, valid up to +-delta_eps kBT ln2.

    Applicability demands the strict threshold F > 1/d and the spectral
    residual Lambda inside the (-delta_eps, delta_eps) window.
    """
    if not (0.0 < epsilon <= 0.5):
        raise ValidationError(f"epsilon must lie in (0, 0.5], got {epsilon}")
    delta_eps = -3.0 * math.log(epsilon)
    lam = lambda_gap(op_norm_rho, fef_lower, s_min, d) if fef_lower > 0 else math.inf
    applicable = fef_lower > 1.0 / d and abs(lam) < delta_eps
    error_bar = Energy(delta_eps * LN2, t.kbt)
    if not applicable:
        return Theorem2Result(False, delta_eps, lam, None, None, error_bar)
    w_er = math.log(fef_lower * d)
    w_total = math.log(d * d) - s_min * LN2 + w_er
    return Theorem2Result(
        applicable=True,
        delta_eps=delta_eps,
        lambda_residual=lam,
        w_er_approx=Energy(w_er, t.kbt),
        w_total_approx=Energy(w_total, t.kbt),
        error_bar=error_bar,
    )


def isotropic_fef(params: IsotropicParams) -> float:
    """Entanglement fraction of the isotropic state, equal to its operator norm."""
    return params.fully_entangled_fraction()


def harmonic_number(d: int) -> float:
    return sum(1.0 / n for n in range(1, d + 1))


@dataclass(frozen=True)
class IsotropicThresholds:
    """Nonlocality thresholds of the isotropic family, as FEF values and work values.

    ``f_lhv`` (locality under general measurements) has no closed form; it
    stays absent unless a number is supplied by the caller.
    """

    d: int
    fef_entanglement: float
    fef_lhs_projective: float
    fef_lhs_povm: float
    w_lhs_projective: Energy
    w_lhs_povm: Energy
    f_lhv: float | None
    w_lhv: Energy | None

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "fefEntanglement": self.fef_entanglement,
            "fefLhsProjective": self.fef_lhs_projective,
            "fefLhsPovm": self.fef_lhs_povm,
            "wLhsProjective": self.w_lhs_projective.to_dict(),
            "wLhsPovm": self.w_lhs_povm.to_dict(),
            "fLhv": self.f_lhv,
            "wLhv": self.w_lhv.to_dict() if self.w_lhv is not None else None,
            "wLhvNote": "no closed form; supply f_lhv explicitly to fill this in",
        }


def isotropic_thresholds(d: int, t: TemperatureScale, f_lhv: float | None = None) -> IsotropicThresholds:
    if d < 2:
        raise ValidationError(f"d must be >= 2, got {d}")
    h_d = harmonic_number(d)
    fef_proj = (h_d + h_d * d - d) / (d * d)
    p_phi = (3.0 * d - 1.0) / (d * d - 1.0) * (1.0 - 1.0 / d) ** d
    fef_povm = p_phi * (1.0 - 1.0 / (d * d)) + 1.0 / (d * d)
    w_lhv = Energy(math.log(f_lhv * d), t.kbt) if f_lhv is not None else None
    return IsotropicThresholds(
        d=d,
        fef_entanglement=1.0 / d,
        fef_lhs_projective=fef_proj,
        fef_lhs_povm=fef_povm,
        w_lhs_projective=Energy(math.log(fef_proj * d), t.kbt),
        w_lhs_povm=Energy(math.log(fef_povm * d), t.kbt),
        f_lhv=f_lhv,
        w_lhv=w_lhv,
    )


@dataclass(frozen=True)
class BoundsReport:
    """Every entropy, entanglement-fraction estimate, and work bound for one state."""

    d: int
    kbt: float
    entropy: EntropyReport
    fef: FefResult
    q: QResult
    lemma1_rhs: float | None
    thm1_erasure_gain_lower: Energy | None
    eq4_erasure_cost_upper: Energy
    eq6_fef_upper: float | None
    eq12_extract_lower: Energy
    thm2: Theorem2Result


def bounds_report(
    state: BipartiteState,
    t: TemperatureScale = TemperatureScale(),
    epsilon: float = 0.05,
    restarts: int = 16,
    tol_sdp: float = 1e-8,
    seed=0,
) -> BoundsReport:
    d = state.d
    ent = entropy_report(state)
    fef = fef_see_saw(state, restarts=restarts, seed=seed)
    q = q_function(state, tol=tol_sdp, seed=seed, fef_unitary=fef.optimal_u)
    thm1 = theorem1_bound(fef.value, d, t)
    return BoundsReport(
        d=d,
        kbt=t.kbt,
        entropy=ent,
        fef=fef,
        q=q,
        lemma1_rhs=lemma1_rhs(fef.value, d),
        thm1_erasure_gain_lower=thm1,
        eq4_erasure_cost_upper=eq4_bound(ent, t),
        eq6_fef_upper=eq6_fef_upper(thm1, d, t) if thm1 is not None else None,
        eq12_extract_lower=eq12_extract_lower(ent, d, t),
        thm2=theorem2_approx(fef.value, ent.s_min, ent.op_norm_rho, d, epsilon, t),
    )


def _ann(value, units, eq, provenance):
    return {"value": value, "units": units, "paper_eq": eq, "provenance": provenance}


def _ann_energy(energy: Energy | None, eq, provenance):
    if energy is None:
        return None
    out = _ann(energy.value_over_kbt, "kBT", eq, provenance)
    out["kbt"] = energy.kbt
    return out


def bounds_report_to_dict(r: BoundsReport) -> dict:
    """JSON form with every number annotated {value, units, paper_eq, provenance}."""
    ent = r.entropy
    return {
        "d": r.d,
        "kbt": r.kbt,
        "entropy": {
            "S": _ann(ent.s, "bits", "eq1", "formula"),
            "S_A": _ann(ent.s_a, "bits", "eq1", "formula"),
            "S_B": _ann(ent.s_b, "bits", "eq1", "formula"),
            "S_AgivenB": _ann(ent.s_a_given_b, "bits", "eq1", "formula"),
            "S_BgivenA": _ann(ent.s_b_given_a, "bits", "eq1", "formula"),
            "S_min": _ann(ent.s_min, "bits", "thm2", "formula"),
            "opNormRho": _ann(ent.op_norm_rho, "dimensionless", "eq19", "formula"),
            "hMinLower": {**_ann(ent.h_min_lower, "bits", "eq19", "bound"), "lower_bound": True},
        },
        "fef": {
            "value": _ann(r.fef.value, "dimensionless", "eq2", "optimizer"),
            "restartsUsed": r.fef.restarts_used,
            "converged": r.fef.converged,
            "lower_bound": True,
        },
        "q": {
            "qPrimal": _ann(r.q.q_primal, "dimensionless", "eqA3", "optimizer"),
            "qDual": _ann(r.q.q_dual, "dimensionless", "eqA3", "optimizer"),
            "hMin": _ann(r.q.h_min, "bits", "eqA2", "optimizer"),
            "gap": _ann(r.q.gap, "dimensionless", "plumbing", "optimizer"),
        },
        "lemma1_rhs": _ann(r.lemma1_rhs, "bits", "lemma1", "formula") if r.lemma1_rhs is not None else None,
        "thm1_erasureGainLower": _ann_energy(r.thm1_erasure_gain_lower, "thm1", "formula"),
        "eq4_erasureCostUpper": _ann_energy(r.eq4_erasure_cost_upper, "eq4", "formula"),
        "eq6_fefUpper": _ann(r.eq6_fef_upper, "dimensionless", "eq6", "formula") if r.eq6_fef_upper is not None else None,
        "eq12_extractLower": _ann_energy(r.eq12_extract_lower, "eq12", "formula"),
        "thm2_applicable": r.thm2.applicable,
        "thm2_lambda": _ann(r.thm2.lambda_residual, "bits", "thm2", "formula"),
        "thm2_deltaEps": _ann(r.thm2.delta_eps, "bits", "thm2", "formula"),
        "thm2_wTotalApprox": _ann_energy(r.thm2.w_total_approx, "thm2", "formula"),
        "thm2_wErApprox": _ann_energy(r.thm2.w_er_approx, "thm2", "formula"),
        "thm2_errorBar": _ann_energy(r.thm2.error_bar, "thm2", "formula"),
    }
