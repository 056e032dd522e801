"""Typed actions, allowed-process validation, and the work-gain ledger.

The replayer walks a finite action sequence, tracking the system state and
Hamiltonian and booking per-action work gains.  It is a ledger/validator:
composite limit constructions (optimal erasure, isothermal extraction) enter
as declared-outcome actions carrying their stated work, never as integrated
dynamics.

Sign convention for level moves: the framework's literal definition books
the observer's gain for a level shift E -> E' as E' - E, yet the pipeline
ledgers only balance when lowering an occupied level pays the observer.
Both conventions are implemented; the default ``figure-consistent`` books
gain = -tr[rho (H' - H)], and ``section2-literal`` books the opposite sign.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import Energy, TemperatureScale
from .entropy import entropy_report
from .linalg import ValidationError, dagger, trace_norm
from .states import BipartiteState, PureState, state_from_dict, state_to_dict
from .twirl import twirl, twirl_work_cost

SIGN_CONVENTIONS = ("figure-consistent", "section2-literal")
DEGENERACY_TOL = 1e-12
CLASSIFY_TOL = 1e-8


class InvalidProcessError(ValueError):
    """The action sequence violates the allowed-process rules."""


class NotApplicableError(ValueError):
    """The requested construction's precondition fails for this input."""


@dataclass(frozen=True)
class HamiltonianSpec:
    """Diagonal system Hamiltonian: one level per basis state, in kBT units."""

    levels: np.ndarray

    def __post_init__(self):
        levels = np.asarray(self.levels, dtype=float)
        if levels.ndim != 1 or not np.all(np.isfinite(levels)):
            raise ValidationError("levels must be a finite 1-D array")
        levels = np.ascontiguousarray(levels)
        levels.setflags(write=False)
        object.__setattr__(self, "levels", levels)

    @property
    def degenerate(self) -> bool:
        return float(self.levels.max() - self.levels.min()) < DEGENERACY_TOL

    @classmethod
    def fully_degenerate(cls, dim: int, value: float = 0.0) -> "HamiltonianSpec":
        return cls(np.full(dim, value))


@dataclass(frozen=True)
class RaiseLower:
    new_levels: tuple

    kind = "raise-lower"


@dataclass(frozen=True)
class Thermalize:
    subsystem: str = "whole"
    temperature_kbt: float | None = None  # defaults to the ambient scale

    kind = "thermalize"

    def __post_init__(self):
        if self.subsystem not in ("A", "B", "whole"):
            raise ValidationError(f"thermalize subsystem must be A, B or whole, got {self.subsystem!r}")


@dataclass(frozen=True)
class UnitaryOp:
    """Selected-unitary action: declared work gain, success probability, and
    either an explicit unitary or a declared output state (for limit
    constructions the replay cannot integrate)."""

    description: str
    declared_work: float = 0.0  # kBT units, booked as observer gain
    success_prob: float = 1.0
    matrix: np.ndarray | None = None
    result_state: BipartiteState | None = None

    kind = "unitary"

    def __post_init__(self):
        if not (0.0 < self.success_prob <= 1.0):
            raise ValidationError(f"success probability must lie in (0, 1], got {self.success_prob}")
        if self.matrix is not None and self.result_state is not None:
            raise ValidationError("give either an explicit unitary or a declared result state, not both")


@dataclass(frozen=True)
class DeltaApprox:
    """Swap the tracked state for one within trace distance delta of it."""

    target: BipartiteState
    delta: float

    kind = "delta-approx"

    def __post_init__(self):
        if not (0.0 <= self.delta <= 1.0):
            raise ValidationError(f"delta must lie in [0, 1], got {self.delta}")


Action = RaiseLower | Thermalize | UnitaryOp | DeltaApprox


@dataclass(frozen=True)
class ProcessSpec:
    initial: BipartiteState
    actions: tuple
    hamiltonian: HamiltonianSpec | None = None

    def __post_init__(self):
        if len(self.actions) == 0:
            raise ValidationError("a process is a non-empty finite sequence of actions")
        dim = self.initial.d ** 2
        ham = self.hamiltonian or HamiltonianSpec.fully_degenerate(dim)
        if ham.levels.shape != (dim,):
            raise ValidationError(f"hamiltonian must carry {dim} levels, got {ham.levels.shape}")
        if not ham.degenerate:
            raise ValidationError("the initial Hamiltonian must be fully degenerate")
        object.__setattr__(self, "actions", tuple(self.actions))
        object.__setattr__(self, "hamiltonian", ham)


@dataclass(frozen=True)
class LedgerEntry:
    index: int
    kind: str
    description: str
    work: Energy


@dataclass(frozen=True)
class WorkLedger:
    per_action: tuple
    total: Energy
    success_prob: float
    classification: str
    final_state: BipartiteState

    def to_dict(self) -> dict:
        return {
            "classification": self.classification,
            "successProb": self.success_prob,
            "total": self.total.to_dict(),
            "perAction": [
                {"index": e.index, "kind": e.kind, "description": e.description, "work": e.work.to_dict()}
                for e in self.per_action
            ],
        }


def _split_levels(levels: np.ndarray, d: int):
    """Decompose levels[(i, m)] = a[i] + b[m]; error if the level structure
    does not factor across the cut (subsystem Gibbs is undefined then)."""
    grid = levels.reshape(d, d)
    a = grid.mean(axis=1)
    b = grid.mean(axis=0) - grid.mean()
    residual = float(np.abs(grid - (a[:, None] + b[None, :])).max())
    if residual > 1e-9:
        raise InvalidProcessError(
            f"levels do not split as a_i + b_m across the A|B cut (residual {residual:.3e}); "
            "subsystem thermalization is undefined"
        )
    return a, b


def _gibbs_diag(levels: np.ndarray, beta_ratio: float) -> np.ndarray:
    w = np.exp(-(levels - levels.min()) * beta_ratio)
    return w / w.sum()


def _zero_projector(d: int) -> np.ndarray:
    p = np.zeros((d, d), dtype=complex)
    p[0, 0] = 1.0
    return p


def replay(
    spec: ProcessSpec,
    t: TemperatureScale = TemperatureScale(),
    sign_convention: str = "figure-consistent",
    require_hamiltonian_restored: bool = True,
) -> WorkLedger:
    """Walk the actions in order, tracking state and Hamiltonian.

    Raises InvalidProcessError if the final Hamiltonian differs from the
    initial one (the allowed-process contract) unless the check is disabled
    for replaying a sub-chain.
    """
    if sign_convention not in SIGN_CONVENTIONS:
        raise ValidationError(f"unknown sign convention {sign_convention!r}")
    d = spec.initial.d
    dim = d * d
    rho = np.array(spec.initial.rho)
    levels = np.array(spec.hamiltonian.levels)
    initial_levels = levels.copy()
    entries = []
    success = 1.0

    for idx, action in enumerate(spec.actions):
        work = 0.0
        description = action.kind
        if isinstance(action, RaiseLower):
            new = np.asarray(action.new_levels, dtype=float)
            if new.shape != (dim,):
                raise InvalidProcessError(f"raise-lower must supply {dim} levels, got {new.shape}")
            shift = float(np.real(np.trace(rho @ np.diag(new - levels))))
            work = -shift if sign_convention == "figure-consistent" else shift
            levels = new
        elif isinstance(action, Thermalize):
            beta_ratio = t.kbt / (action.temperature_kbt if action.temperature_kbt is not None else t.kbt)
            if action.subsystem == "whole":
                rho = np.diag(_gibbs_diag(levels, beta_ratio)).astype(complex)
            else:
                a, b = _split_levels(levels, d)
                if action.subsystem == "A":
                    g = np.diag(_gibbs_diag(a, beta_ratio)).astype(complex)
                    other = BipartiteState(d, (rho + dagger(rho)) / 2).marginal("B")
                    rho = np.kron(g, other)
                else:
                    g = np.diag(_gibbs_diag(b, beta_ratio)).astype(complex)
                    other = BipartiteState(d, (rho + dagger(rho)) / 2).marginal("A")
                    rho = np.kron(other, g)
            description = f"thermalize {action.subsystem}"
        elif isinstance(action, UnitaryOp):
            if action.matrix is not None:
                u = np.asarray(action.matrix, dtype=complex)
                if u.shape != (dim, dim):
                    raise InvalidProcessError(f"unitary must be {dim} x {dim}, got {u.shape}")
                if np.abs(u @ dagger(u) - np.eye(dim)).max() > 1e-9:
                    raise InvalidProcessError("unitary action matrix is not unitary")
                rho = u @ rho @ dagger(u)
            elif action.result_state is not None:
                if action.result_state.d != d:
                    raise InvalidProcessError("declared result state has the wrong dimension")
                rho = np.array(action.result_state.rho)
            work = action.declared_work
            success *= action.success_prob
            description = action.description
        elif isinstance(action, DeltaApprox):
            if action.target.d != d:
                raise InvalidProcessError("delta-approx target has the wrong dimension")
            dist = 0.5 * trace_norm(rho - action.target.rho)
            if dist > action.delta + 1e-9:
                raise InvalidProcessError(
                    f"delta-approx target is at trace distance {dist:.6g} > delta = {action.delta}"
                )
            rho = np.array(action.target.rho)
            success *= 1.0 - action.delta
            description = f"delta-approx (delta={action.delta})"
        else:
            raise InvalidProcessError(f"unknown action type {type(action).__name__}")
        entries.append(LedgerEntry(idx, action.kind, description, Energy(work, t.kbt)))

    if require_hamiltonian_restored and np.abs(levels - initial_levels).max() > DEGENERACY_TOL:
        raise InvalidProcessError("final Hamiltonian differs from the initial one")

    total = Energy(math.fsum(e.work.value_over_kbt for e in entries), t.kbt)
    final = BipartiteState(d, (rho + dagger(rho)) / 2)
    return WorkLedger(
        per_action=tuple(entries),
        total=total,
        success_prob=success,
        classification=_classify(spec.initial, final),
        final_state=final,
    )


def _classify(initial: BipartiteState, final: BipartiteState) -> str:
    d = initial.d
    erased = np.kron(_zero_projector(d), initial.marginal("B"))
    if np.abs(final.rho - erased).max() <= CLASSIFY_TOL:
        return "erasure-on-A"
    mixed = np.eye(d * d, dtype=complex) / (d * d)
    if np.abs(final.rho - mixed).max() <= CLASSIFY_TOL:
        return "work-extraction"
    return "other"


def build_fig1_pipeline(
    state: BipartiteState,
    erasure_work: Energy,
    t: TemperatureScale = TemperatureScale(),
) -> ProcessSpec:
    """Three-arrow extraction pipeline: erase one side, extract from the kept
    marginal, then extract from the reset register.

    The erased side is the one with the LARGER marginal entropy, so the kept
    side realizes S_min; total work is then
    kBT ln d^2 - S_min kBT ln2 + erasure_work by construction.
    """
    d = state.d
    ent = entropy_report(state)
    erase_a = ent.s_b <= ent.s_a  # keep the lower-entropy marginal
    kept = state.marginal("B") if erase_a else state.marginal("A")
    s_kept = ent.s_b if erase_a else ent.s_a
    zero = _zero_projector(d)
    eye_over_d = np.eye(d, dtype=complex) / d

    def pair(register, other):
        return np.kron(register, other) if erase_a else np.kron(other, register)

    side = "A" if erase_a else "B"
    other_side = "B" if erase_a else "A"
    actions = (
        UnitaryOp(
            f"local erasure on {side} (declared optimal-limit work)",
            declared_work=erasure_work.value_over_kbt * erasure_work.kbt / t.kbt,
            result_state=BipartiteState(d, pair(zero, kept)),
        ),
        UnitaryOp(
            f"extraction on {other_side}: reset marginal to maximally mixed",
            declared_work=(math.log2(d) - s_kept) * math.log(2.0),
            result_state=BipartiteState(d, pair(zero, eye_over_d)),
        ),
        UnitaryOp(
            f"extraction on {side} register",
            declared_work=math.log(d),
            result_state=BipartiteState(d, np.eye(d * d, dtype=complex) / (d * d)),
        ),
    )
    return ProcessSpec(initial=state, actions=actions)


def build_fig2_pipeline(phi: PureState, t: TemperatureScale = TemperatureScale()) -> ProcessSpec:
    """Twirl a pure state onto the isotropic line, then run the erasure-led
    extraction tail; the twirl cost cancels against the erasure gain, so the
    replayed total is kBT ln d^2 for every applicable input."""
    d = phi.d
    params = twirl(phi.to_density())
    fef_twirled = params.fully_entangled_fraction()
    if fef_twirled <= 1.0 / d:
        raise NotApplicableError(
            f"twirled state has entanglement fraction {fef_twirled:.6g} <= 1/d = {1 / d:.6g}; "
            "the erasure stage's strict threshold fails"
        )
    twirled = params.to_state()
    cost = twirl_work_cost(phi, t)
    tail = build_fig1_pipeline(twirled, Energy(math.log(fef_twirled * d), t.kbt), t)
    twirl_action = UnitaryOp(
        "twirl onto the isotropic family",
        declared_work=-cost.value_over_kbt,
        result_state=twirled,
    )
    return ProcessSpec(initial=phi.to_density(), actions=(twirl_action,) + tail.actions)


# ---------------------------------------------------------------------------
# JSON forms
# ---------------------------------------------------------------------------

def _matrix_pairs(m: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(m).reshape(-1)]


def _matrix_from_pairs(pairs, dim: int) -> np.ndarray:
    flat = np.array([complex(re, im) for re, im in pairs])
    if flat.size != dim * dim:
        raise ValidationError(f"matrix must list {dim * dim} [re, im] pairs, got {flat.size}")
    return flat.reshape(dim, dim)


def action_to_dict(action: Action) -> dict:
    if isinstance(action, RaiseLower):
        return {"kind": action.kind, "new_levels": [float(x) for x in action.new_levels]}
    if isinstance(action, Thermalize):
        out = {"kind": action.kind, "subsystem": action.subsystem}
        if action.temperature_kbt is not None:
            out["temperature_kbt"] = action.temperature_kbt
        return out
    if isinstance(action, UnitaryOp):
        out = {
            "kind": action.kind,
            "description": action.description,
            "declared_work": action.declared_work,
            "success_prob": action.success_prob,
        }
        if action.matrix is not None:
            out["matrix"] = _matrix_pairs(action.matrix)
        if action.result_state is not None:
            out["result_state"] = state_to_dict(action.result_state)
        return out
    if isinstance(action, DeltaApprox):
        return {"kind": action.kind, "target": state_to_dict(action.target), "delta": action.delta}
    raise ValidationError(f"unknown action type {type(action).__name__}")


def action_from_dict(obj: dict, d: int) -> Action:
    kind = obj.get("kind")
    if kind == "raise-lower":
        return RaiseLower(tuple(float(x) for x in obj["new_levels"]))
    if kind == "thermalize":
        return Thermalize(obj.get("subsystem", "whole"), obj.get("temperature_kbt"))
    if kind == "unitary":
        matrix = None
        if "matrix" in obj:
            matrix = _matrix_from_pairs(obj["matrix"], d * d)
        result = state_from_dict(obj["result_state"]) if "result_state" in obj else None
        return UnitaryOp(
            obj.get("description", "unitary"),
            declared_work=float(obj.get("declared_work", 0.0)),
            success_prob=float(obj.get("success_prob", 1.0)),
            matrix=matrix,
            result_state=result,
        )
    if kind == "delta-approx":
        return DeltaApprox(state_from_dict(obj["target"]), float(obj["delta"]))
    raise ValidationError(f"unknown action kind {kind!r}")


def process_spec_to_dict(spec: ProcessSpec) -> dict:
    return {
        "initial": state_to_dict(spec.initial),
        "hamiltonian": {"levels": [float(x) for x in spec.hamiltonian.levels]},
        "actions": [action_to_dict(a) for a in spec.actions],
    }


def process_spec_from_dict(obj: dict, loader=None) -> ProcessSpec:
    """Parse a process file; ``initial`` may be an inline state object or a
    path string resolved through ``loader``."""
    init_obj = obj.get("initial")
    if isinstance(init_obj, str):
        if loader is None:
            raise ValidationError("initial state given as a path but no loader provided")
        initial = loader(init_obj)
    else:
        initial = state_from_dict(init_obj)
    ham = None
    if "hamiltonian" in obj:
        ham = HamiltonianSpec(np.asarray(obj["hamiltonian"]["levels"], dtype=float))
    actions = tuple(action_from_dict(a, initial.d) for a in obj.get("actions", []))
    return ProcessSpec(initial=initial, actions=actions, hamiltonian=ham)
