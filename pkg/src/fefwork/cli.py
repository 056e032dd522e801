"""Command-line surface: state ingestion, reports, scans, pipelines, certify.

Exit codes: 0 success, 1 certify found violations, 2 input/usage error.
Every flag can be pre-set through an environment variable with the
``FEFWORK_`` prefix (e.g. ``FEFWORK_SEED=7``); explicit flags win.
Output for a fixed (seed, config) pair is byte-identical across runs.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from .bounds import (
    Energy,
    TemperatureScale,
    bounds_report,
    bounds_report_to_dict,
    eq4_bound,
    isotropic_fef,
    isotropic_thresholds,
    theorem1_bound,
)
from .certify import run_certify
from .entropy import entropy_report, smooth_min_entropy_lower
from .fef import fef_see_saw
from .linalg import ValidationError
from .process import (
    InvalidProcessError,
    NotApplicableError,
    build_fig1_pipeline,
    build_fig2_pipeline,
    replay,
)
from .qsdp import q_function
from .states import IsotropicParams, PureState, dump_state, load_state
from .twirl import singlet_overlap, twirl, twirl_work_cost

ENV_PREFIX = "FEFWORK_"
LN2 = math.log(2.0)


@dataclass(frozen=True)
class CliConfig:
    seed: int = 0
    restarts: int = 16
    tol_sdp: float = 1e-8
    epsilon: float = 0.05
    kbt: float = 1.0
    output_format: str = "json"
    sign_convention: str = "figure-consistent"

    def __post_init__(self):
        if not (0.0 < self.epsilon <= 0.5):
            raise ValidationError(f"epsilon must lie in (0, 0.5], got {self.epsilon}")
        if not self.tol_sdp > 0.0:
            raise ValidationError(f"tol must be positive, got {self.tol_sdp}")
        if self.restarts < 1:
            raise ValidationError(f"restarts must be >= 1, got {self.restarts}")

    @property
    def temperature(self) -> TemperatureScale:
        return TemperatureScale(self.kbt)


def _env(name: str, cast, fallback):
    raw = os.environ.get(ENV_PREFIX + name)
    if raw is None:
        return fallback
    try:
        return cast(raw)
    except ValueError as exc:
        raise ValidationError(f"bad value for {ENV_PREFIX}{name}: {raw!r}") from exc


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None, help="master RNG seed (default 0)")
    parser.add_argument("--restarts", type=_positive_int, default=None, help="see-saw restarts (default 16)")
    parser.add_argument("--tol", type=float, default=None, help="SDP duality-gap target (default 1e-8)")
    parser.add_argument("--epsilon", type=float, default=None, help="smoothing parameter in (0, 0.5] (default 0.05)")
    parser.add_argument("--kbt", type=float, default=None, help="energy scale kBT (default 1.0)")
    parser.add_argument("--format", choices=("json", "csv", "table"), default=None, help="output format")
    parser.add_argument(
        "--sign-convention",
        choices=("figure-consistent", "section2-literal"),
        default=None,
        help="level-shift work sign (default figure-consistent)",
    )


def _config_from_args(args) -> CliConfig:
    return CliConfig(
        seed=args.seed if args.seed is not None else _env("SEED", int, 0),
        restarts=args.restarts if args.restarts is not None else _env("RESTARTS", int, 16),
        tol_sdp=args.tol if args.tol is not None else _env("TOL", float, 1e-8),
        epsilon=args.epsilon if args.epsilon is not None else _env("EPSILON", float, 0.05),
        kbt=args.kbt if args.kbt is not None else _env("KBT", float, 1.0),
        output_format=args.format if args.format is not None else _env("FORMAT", str, "json"),
        sign_convention=(
            args.sign_convention if args.sign_convention is not None else _env("SIGN_CONVENTION", str, "figure-consistent")
        ),
    )


# ---------------------------------------------------------------------------
# output rendering
# ---------------------------------------------------------------------------

def _flatten(obj, prefix=""):
    """Flatten nested report dicts into (key, value, units, tag, provenance) rows."""
    rows = []
    if isinstance(obj, dict):
        if "value" in obj and ("units" in obj or "paper_eq" in obj):
            rows.append(
                (prefix, obj.get("value"), obj.get("units", ""), obj.get("paper_eq", ""), obj.get("provenance", ""))
            )
            return rows
        for key, val in obj.items():
            rows.extend(_flatten(val, f"{prefix}.{key}" if prefix else str(key)))
        return rows
    if isinstance(obj, (list, tuple)):
        for i, val in enumerate(obj):
            rows.extend(_flatten(val, f"{prefix}[{i}]"))
        return rows
    rows.append((prefix, obj, "", "plumbing", ""))
    return rows


def _fmt_cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)


def emit(obj, config: CliConfig, out) -> None:
    if config.output_format == "json":
        out.write(json.dumps(obj, indent=2, sort_keys=True))
        out.write("\n")
        return
    rows = _flatten(obj)
    if config.output_format == "csv":
        out.write(f"# energy values in kBT units, kBT = {config.kbt!r}\n")
        out.write("key,value,units,paper_eq,provenance\n")
        for row in rows:
            out.write(",".join(_fmt_cell(c) for c in row) + "\n")
        return
    width = max((len(r[0]) for r in rows), default=0)
    for key, value, units, tag, _ in rows:
        unit_str = f" {units}" if units else ""
        tag_str = f"  [{tag}]" if tag else ""
        out.write(f"{key.ljust(width)}  {_fmt_cell(value)}{unit_str}{tag_str}\n")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _cmd_report(args, config: CliConfig, out) -> int:
    state = load_state(args.state_file)
    report = bounds_report(
        state,
        t=config.temperature,
        epsilon=config.epsilon,
        restarts=config.restarts,
        tol_sdp=config.tol_sdp,
        seed=config.seed,
    )
    emit(bounds_report_to_dict(report), config, out)
    return 0


def _isotropic_entropy_bits(d: int, p: float) -> float:
    """Exact spectrum of the isotropic state: p + (1-p)/d^2 once, (1-p)/d^2 else."""
    d2 = d * d
    top = p + (1.0 - p) / d2
    rest = (1.0 - p) / d2
    s = 0.0
    if top > 0.0:
        s -= top * math.log2(top)
    if rest > 0.0:
        s -= (d2 - 1) * rest * math.log2(rest)
    return s


def _cmd_isotropic_scan(args, config: CliConfig, out) -> int:
    d = args.d
    lo = -1.0 / (d * d - 1)
    if not (lo - 1e-12 <= args.p_start <= 1.0 + 1e-12 and lo - 1e-12 <= args.p_stop <= 1.0 + 1e-12):
        raise ValidationError(f"p range must lie within [{lo:.6g}, 1]")
    t = config.temperature
    thresholds = isotropic_thresholds(d, t)
    if args.p_start == args.p_stop or args.steps == 1:
        ps = [args.p_start]
    else:
        ps = list(np.linspace(args.p_start, args.p_stop, args.steps))
    marks = (
        ("entanglement", thresholds.fef_entanglement),
        ("lhs-povm", thresholds.fef_lhs_povm),
        ("lhs-projective", thresholds.fef_lhs_projective),
    )
    rows = []
    for p in ps:
        p = float(p)
        fef = isotropic_fef(IsotropicParams(d, p))
        s = _isotropic_entropy_bits(d, p)
        s_cond = s - math.log2(d)
        thm1 = theorem1_bound(fef, d, t)
        crossed = ",".join(name for name, value in marks if fef >= value - 1e-12)
        rows.append(
            {
                "p": p,
                "F": fef,
                "S": s,
                "S_AgivenB": s_cond,
                "eq4": s_cond * LN2,
                "thm1": thm1.value_over_kbt if thm1 is not None else None,
                "eq12": math.log(d * d) - s * LN2,
                "thresholds_crossed": crossed,
            }
        )
    if config.output_format == "json":
        emit({"d": d, "kbt": config.kbt, "rows": rows}, config, out)
        return 0
    header = ["p", "F", "S", "S_AgivenB", "eq4", "thm1", "eq12", "thresholds_crossed"]
    out.write(f"# isotropic scan d={d}; energy columns in kBT units, kBT = {config.kbt!r}\n")
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(_fmt_cell(row[h]) if h != "thresholds_crossed" else f'"{row[h]}"' for h in header) + "\n")
    return 0


def _cmd_certify(args, config: CliConfig, out) -> int:
    summary = run_certify(
        args.d,
        args.samples,
        seed=config.seed,
        restarts=config.restarts,
        tol_sdp=config.tol_sdp,
        t=config.temperature,
    )
    emit(summary, config, out)
    return 1 if summary["violations"] else 0


def _pure_from_state(state) -> PureState:
    w, v = np.linalg.eigh(state.rho)
    if w[-1] < 1.0 - 1e-9:
        raise ValidationError(f"state is mixed (largest eigenvalue {w[-1]:.9f}); a pure state is required")
    vec = v[:, -1]
    return PureState(state.d, vec / np.linalg.norm(vec))


def _cmd_pipeline(args, config: CliConfig, out) -> int:
    state = load_state(args.state_file)
    t = config.temperature
    if args.figure == 1:
        fef = fef_see_saw(state, restarts=config.restarts, seed=config.seed)
        gain = theorem1_bound(fef.value, state.d, t)
        if gain is None:
            ent = entropy_report(state)
            gain = -eq4_bound(ent, t)
        spec = build_fig1_pipeline(state, gain, t)
    else:
        spec = build_fig2_pipeline(_pure_from_state(state), t)
    ledger = replay(spec, t, sign_convention=config.sign_convention)
    payload = ledger.to_dict()
    payload["figure"] = args.figure
    emit(payload, config, out)
    return 0


def _cmd_twirl(args, config: CliConfig, out) -> int:
    state = load_state(args.state_file)
    params = twirl(state)
    payload = {
        "d": params.d,
        "p": params.p,
        "singletOverlap": singlet_overlap(state),
        "fefTwirled": isotropic_fef(params),
    }
    w = np.linalg.eigvalsh(state.rho)
    if w[-1] >= 1.0 - 1e-9:
        cost = twirl_work_cost(_pure_from_state(state), config.temperature)
        payload["twirlWorkCost"] = cost.to_dict()
    if args.state_out:
        dump_state(params.to_state(), args.state_out)
        payload["stateOut"] = args.state_out
    emit(payload, config, out)
    return 0


def _cmd_minentropy(args, config: CliConfig, out) -> int:
    state = load_state(args.state_file)
    fef = fef_see_saw(state, restarts=config.restarts, seed=config.seed)
    q = q_function(state, tol=config.tol_sdp, seed=config.seed, fef_unitary=fef.optimal_u)
    ent = entropy_report(state)
    payload = q.to_dict()
    payload["hMinLowerSmooth"] = smooth_min_entropy_lower(state)
    payload["S_AgivenB"] = ent.s_a_given_b
    payload["fefLower"] = fef.value
    emit(payload, config, out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fefwork",
        description="entanglement-fraction, entropy, and erasure/extraction work bounds",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("report", help="full bounds report for one state file")
    p.add_argument("state_file")
    _add_common_flags(p)
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("isotropic-scan", help="sweep the isotropic family in p")
    p.add_argument("--d", type=_positive_int, default=2)
    p.add_argument("--p-start", type=float, default=0.0)
    p.add_argument("--p-stop", type=float, default=1.0)
    p.add_argument("--steps", type=_positive_int, default=11)
    _add_common_flags(p)
    p.set_defaults(func=_cmd_isotropic_scan)

    p = sub.add_parser("certify", help="run the property sweep on random states")
    p.add_argument("--d", type=_positive_int, default=2)
    p.add_argument("--samples", type=_positive_int, default=200)
    _add_common_flags(p)
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("pipeline", help="replay an extraction pipeline on a state")
    p.add_argument("state_file")
    p.add_argument("--figure", type=int, choices=(1, 2), required=True)
    _add_common_flags(p)
    p.set_defaults(func=_cmd_pipeline)

    p = sub.add_parser("twirl", help="project a state onto the isotropic family")
    p.add_argument("state_file")
    p.add_argument("--state-out", default=None, help="write the twirled state to this file")
    _add_common_flags(p)
    p.set_defaults(func=_cmd_twirl)

    p = sub.add_parser("minentropy", help="conditional min-entropy via the recovery-channel program")
    p.add_argument("state_file")
    _add_common_flags(p)
    p.set_defaults(func=_cmd_minentropy)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
        return args.func(args, config, sys.stdout)
    except (ValidationError, InvalidProcessError, NotApplicableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
