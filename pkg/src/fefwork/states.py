"""Bipartite state types, random-state generation, named families, and file I/O."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .linalg import (
    TOL_HERM,
    TOL_PSD,
    TOL_TRACE,
    ValidationError,
    as_complex_matrix,
    dagger,
    herm_defect,
    partial_trace_matrix,
)

PURE_NORM_TOL = 1e-12


def as_rng(seed) -> np.random.Generator:
    """Accept an int seed or an existing Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class BipartiteState:
    """Density matrix on C^d (x) C^d, validated Hermitian / unit-trace / PSD."""

    d: int
    rho: np.ndarray

    def __post_init__(self):
        if self.d < 2:
            raise ValidationError(f"local dimension must be >= 2, got {self.d}")
        rho = as_complex_matrix(self.rho)
        n = self.d * self.d
        if rho.shape != (n, n):
            raise ValidationError(f"rho must be {n} x {n} for d={self.d}, got {rho.shape}")
        defect = herm_defect(rho)
        if defect > TOL_HERM:
            raise ValidationError(f"rho is not Hermitian: max|rho - rho^dag| = {defect:.3e}")
        tr = complex(np.trace(rho))
        if abs(tr - 1.0) > TOL_TRACE:
            raise ValidationError(f"rho trace must be 1, got {tr:.12g}")
        wmin = float(np.linalg.eigvalsh((rho + dagger(rho)) / 2)[0])
        if wmin < -TOL_PSD:
            raise ValidationError(f"rho is not PSD: min eigenvalue {wmin:.3e}")
        object.__setattr__(self, "rho", _freeze(rho))

    def marginal(self, keep: str) -> np.ndarray:
        return partial_trace_matrix(self.rho, self.d, keep)


def partial_trace(state: BipartiteState, keep: str) -> np.ndarray:
    """Marginal rho_A or rho_B of a bipartite state."""
    return state.marginal(keep)


@dataclass(frozen=True)
class PureState:
    """Unit vector on C^d (x) C^d."""

    d: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex)
        if amp.shape != (self.d * self.d,):
            raise ValidationError(f"amplitudes must have length {self.d * self.d}, got {amp.shape}")
        if not np.all(np.isfinite(amp.real)) or not np.all(np.isfinite(amp.imag)):
            raise ValidationError("amplitudes have non-finite entries")
        norm = float(np.linalg.norm(amp))
        if abs(norm - 1.0) > PURE_NORM_TOL:
            raise ValidationError(f"amplitudes must be unit norm to {PURE_NORM_TOL:.0e}, got {norm!r}")
        object.__setattr__(self, "amplitudes", _freeze(amp))

    def to_density(self) -> BipartiteState:
        amp = self.amplitudes
        return BipartiteState(self.d, np.outer(amp, amp.conj()))


@dataclass(frozen=True)
class IsotropicParams:
    """(d, p) description of the state p |Psi_d+><Psi_d+| + (1 - p) I / d^2."""

    d: int
    p: float

    def __post_init__(self):
        lo = -1.0 / (self.d * self.d - 1)
        if not (lo - 1e-12 <= self.p <= 1.0 + 1e-12):
            raise ValidationError(f"p must lie in [{lo:.6g}, 1] for d={self.d}, got {self.p}")

    def fully_entangled_fraction(self) -> float:
        """Largest overlap with any maximally entangled state.

        Equals the operator norm of the state: the singlet branch
        p + (1-p)/d^2 for p >= 0 and the orthogonal branch (1-p)/d^2
        for p < 0 (where the best maximally entangled state avoids the
        singlet direction entirely).
        """
        d2 = self.d * self.d
        return max(self.p + (1.0 - self.p) / d2, (1.0 - self.p) / d2)

    def to_state(self) -> BipartiteState:
        return isotropic_state(self.d, self.p)


def singlet_vector(d: int) -> np.ndarray:
    """Generalized singlet |Psi_d+> = (1/sqrt(d)) sum_i |ii>."""
    v = np.zeros(d * d, dtype=complex)
    v[(np.arange(d) * d) + np.arange(d)] = 1.0 / np.sqrt(d)
    return v


def bell_state(d: int = 2) -> BipartiteState:
    v = singlet_vector(d)
    return BipartiteState(d, np.outer(v, v.conj()))


def maximally_mixed(d: int) -> BipartiteState:
    n = d * d
    return BipartiteState(d, np.eye(n, dtype=complex) / n)


def isotropic_state(d: int, p: float) -> BipartiteState:
    params = IsotropicParams(d, p)
    v = singlet_vector(d)
    n = d * d
    rho = params.p * np.outer(v, v.conj()) + (1.0 - params.p) * np.eye(n, dtype=complex) / n
    return BipartiteState(d, rho)


def haar_unitary(d: int, seed) -> np.ndarray:
    """Haar-distributed d x d unitary (QR of a Ginibre matrix with phase fix)."""
    rng = as_rng(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def random_pure_state(d: int, seed) -> PureState:
    rng = as_rng(seed)
    v = rng.standard_normal(d * d) + 1j * rng.standard_normal(d * d)
    return PureState(d, v / np.linalg.norm(v))


def random_state(d: int, rank: int, seed) -> BipartiteState:
    """Induced-measure random state: partial trace of a Haar pure state on C^(d^2) (x) C^rank."""
    n = d * d
    if not 1 <= rank <= n:
        raise ValidationError(f"rank must lie in [1, {n}], got {rank}")
    rng = as_rng(seed)
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    g /= np.linalg.norm(g)
    rho = g @ dagger(g)
    rho = (rho + dagger(rho)) / 2
    rho /= np.trace(rho).real
    return BipartiteState(d, rho)


def two_copies(state: BipartiteState) -> BipartiteState:
    """rho (x) rho regrouped as a bipartite state on (A1 A2) | (B1 B2).

    np.kron of the two copies orders factors as A1 B1 A2 B2; the axes are
    permuted so both Alice factors come first, matching the package index
    convention at local dimension d^2.
    """
    d = state.d
    r = np.kron(state.rho, state.rho)
    r = r.reshape(d, d, d, d, d, d, d, d).transpose(0, 2, 1, 3, 4, 6, 5, 7)
    n = d * d
    return BipartiteState(n, r.reshape(n * n, n * n))


# ---------------------------------------------------------------------------
# state-file JSON schema:
#   {"d": int, "matrix": [[re, im], ...]}       row-major d^2 x d^2 entries
#   {"family": "isotropic"|"bell"|"pure-haar", "d": int, "p": float?, "seed": int?}
# The matrix form round-trips bit-exactly.
# ---------------------------------------------------------------------------

def state_to_dict(state: BipartiteState) -> dict:
    flat = state.rho.reshape(-1)
    return {"d": state.d, "matrix": [[float(z.real), float(z.imag)] for z in flat]}


def state_from_dict(obj) -> BipartiteState:
    if not isinstance(obj, dict):
        raise ValidationError("state file must contain a JSON object")
    if "family" in obj:
        return _state_from_family(obj)
    try:
        d = int(obj["d"])
        pairs = obj["matrix"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"state object must carry 'd' and 'matrix': {exc}") from exc
    n = d * d
    if len(pairs) != n * n:
        raise ValidationError(f"matrix must list {n * n} [re, im] pairs, got {len(pairs)}")
    flat = np.array([complex(re, im) for re, im in pairs])
    return BipartiteState(d, flat.reshape(n, n))


def _state_from_family(obj: dict) -> BipartiteState:
    family = obj.get("family")
    try:
        d = int(obj["d"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError("family state object must carry an integer 'd'") from exc
    if family == "isotropic":
        if "p" not in obj:
            raise ValidationError("isotropic family requires 'p'")
        return isotropic_state(d, float(obj["p"]))
    if family == "bell":
        return bell_state(d)
    if family == "pure-haar":
        return random_pure_state(d, int(obj.get("seed", 0))).to_density()
    raise ValidationError(f"unknown state family {family!r}")


def load_state(path) -> BipartiteState:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"state file {path} is not valid JSON: {exc}") from exc
    return state_from_dict(obj)


def dump_state(state: BipartiteState, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_dict(state), fh)
        fh.write("\n")
