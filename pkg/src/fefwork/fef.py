"""Fully entangled fraction via see-saw over local unitaries.

Every maximally entangled state is (I (x) U)|Psi_d+> for a unitary U, which
under the package index convention is the length-d^2 vector
v(U)[(i, m)] = U[m, i] / sqrt(d).  The overlap v(U)^dag rho v(U) is a PSD
quadratic form in U, so the alternating update

    w = rho v(U);  W[m, i] = w[(i, m)];  U <- polar unitary factor of W

is non-decreasing in the objective (Cauchy-Schwarz for the PSD form) and
converges to a stationary point.  The returned value is therefore a
certified LOWER bound on the maximum; restarts guard against bad basins.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import ValidationError
from .states import BipartiteState, haar_unitary

DEFAULT_RESTARTS = 16
DEFAULT_MAX_ITER = 500
DEFAULT_TOL = 1e-10


def max_entangled_vector(u: np.ndarray, d: int) -> np.ndarray:
    """(I (x) U)|Psi_d+> as a flat vector: v[(i, m)] = U[m, i] / sqrt(d)."""
    return (u.T / np.sqrt(d)).reshape(d * d)


@dataclass(frozen=True)
class FefResult:
    value: float
    optimal_u: np.ndarray
    restarts_used: int
    converged: bool
    history: tuple  # objective per iteration of the winning start

    def recomputed_value(self, state: BipartiteState) -> float:
        v = max_entangled_vector(self.optimal_u, state.d)
        return float((v.conj() @ state.rho @ v).real)


def _polish(rho: np.ndarray, d: int, u: np.ndarray, max_iter: int, tol: float):
    """Run the monotone see-saw from one start; returns (value, U, converged, history)."""
    v = max_entangled_vector(u, d)
    f_prev = float((v.conj() @ rho @ v).real)
    history = [f_prev]
    converged = False
    for _ in range(max_iter):
        w = rho @ v
        wmat = w.reshape(d, d).T  # W[m, i] = w[(i, m)]
        if not np.any(wmat):
            converged = True  # rho v = 0: objective is 0 and cannot improve from here
            break
        a, _, bh = np.linalg.svd(wmat)
        u = a @ bh
        v = max_entangled_vector(u, d)
        f = float((v.conj() @ rho @ v).real)
        history.append(f)
        if f - f_prev < tol:
            converged = True
            break
        f_prev = f
    return history[-1], u, converged, tuple(history)


def fef_see_saw(
    state: BipartiteState,
    restarts: int = DEFAULT_RESTARTS,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: float = DEFAULT_TOL,
    seed=0,
) -> FefResult:
    """Best see-saw value over Haar-random starts plus the identity start.

    The identity start makes the plain |Psi_d+> overlap a guaranteed floor.
    Restart k uses an independent child seed of ``seed``; the reduction is
    max-by-value with ties broken by the lowest start index, so the result
    is identical however the restarts are scheduled.
    """
    if restarts < 1:
        raise ValidationError(f"restarts must be >= 1, got {restarts}")
    d = state.d
    rho = state.rho
    children = np.random.SeedSequence(seed).spawn(restarts)
    starts = [np.eye(d, dtype=complex)]
    starts += [haar_unitary(d, np.random.default_rng(c)) for c in children]
    best = None
    for idx, u0 in enumerate(starts):
        value, u, converged, history = _polish(rho, d, u0, max_iter, tol)
        if best is None or value > best[0]:
            best = (value, u, converged, history, idx)
    value, u, converged, history, _ = best
    return FefResult(
        value=value,
        optimal_u=u,
        restarts_used=restarts,
        converged=converged,
        history=history,
    )


def fef_monte_carlo(state: BipartiteState, samples: int, seed=0, chunk: int = 20000) -> float:
    """Max singlet overlap over Haar-random maximally entangled states.

    Brute-force oracle for the see-saw; the see-saw refines any sampled
    start, so this value never exceeds it beyond round-off.
    """
    if samples < 1:
        raise ValidationError(f"samples must be >= 1, got {samples}")
    d = state.d
    rho = state.rho
    rng = np.random.default_rng(seed)
    best = -np.inf
    remaining = samples
    while remaining > 0:
        n = min(chunk, remaining)
        remaining -= n
        z = (rng.standard_normal((n, d, d)) + 1j * rng.standard_normal((n, d, d))) / np.sqrt(2)
        q, r = np.linalg.qr(z)
        diag = np.einsum("sii->si", r)
        us = q * (diag / np.abs(diag))[:, None, :]
        vs = us.transpose(0, 2, 1).reshape(n, d * d) / np.sqrt(d)
        vals = np.einsum("si,ij,sj->s", vs.conj(), rho, vs).real
        best = max(best, float(vals.max()))
    return best
