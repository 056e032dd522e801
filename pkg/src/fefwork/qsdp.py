"""Conditional min-entropy semidefinite program.

The quantity computed here is the best singlet overlap achievable by a
local recovery channel on Bob,

    Q = max over CPTP E of <Psi_d+| (I (x) E)(rho) |Psi_d+>,

with the conditional min-entropy given by H_min(A|B) = -log2(Q d).

Solved in the standard dual form

    minimize tr sigma  subject to  I (x) sigma >= rho,   Q = (min tr sigma)/d,

which has d^2 real degrees of freedom instead of the Choi form's d^4.  The
dual is driven down a log-barrier central path (mu halved from 1, damped
Newton with backtracking); every iterate is strictly feasible, so tr sigma/d
is a certified upper bound on Q at any point.  A feasible channel -- hence a
certified lower bound -- is recovered two ways: the barrier multiplier
Y = mu (I (x) sigma - rho)^(-1) renormalized onto the trace constraint, and a
monotone see-saw over Stinespring isometries seeded from the identity
channel, the renormalized multiplier, and (optionally) the unitary found by
the entanglement-fraction optimizer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import ValidationError, dagger
from .states import BipartiteState, singlet_vector

CHOI_PSD_TOL = 1e-9
CHOI_TP_TOL = 1e-8
DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class ChannelChoi:
    """Choi matrix of a channel, J[(i, a), (j, b)] = <a| E(|i><j|) |b> (input slow)."""

    d_in: int
    d_out: int
    j: np.ndarray

    def __post_init__(self):
        n = self.d_in * self.d_out
        j = np.asarray(self.j, dtype=complex)
        if j.shape != (n, n):
            raise ValidationError(f"Choi matrix must be {n} x {n}, got {j.shape}")
        wmin = float(np.linalg.eigvalsh((j + dagger(j)) / 2)[0])
        if wmin < -CHOI_PSD_TOL:
            raise ValidationError(f"Choi matrix is not PSD: min eigenvalue {wmin:.3e}")
        tr_out = np.einsum("iaja->ij", j.reshape(self.d_in, self.d_out, self.d_in, self.d_out))
        defect = float(np.abs(tr_out - np.eye(self.d_in)).max())
        if defect > CHOI_TP_TOL:
            raise ValidationError(f"channel is not trace preserving: defect {defect:.3e}")
        object.__setattr__(self, "j", j)

    def apply(self, x: np.ndarray) -> np.ndarray:
        """E(x) = tr_in[J (x^T (x) I_out)]."""
        j4 = self.j.reshape(self.d_in, self.d_out, self.d_in, self.d_out)
        return np.einsum("iajb,ij->ab", j4, np.asarray(x, dtype=complex))

    def kraus(self) -> list:
        """Kraus operators from the eigendecomposition of J."""
        w, v = np.linalg.eigh((self.j + dagger(self.j)) / 2)
        ops = []
        for lam, vec in zip(w, v.T):
            if lam < 1e-14:
                continue
            a = np.sqrt(lam) * vec.reshape(self.d_in, self.d_out).T  # A[a, i] = sqrt(lam) v[(i, a)]
            ops.append(a)
        return ops


def choi_from_kraus(kraus, d_in: int, d_out: int) -> ChannelChoi:
    j = np.zeros((d_in * d_out, d_in * d_out), dtype=complex)
    for a in kraus:
        vec = np.asarray(a, dtype=complex).T.reshape(-1)  # vec[(i, a)] = A[a, i]
        j += np.outer(vec, vec.conj())
    return ChannelChoi(d_in, d_out, j)


def choi_from_unitary(u: np.ndarray) -> ChannelChoi:
    d = u.shape[0]
    return choi_from_kraus([u], d, d)


@dataclass(frozen=True)
class QResult:
    """Certified two-sided bracket on Q plus the min-entropy it implies.

    ``q_primal`` comes from an explicit feasible channel (lower bound),
    ``q_dual`` from a feasible dual point (upper bound); ``h_min`` is taken
    from the dual side, which is the conservative direction for every
    inequality downstream.
    """

    q_primal: float
    q_dual: float
    h_min: float
    gap: float
    choi: ChannelChoi

    def to_dict(self) -> dict:
        return {
            "qPrimal": self.q_primal,
            "qDual": self.q_dual,
            "hMin": self.h_min,
            "gap": self.gap,
        }


def _hermitian_basis(d: int) -> np.ndarray:
    basis = []
    for i in range(d):
        m = np.zeros((d, d), dtype=complex)
        m[i, i] = 1.0
        basis.append(m)
    inv_sqrt2 = 1.0 / np.sqrt(2)
    for i in range(d):
        for j in range(i + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[i, j] = m[j, i] = inv_sqrt2
            basis.append(m)
            m = np.zeros((d, d), dtype=complex)
            m[i, j] = -1j * inv_sqrt2
            m[j, i] = 1j * inv_sqrt2
            basis.append(m)
    return np.array(basis)


class BarrierFailure(RuntimeError):
    pass


def _dual_barrier(rho: np.ndarray, d: int, tol: float):
    """Log-barrier Newton descent on min{tr sigma : I (x) sigma >= rho}.

    Returns (sigma, Y) where sigma is the final strictly feasible dual
    iterate and Y the renormalized barrier multiplier (a feasible point of
    the channel-side program: Y >= 0, tr_A Y = I).
    """
    basis = _hermitian_basis(d)
    nb = len(basis)
    eye_d = np.eye(d)
    op_norm = float(np.linalg.eigvalsh(rho)[-1])
    sigma = (op_norm + 0.1) * np.eye(d, dtype=complex)
    mu = 1.0
    mu_floor = max(tol / (8.0 * d), 1e-12)

    def z_of(s):
        return np.kron(eye_d, s) - rho

    def barrier_value(s, m):
        z = z_of(s)
        try:
            chol = np.linalg.cholesky(z)
        except np.linalg.LinAlgError:
            return None
        return float(np.trace(s).real) - m * 2.0 * float(np.log(np.diag(chol).real).sum())

    for _outer in range(200):
        for _newton in range(60):
            z = z_of(sigma)
            try:
                np.linalg.cholesky(z)
            except np.linalg.LinAlgError as exc:
                raise BarrierFailure("iterate left the feasible cone") from exc
            p = np.linalg.inv(z)
            p4 = p.reshape(d, d, d, d)
            grad_mat = eye_d - mu * np.einsum("iaib->ab", p4)
            g = np.einsum("ij,kji->k", grad_mat, basis).real
            t4 = np.einsum("iajb,jcie->abce", p4, p4)
            hess = mu * np.einsum("abce,kbc,lea->kl", t4, basis, basis).real
            hess = hess + (1e-10 * max(1.0, float(np.abs(hess).max()))) * np.eye(nb)
            try:
                step = np.linalg.solve(hess, -g)
            except np.linalg.LinAlgError as exc:
                raise BarrierFailure("singular Newton system") from exc
            decrement = float(-g @ step)
            delta = np.einsum("k,kij->ij", step, basis)
            f_cur = barrier_value(sigma, mu)
            t = 1.0
            for _ in range(60):
                f_new = barrier_value(sigma + t * delta, mu)
                if f_new is not None and f_new <= f_cur - 0.25 * t * decrement:
                    break
                t *= 0.5
            else:
                break
            sigma = sigma + t * delta
            if decrement < 1e-15 * max(1.0, abs(f_cur)):
                break
        if mu <= mu_floor:
            break
        mu *= 0.5

    z = z_of(sigma)
    y = mu * np.linalg.inv(z)
    c = np.einsum("iaib->ab", y.reshape(d, d, d, d))
    w, v = np.linalg.eigh((c + dagger(c)) / 2)
    if w[0] <= 0:
        raise BarrierFailure("multiplier lost positivity")
    c_inv_sqrt = (v / np.sqrt(w)) @ dagger(v)
    y = np.kron(eye_d, c_inv_sqrt) @ y @ np.kron(eye_d, c_inv_sqrt)
    return sigma, (y + dagger(y)) / 2


def _choi_from_primal_var(y: np.ndarray, d: int) -> ChannelChoi:
    """Channel whose action realizes tr(rho Y)/d as its singlet overlap.

    Y relates to the Choi matrix of the recovery channel E through
    Y = d (I (x) E^dag)(|Psi_d+><Psi_d+|), which entrywise reads
    J(E)[(a, i), (b, j)] = conj(Y[(i, a), (j, b)]).
    """
    j = y.reshape(d, d, d, d).transpose(1, 0, 3, 2).conj().reshape(d * d, d * d)
    j = (j + dagger(j)) / 2
    # round away the tiny PSD / trace-preservation defects of the numerical multiplier
    w, v = np.linalg.eigh(j)
    j = (v * np.clip(w, 0.0, None)) @ dagger(v)
    tr_out = np.einsum("iaja->ij", j.reshape(d, d, d, d))
    wto, vto = np.linalg.eigh((tr_out + dagger(tr_out)) / 2)
    fix = (vto / np.sqrt(np.clip(wto, 1e-300, None))) @ dagger(vto)
    j = np.kron(fix, np.eye(d)) @ j @ np.kron(fix, np.eye(d))
    return ChannelChoi(d, d, (j + dagger(j)) / 2)


def channel_objective(state: BipartiteState, choi: ChannelChoi) -> float:
    """<Psi_d+| (I (x) E)(rho) |Psi_d+> for the channel described by ``choi``."""
    d = state.d
    rho4 = state.rho.reshape(d, d, d, d)
    j4 = choi.j.reshape(d, d, d, d)
    # (I (x) E)(rho)[(i, a), (j, b)] = sum_{m n} rho[(i, m), (j, n)] J[(m, a), (n, b)]
    out = np.einsum("imjn,manb->iajb", rho4, j4).reshape(d * d, d * d)
    psi = singlet_vector(d)
    return float((psi.conj() @ out @ psi).real)


def _stinespring_objective(rho4, v_iso, d: int, k: int) -> float:
    a_ops = v_iso.reshape(d, k, d)
    g = np.einsum("iem,imbn->ben", a_ops, rho4) / d
    return float(np.einsum("ben,ben->", g, a_ops.conj()).real)


def _kraus_see_saw(rho4, d: int, v0: np.ndarray, max_iter: int = 400, tol: float = 1e-14):
    """Monotone polar iteration maximizing the singlet overlap over isometries.

    The objective is a PSD quadratic form in the Stinespring isometry
    V : C^d -> C^d (x) C^k, so replacing V by the polar isometry factor of
    the gradient never decreases it (same argument as the entanglement-
    fraction see-saw).
    """
    k = v0.shape[0] // d
    v = v0
    f_prev = _stinespring_objective(rho4, v, d, k)
    for _ in range(max_iter):
        a_ops = v.reshape(d, k, d)
        g = np.einsum("iem,imbn->ben", a_ops, rho4) / d
        gmat = g.reshape(d * k, d)
        uu, _, vh = np.linalg.svd(gmat, full_matrices=False)
        v = uu @ vh
        f = _stinespring_objective(rho4, v, d, k)
        if f - f_prev < tol:
            break
        f_prev = f
    return max(f, f_prev), v


def _stinespring_from_kraus(kraus, d: int) -> np.ndarray:
    k = max(1, len(kraus))
    v = np.zeros((d, k, d), dtype=complex)
    for e, a in enumerate(kraus):
        v[:, e, :] = a
    return v.reshape(d * k, d)


def q_function(state: BipartiteState, tol: float = DEFAULT_TOL, seed=0, fef_unitary=None) -> QResult:
    """Two-sided solve of the recovery-channel program.

    ``fef_unitary``, when given, seeds the primal search with the adjoint
    unitary channel, guaranteeing q_primal at least matches the overlap
    that unitary achieves.  A barrier failure is reported as a widened gap,
    never an exception.
    """
    d = state.d
    rho = state.rho
    rho4 = rho.reshape(d, d, d, d)
    psi = singlet_vector(d)

    candidates = []  # (objective value, choi or None)

    identity_choi = choi_from_unitary(np.eye(d, dtype=complex))
    base_overlap = float((psi.conj() @ rho @ psi).real)
    candidates.append((base_overlap, identity_choi))
    if fef_unitary is not None:
        fef_choi = choi_from_unitary(dagger(np.asarray(fef_unitary, dtype=complex)))
        candidates.append((channel_objective(state, fef_choi), fef_choi))

    try:
        sigma, y = _dual_barrier(rho, d, tol)
        q_dual = float(np.trace(sigma).real) / d
        path_choi = _choi_from_primal_var(y, d)
        candidates.append((channel_objective(state, path_choi), path_choi))
        barrier_ok = True
    except BarrierFailure:
        op_norm = float(np.linalg.eigvalsh(rho)[-1])
        q_dual = float(np.trace((op_norm + 0.1) * np.eye(d)).real) / d
        barrier_ok = False

    # see-saw polish from every candidate channel plus one random isometry
    rng = np.random.default_rng(seed)
    starts = [_stinespring_from_kraus(choi.kraus(), d) for _, choi in candidates]
    z = rng.standard_normal((d * d, d)) + 1j * rng.standard_normal((d * d, d))
    q_start, _ = np.linalg.qr(z)
    starts.append(q_start)
    best_v = None
    best_val = -np.inf
    for v0 in starts:
        val, v = _kraus_see_saw(rho4, d, v0)
        if val > best_val:
            best_val, best_v = val, v

    k = best_v.shape[0] // d
    a_stack = best_v.reshape(d, k, d)
    polished_choi = choi_from_kraus([a_stack[:, e, :] for e in range(k)], d, d)
    candidates.append((channel_objective(state, polished_choi), polished_choi))

    # every candidate is a genuinely feasible channel, so the max is a valid lower bound
    q_primal, best_choi = max(candidates, key=lambda t: t[0])
    if not barrier_ok:
        q_dual = max(q_dual, q_primal)

    return QResult(
        q_primal=q_primal,
        q_dual=q_dual,
        h_min=float(-np.log2(q_dual * d)),
        gap=q_dual - q_primal,
        choi=best_choi,
    )
