"""Independent oracles used by the test suite.

Everything here is deliberately brute-force or closed-form and shares no
code path with the implementations it checks.
"""

import numpy as np

_MAGIC = np.array(
    [
        [1, 0, 0, 1],
        [1j, 0, 0, -1j],
        [0, 1j, 1j, 0],
        [0, 1, -1, 0],
    ],
    dtype=complex,
) / np.sqrt(2)  # rows: the magic basis kets in the computational basis


def fef_exact_two_qubit(rho) -> float:
    """Exact fully entangled fraction of a two-qubit state.

    Maximally entangled two-qubit states are exactly the real unit vectors
    in the magic basis, so the maximum overlap is the top eigenvalue of the
    real part of the state in that basis.
    """
    m = _MAGIC.conj() @ rho @ _MAGIC.T
    sym = (m.real + m.real.T) / 2
    return float(np.linalg.eigvalsh(sym)[-1])


def q_dual_grid_oracle(rho, tr_hi=2.4, n_diag=25, n_off=13, off_hi=0.6):
    """Coarse grid search of min{tr sigma : I (x) sigma >= rho} at d = 2.

    sigma = [[a, c + i s], [c - i s, b]] swept over a box; feasibility is an
    eigenvalue check.  Resolution: the diagonal spacing bounds how far the
    grid minimum can sit above the true one.
    """
    best = np.inf
    diag = np.linspace(0.0, tr_hi / 2, n_diag)
    off = np.linspace(-off_hi, off_hi, n_off)
    eye2 = np.eye(2)
    for a in diag:
        for b in diag:
            if a + b >= best:
                continue
            for c in off:
                for s in off:
                    sigma = np.array([[a, c + 1j * s], [c - 1j * s, b]])
                    z = np.kron(eye2, sigma) - rho
                    if np.linalg.eigvalsh(z)[0] >= -1e-12:
                        best = min(best, a + b)
    return float(best), float(diag[1] - diag[0])


def q_dual_ray_bisection(rho, d, t_hi=4.0, iters=80):
    """min tr over the isotropic ray sigma = t I: exact for twirl-invariant states."""
    eye = np.eye(d * d)

    def feasible(t):
        return np.linalg.eigvalsh(t * eye - rho)[0] >= 0.0

    lo, hi = 0.0, t_hi
    for _ in range(iters):
        mid = (lo + hi) / 2
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return float(d * hi)


def twirl_monte_carlo(rho, d, samples, rng):
    """Haar average of (U (x) U*) rho (U (x) U*)^dag by direct sampling."""
    acc = np.zeros_like(rho)
    for _ in range(samples):
        z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
        q, r = np.linalg.qr(z)
        u = q * (np.diag(r) / np.abs(np.diag(r)))
        w = np.kron(u, u.conj())
        acc = acc + w @ rho @ w.conj().T
    return acc / samples


def eig2_characteristic(a, c, z):
    """Roots of the characteristic polynomial of [[a, z], [conj(z), c]]."""
    tr = a + c
    det = a * c - abs(z) ** 2
    disc = np.sqrt(tr * tr - 4 * det)
    return sorted(((tr - disc) / 2, (tr + disc) / 2))


def isotropic_entropy_bits(d, p):
    """Entropy from the closed-form spectrum p + (1-p)/d^2, (1-p)/d^2 (x (d^2-1))."""
    d2 = d * d
    lams = [p + (1.0 - p) / d2] + [(1.0 - p) / d2] * (d2 - 1)
    return float(-sum(l * np.log2(l) for l in lams if l > 0))


def apply_channel_by_kraus(kraus, d, rho):
    """(I (x) E)(rho) built directly from Kraus operators."""
    out = np.zeros_like(rho)
    eye = np.eye(d)
    for a in kraus:
        x = np.kron(eye, a)
        out = out + x @ rho @ x.conj().T
    return out
