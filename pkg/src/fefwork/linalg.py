"""Dense complex-matrix primitives shared by every other module.

Index convention, binding for the whole package: a composite basis label
(i, m) with local dimension d maps to the flat index i*d + m, so the first
(Alice) factor is the slow index.  ``np.kron`` and row-major ``reshape``
follow this convention natively.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TOL_HERM = 1e-10
TOL_TRACE = 1e-10
TOL_PSD = 1e-10
TOL_RECON = 1e-9
EIG_CLAMP = 1e-10


class ValidationError(ValueError):
    """An input violated one of the documented invariants."""


def as_complex_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise ValidationError(f"expected a matrix, got array of ndim {m.ndim}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValidationError("matrix has non-finite entries")
    return m


def tensor(a, b) -> np.ndarray:
    """Kronecker product under the package index convention (first factor slow)."""
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def dagger(m) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def herm_defect(m) -> float:
    """max |m - m^dag|, the Hermiticity defect."""
    return float(np.abs(m - dagger(m)).max())


def is_hermitian(m, tol: float = TOL_HERM) -> bool:
    return herm_defect(m) <= tol


def hermitian_eigensystem(m, tol: float = TOL_HERM):
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.

    Raises ValidationError on non-Hermitian input; the reconstruction
    V diag(w) V^dag is checked against the input to 1e-9.
    """
    m = as_complex_matrix(m)
    if not is_hermitian(m, tol):
        raise ValidationError(
            f"matrix is not Hermitian: max|m - m^dag| = {herm_defect(m):.3e} > {tol:.1e}"
        )
    w, v = np.linalg.eigh((m + dagger(m)) / 2)
    recon = (v * w) @ dagger(v)
    err = float(np.abs(m - recon).max())
    if err > TOL_RECON:
        raise ValidationError(f"eigendecomposition reconstruction error {err:.3e} > {TOL_RECON:.1e}")
    return w, v


@dataclass(frozen=True)
class MatrixNorms:
    trace_norm: float  # sum of singular values
    hs_norm: float     # Frobenius / Hilbert-Schmidt
    op_norm: float     # largest singular value


def matrix_norms(m) -> MatrixNorms:
    m = as_complex_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValidationError("norms are defined here for square matrices only")
    s = np.linalg.svd(m, compute_uv=False)
    return MatrixNorms(float(s.sum()), float(np.sqrt((s * s).sum())), float(s[0]))


def trace_norm(m) -> float:
    return matrix_norms(m).trace_norm


def psd_sqrt(m) -> np.ndarray:
    """Square root of a PSD Hermitian matrix; eigenvalues in [-EIG_CLAMP, 0) clamp to 0."""
    w, v = np.linalg.eigh((m + dagger(m)) / 2)
    if w[0] < -EIG_CLAMP:
        raise ValidationError(f"matrix is not PSD: min eigenvalue {w[0]:.3e}")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ dagger(v)


def fidelity(rho, sigma) -> float:
    """Root fidelity tr sqrt(sqrt(rho) sigma sqrt(rho)) = ||sqrt(rho) sqrt(sigma)||_1."""
    rho = as_complex_matrix(rho)
    sigma = as_complex_matrix(sigma)
    if rho.shape != sigma.shape:
        raise ValidationError(f"dimension mismatch: {rho.shape} vs {sigma.shape}")
    s = np.linalg.svd(psd_sqrt(rho) @ psd_sqrt(sigma), compute_uv=False)
    return float(min(1.0, s.sum()))


@dataclass(frozen=True)
class StateDistances:
    fidelity: float
    trace_distance: float
    bures_distance: float


def fidelity_and_distances(rho, sigma) -> StateDistances:
    """Fidelity plus the two induced metrics: (1/2)||rho-sigma||_1 and sqrt(2-2F)."""
    f = fidelity(rho, sigma)
    td = 0.5 * trace_norm(np.asarray(rho) - np.asarray(sigma))
    bures = float(np.sqrt(max(0.0, 2.0 - 2.0 * f)))
    return StateDistances(f, min(1.0, td), bures)


def partial_trace_matrix(rho, d: int, keep: str) -> np.ndarray:
    """Marginal of a d^2 x d^2 matrix under the (i, m) -> i*d + m convention."""
    rho = as_complex_matrix(rho)
    if rho.shape != (d * d, d * d):
        raise ValidationError(f"expected a {d * d} x {d * d} matrix, got {rho.shape}")
    r4 = rho.reshape(d, d, d, d)
    if keep == "A":
        return np.einsum("imjm->ij", r4)
    if keep == "B":
        return np.einsum("imin->mn", r4)
    raise ValidationError(f"keep must be 'A' or 'B', got {keep!r}")
