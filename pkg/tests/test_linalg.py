import numpy as np
import pytest

from fefwork.linalg import (
    ValidationError,
    fidelity_and_distances,
    hermitian_eigensystem,
    matrix_norms,
    partial_trace_matrix,
    tensor,
    trace_norm,
)
from fefwork.states import bell_state, random_state

from oracles import eig2_characteristic


def _rand_complex(rng, n, m=None):
    m = n if m is None else m
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))


def test_tensor_identity():
    assert np.array_equal(tensor(np.eye(2), np.eye(2)), np.eye(4))


def test_tensor_basis_projectors():
    a = np.diag([1.0, 0.0])
    b = np.diag([0.0, 1.0])
    assert np.array_equal(tensor(a, b), np.diag([0.0, 1.0, 0.0, 0.0]))


def test_tensor_mixed_product_rule():
    rng = np.random.default_rng(0)
    for _ in range(20):
        a, b, c, d = (_rand_complex(rng, 2) for _ in range(4))
        lhs = tensor(a, b) @ tensor(c, d)
        rhs = tensor(a @ c, b @ d)
        assert np.abs(lhs - rhs).max() < 1e-12


def test_partial_trace_bell_marginal():
    rho_a = partial_trace_matrix(bell_state(2).rho, 2, "A")
    assert np.abs(rho_a - np.eye(2) / 2).max() < 1e-12


def test_partial_trace_product_state():
    rng = np.random.default_rng(1)
    a = _rand_complex(rng, 2)
    a = a @ a.conj().T
    a /= np.trace(a).real
    b = _rand_complex(rng, 2)
    b = b @ b.conj().T
    b /= np.trace(b).real
    assert np.abs(partial_trace_matrix(tensor(a, b), 2, "A") - a).max() < 1e-12
    assert np.abs(partial_trace_matrix(tensor(a, b), 2, "B") - b).max() < 1e-12


def test_partial_trace_index_sum_oracle():
    rng = np.random.default_rng(2)
    for d in (2, 3):
        rho = random_state(d, d * d, rng).rho
        got = partial_trace_matrix(rho, d, "A")
        assert abs(np.trace(got) - 1.0) < 1e-12
        for x in range(d):
            for y in range(d):
                expected = sum(rho[x * d + m, y * d + m] for m in range(d))
                assert abs(got[x, y] - expected) < 1e-13
        got_b = partial_trace_matrix(rho, d, "B")
        assert abs(np.trace(got_b) - 1.0) < 1e-12


def test_eigensystem_identity_and_diag():
    w, _ = hermitian_eigensystem(np.eye(4))
    assert np.abs(w - 1.0).max() < 1e-12
    w, _ = hermitian_eigensystem(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(w, [1.0, 2.0, 3.0])


def test_eigensystem_reconstruction_and_orthonormality():
    rng = np.random.default_rng(3)
    for n in (2, 4, 9):
        m = _rand_complex(rng, n)
        m = m + m.conj().T
        w, v = hermitian_eigensystem(m)
        assert np.abs(m - (v * w) @ v.conj().T).max() < 1e-9
        assert np.abs(v.conj().T @ v - np.eye(n)).max() < 1e-9


def test_eigensystem_quadratic_formula_oracle():
    rng = np.random.default_rng(4)
    for _ in range(25):
        a, c = rng.standard_normal(2)
        z = complex(rng.standard_normal(), rng.standard_normal())
        m = np.array([[a, z], [np.conj(z), c]])
        w, _ = hermitian_eigensystem(m)
        expected = eig2_characteristic(a, c, z)
        assert np.abs(w - expected).max() < 1e-10


def test_eigensystem_rejects_non_hermitian():
    with pytest.raises(ValidationError):
        hermitian_eigensystem(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_norms_diag_case():
    n = matrix_norms(np.diag([1.0, -2.0]))
    assert abs(n.trace_norm - 3.0) < 1e-12
    assert abs(n.hs_norm - np.sqrt(5.0)) < 1e-12
    assert abs(n.op_norm - 2.0) < 1e-12


def test_norms_unitary_invariants():
    from fefwork.states import haar_unitary

    u = haar_unitary(4, 5)
    n = matrix_norms(u)
    assert abs(n.op_norm - 1.0) < 1e-10
    assert abs(n.hs_norm - 2.0) < 1e-10


def test_norms_singular_value_oracle():
    rng = np.random.default_rng(6)
    for _ in range(30):
        m = _rand_complex(rng, 4)
        s = np.linalg.svd(m, compute_uv=False)
        n = matrix_norms(m)
        assert abs(n.trace_norm - s.sum()) < 1e-10
        assert n.hs_norm <= n.trace_norm + 1e-12
        assert n.op_norm <= n.hs_norm + 1e-12


def test_fidelity_self():
    rho = random_state(2, 3, 7).rho
    d = fidelity_and_distances(rho, rho)
    assert abs(d.fidelity - 1.0) < 1e-9
    assert d.trace_distance < 1e-9
    assert d.bures_distance < 2e-5  # sqrt amplifies the fidelity round-off


def test_fidelity_orthogonal_pure():
    v1 = np.zeros(4)
    v1[0] = 1.0
    v2 = np.zeros(4)
    v2[1] = 1.0
    d = fidelity_and_distances(np.outer(v1, v1), np.outer(v2, v2))
    assert abs(d.fidelity) < 1e-12
    assert abs(d.trace_distance - 1.0) < 1e-12
    assert abs(d.bures_distance - np.sqrt(2.0)) < 1e-12


def test_fidelity_pure_overlap_oracle():
    rng = np.random.default_rng(8)
    for _ in range(20):
        v1 = _rand_complex(rng, 4, 1)[:, 0]
        v1 /= np.linalg.norm(v1)
        v2 = _rand_complex(rng, 4, 1)[:, 0]
        v2 /= np.linalg.norm(v2)
        d = fidelity_and_distances(np.outer(v1, v1.conj()), np.outer(v2, v2.conj()))
        assert abs(d.fidelity - abs(np.vdot(v1, v2))) < 1e-9


def test_fidelity_dimension_mismatch():
    with pytest.raises(ValidationError):
        fidelity_and_distances(np.eye(2) / 2, np.eye(4) / 4)


def test_norm_chain_on_random_pairs():
    rng = np.random.default_rng(9)
    for _ in range(100):
        rho = random_state(2, int(rng.integers(1, 5)), rng).rho
        sigma = random_state(2, int(rng.integers(1, 5)), rng).rho
        diff = rho - sigma
        hs = matrix_norms(diff).hs_norm
        tn = trace_norm(diff)
        d = fidelity_and_distances(rho, sigma)
        mid = 2.0 * np.sqrt(max(0.0, 1.0 - d.fidelity**2))
        assert hs <= tn + 1e-8
        assert tn <= mid + 1e-8
        assert mid <= 2.0 * d.bures_distance + 1e-8


def test_trace_abs_inequality():
    rng = np.random.default_rng(10)
    for _ in range(100):
        a = _rand_complex(rng, 4)
        assert abs(np.trace(a)) <= trace_norm(a) + 1e-8


def test_generalized_cauchy_schwarz_hs():
    from fefwork.linalg import psd_sqrt

    rng = np.random.default_rng(11)
    for _ in range(100):
        x = _rand_complex(rng, 4)
        y = _rand_complex(rng, 4)
        xy = x.conj().T @ y
        abs_xy = psd_sqrt(xy.conj().T @ xy)
        lhs = matrix_norms(psd_sqrt(abs_xy)).hs_norm ** 2
        rhs = matrix_norms(x).hs_norm * matrix_norms(y).hs_norm
        assert lhs <= rhs + 1e-8
