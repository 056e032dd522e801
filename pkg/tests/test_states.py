import json

import numpy as np
import pytest

from fefwork.linalg import ValidationError
from fefwork.states import (
    BipartiteState,
    IsotropicParams,
    PureState,
    bell_state,
    dump_state,
    haar_unitary,
    isotropic_state,
    load_state,
    maximally_mixed,
    random_pure_state,
    random_state,
    singlet_vector,
    state_from_dict,
    state_to_dict,
    two_copies,
)


def test_state_validation_rejects_non_hermitian():
    m = np.eye(4, dtype=complex) / 4
    m[0, 1] = 1e-3
    with pytest.raises(ValidationError, match="Hermitian"):
        BipartiteState(2, m)


def test_state_validation_rejects_bad_trace():
    with pytest.raises(ValidationError, match="trace"):
        BipartiteState(2, np.eye(4, dtype=complex))


def test_state_validation_rejects_negative_eigenvalue():
    m = np.diag([0.7, 0.5, -0.1, -0.1]).astype(complex)
    with pytest.raises(ValidationError, match="PSD"):
        BipartiteState(2, m)


def test_state_matrix_is_read_only():
    state = bell_state(2)
    with pytest.raises(ValueError):
        state.rho[0, 0] = 1.0


def test_pure_state_norm_check():
    v = np.zeros(4, dtype=complex)
    v[0] = 1.0 + 1e-6
    with pytest.raises(ValidationError, match="unit norm"):
        PureState(2, v)


def test_pure_state_outer_product_is_valid_state():
    phi = random_pure_state(3, 0)
    state = phi.to_density()
    assert state.d == 3
    assert abs(np.trace(state.rho) - 1.0) < 1e-12


def test_singlet_vector_overlap():
    v = singlet_vector(3)
    assert abs(np.linalg.norm(v) - 1.0) < 1e-12
    assert abs(v[0 * 3 + 0] - 1 / np.sqrt(3)) < 1e-12
    assert v[0 * 3 + 1] == 0


def test_haar_unitary_is_unitary():
    for d in (1, 2, 3, 4):
        u = haar_unitary(d, 100 + d)
        assert np.abs(u @ u.conj().T - np.eye(d)).max() < 1e-10


def test_haar_unitary_d1_is_phase():
    u = haar_unitary(1, 3)
    assert abs(abs(u[0, 0]) - 1.0) < 1e-12


def test_haar_first_moment_vanishes():
    rng = np.random.default_rng(12)
    acc = np.zeros((2, 2), dtype=complex)
    n = 10_000
    for _ in range(n):
        acc += haar_unitary(2, rng)
    assert np.abs(acc / n).max() <= 0.05


def test_haar_left_invariance_statistic():
    # E |tr U|^2 = 1 for Haar, and multiplying by a fixed unitary must not move it
    rng = np.random.default_rng(13)
    v = haar_unitary(2, 99)
    plain, shifted = [], []
    for _ in range(4000):
        u = haar_unitary(2, rng)
        plain.append(abs(np.trace(u)) ** 2)
        shifted.append(abs(np.trace(v @ u)) ** 2)
    assert abs(np.mean(plain) - 1.0) < 0.08
    assert abs(np.mean(shifted) - 1.0) < 0.08


def test_random_state_rank_one_is_pure():
    state = random_state(2, 1, 5)
    w = np.linalg.eigvalsh(state.rho)
    assert abs(w[-1] - 1.0) < 1e-10
    PureState(2, np.linalg.eigh(state.rho)[1][:, -1])  # amplitudes pass the pure invariants


def test_random_state_full_rank():
    state = random_state(2, 4, 6)
    assert np.linalg.eigvalsh(state.rho)[0] > 0


def test_random_state_determinism():
    a = random_state(3, 5, 42)
    b = random_state(3, 5, 42)
    assert np.array_equal(a.rho, b.rho)


def test_random_state_rank_out_of_range():
    with pytest.raises(ValidationError, match="rank"):
        random_state(2, 5, 0)
    with pytest.raises(ValidationError, match="rank"):
        random_state(2, 0, 0)


def test_isotropic_params_range():
    IsotropicParams(2, 1.0)
    IsotropicParams(2, -1 / 3)
    with pytest.raises(ValidationError):
        IsotropicParams(2, -0.4)
    with pytest.raises(ValidationError):
        IsotropicParams(2, 1.01)


def test_isotropic_fef_branches():
    assert abs(IsotropicParams(2, 0.5).fully_entangled_fraction() - 0.625) < 1e-15
    # below p = 0 the best maximally entangled state avoids the singlet direction
    params = IsotropicParams(2, -0.2)
    state = params.to_state()
    assert abs(params.fully_entangled_fraction() - np.linalg.eigvalsh(state.rho)[-1]) < 1e-12


def test_two_copies_of_bell_is_higher_singlet():
    doubled = two_copies(bell_state(2))
    target = np.outer(singlet_vector(4), singlet_vector(4).conj())
    assert np.abs(doubled.rho - target).max() < 1e-12


def test_two_copies_marginals():
    state = random_state(2, 3, 17)
    doubled = two_copies(state)
    expected_a = np.kron(state.marginal("A"), state.marginal("A"))
    assert np.abs(doubled.marginal("A") - expected_a).max() < 1e-12


def test_json_round_trip_is_bit_exact():
    state = random_state(2, 4, 21)
    text = json.dumps(state_to_dict(state))
    back = state_from_dict(json.loads(text))
    assert np.array_equal(back.rho, state.rho)
    assert back.d == state.d


def test_file_round_trip(tmp_path):
    state = random_state(3, 2, 8)
    path = tmp_path / "state.json"
    dump_state(state, path)
    assert np.array_equal(load_state(path).rho, state.rho)


def test_family_forms():
    bell = state_from_dict({"family": "bell", "d": 2})
    assert abs(bell.rho[0, 0] - 0.5) < 1e-12
    iso = state_from_dict({"family": "isotropic", "d": 2, "p": 0.5})
    assert np.abs(iso.rho - isotropic_state(2, 0.5).rho).max() < 1e-15
    pure = state_from_dict({"family": "pure-haar", "d": 2, "seed": 3})
    assert abs(np.linalg.eigvalsh(pure.rho)[-1] - 1.0) < 1e-10
    mm = maximally_mixed(2)
    assert abs(np.trace(mm.rho @ mm.rho).real - 0.25) < 1e-12


def test_state_from_dict_errors():
    with pytest.raises(ValidationError):
        state_from_dict({"d": 2, "matrix": [[1.0, 0.0]]})
    with pytest.raises(ValidationError):
        state_from_dict({"family": "unknown", "d": 2})
    with pytest.raises(ValidationError):
        state_from_dict({"family": "isotropic", "d": 2})
    with pytest.raises(ValidationError):
        state_from_dict([1, 2, 3])


def test_load_state_rejects_malformed_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(ValidationError, match="JSON"):
        load_state(path)
