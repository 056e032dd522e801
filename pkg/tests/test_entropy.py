import numpy as np
import pytest

from fefwork.entropy import entropy_report, smooth_min_entropy_lower, von_neumann_entropy
from fefwork.linalg import ValidationError, tensor
from fefwork.states import (
    BipartiteState,
    bell_state,
    haar_unitary,
    isotropic_state,
    maximally_mixed,
    random_pure_state,
    random_state,
)

from oracles import isotropic_entropy_bits

ISO_HALF_S = isotropic_entropy_bits(2, 0.5)  # = 1.5487949406953985 from the closed-form spectrum


def test_von_neumann_pure_is_zero():
    rho = random_pure_state(2, 0).to_density().rho
    assert abs(von_neumann_entropy(rho)) < 1e-10


def test_von_neumann_maximally_mixed():
    assert abs(von_neumann_entropy(np.eye(4) / 4) - 2.0) < 1e-12


def test_von_neumann_isotropic_closed_form():
    s = von_neumann_entropy(isotropic_state(2, 0.5).rho)
    assert abs(s - ISO_HALF_S) < 1e-12
    assert abs(s - 1.54879) < 1e-5


def test_von_neumann_rejects_invalid():
    with pytest.raises(ValidationError):
        von_neumann_entropy(np.eye(4))


def test_report_bell():
    rep = entropy_report(bell_state(2))
    assert abs(rep.s) < 1e-10
    assert abs(rep.s_a - 1.0) < 1e-10
    assert abs(rep.s_b - 1.0) < 1e-10
    assert abs(rep.s_a_given_b + 1.0) < 1e-10
    assert abs(rep.s_min - 1.0) < 1e-10


def test_report_product_state_additivity():
    rng = np.random.default_rng(1)
    a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    a = a @ a.conj().T
    a /= np.trace(a).real
    b = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    b = b @ b.conj().T
    b /= np.trace(b).real
    rep = entropy_report(BipartiteState(2, tensor(a, b)))
    assert abs(rep.s_a_given_b - rep.s_a) < 1e-9
    assert rep.s_a_given_b >= -1e-9


def test_report_isotropic_conditional():
    rep = entropy_report(isotropic_state(2, 0.5))
    assert abs(rep.s_a_given_b - (ISO_HALF_S - 1.0)) < 1e-12


def test_report_exact_identities():
    rep = entropy_report(random_state(3, 5, 2))
    assert rep.s_a_given_b == rep.s - rep.s_b
    assert rep.s_b_given_a == rep.s - rep.s_a
    assert rep.h_min_lower == -np.log2(rep.op_norm_rho)
    assert 0.0 <= rep.s <= 2 * np.log2(3) + 1e-9
    assert 0.0 <= rep.s_a <= np.log2(3) + 1e-9


def test_smooth_min_entropy_lower_cases():
    assert abs(smooth_min_entropy_lower(random_pure_state(2, 5).to_density())) < 1e-9
    # maximally mixed on d^2 = 4 levels: -log2(1/4) = 2 log2 d
    assert abs(smooth_min_entropy_lower(maximally_mixed(2)) - 2.0) < 1e-12
    got = smooth_min_entropy_lower(isotropic_state(2, 0.5))
    assert abs(got - (-np.log2(0.625))) < 1e-12
    assert abs(got - 0.678) < 1e-3


def test_araki_lieb_and_subadditivity():
    rng = np.random.default_rng(3)
    for d in (2, 3, 4):
        for _ in range(10):
            rep = entropy_report(random_state(d, int(rng.integers(1, d * d + 1)), rng))
            assert abs(rep.s_a - rep.s_b) <= rep.s + 1e-8
            assert rep.s <= rep.s_a + rep.s_b + 1e-8
            assert -np.log2(d) - 1e-9 <= rep.s_a_given_b <= np.log2(d) + 1e-9


def test_min_entropy_below_von_neumann():
    rng = np.random.default_rng(4)
    for _ in range(30):
        rep = entropy_report(random_state(2, int(rng.integers(1, 5)), rng))
        assert rep.h_min_lower <= rep.s + 1e-9


def test_unitary_invariance():
    rng = np.random.default_rng(5)
    for _ in range(10):
        state = random_state(2, int(rng.integers(1, 5)), rng)
        u = tensor(haar_unitary(2, rng), haar_unitary(2, rng))
        rotated = BipartiteState(2, u @ state.rho @ u.conj().T)
        assert abs(von_neumann_entropy(rotated.rho) - von_neumann_entropy(state.rho)) < 1e-9
