import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geophase.core import (
    BlochState,
    GridTooCoarseError,
    MixedInitialState,
    NoCoherenceError,
    PreparationWeights,
    SIGMA_PLUS,
    SIGMA_Z,
    boltzmann_pair,
    cycle_time,
    mixed_state_from_unitary,
    projective_weights,
    rotation_unitary,
    unitary_weights,
    unwrap_phase,
    wrap_phase,
)

S3 = math.sqrt(3.0)


def test_basis_convention():
    assert SIGMA_Z @ np.array([1, 0]) == pytest.approx(np.array([1, 0]))
    assert SIGMA_Z @ np.array([0, 1]) == pytest.approx(np.array([0, -1]))
    # sigma_+ |1> = |0>, so <sigma_+> = rho_10
    rho = np.array([[0.3, 0.1 - 0.2j], [0.1 + 0.2j, 0.7]])
    assert np.trace(rho @ SIGMA_PLUS) == pytest.approx(rho[1, 0])


def test_cycle_time():
    for w in (0.5, 1.0, 5.0):
        assert cycle_time(w) * w == pytest.approx(2 * math.pi, abs=1e-15)
    with pytest.raises(ValueError):
        cycle_time(0.0)


def test_boltzmann_pair_zero_temperature_is_exact():
    assert boltzmann_pair(math.inf, 1.0) == (0.0, 1.0)
    g0, g1 = boltzmann_pair(2.0, 1.0)
    assert g0 / g1 == pytest.approx(math.exp(-2.0))


@pytest.mark.parametrize("theta, expected", [
    (math.pi / 3, (0.75, 0.25)),
    (math.pi / 2, (0.5, 0.5)),
])
def test_projective_weights(theta, expected):
    w = projective_weights(BlochState(theta))
    assert (w.w0, w.w1) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("theta", [0.0, math.pi])
def test_projective_weights_no_coherence(theta):
    with pytest.raises(NoCoherenceError, match="no initial coherence"):
        projective_weights(BlochState(theta))


def test_unitary_weights_examples():
    # U|0> = (1/2)|0> - (sqrt3/2)|1>, U|1> = (sqrt3/2)|0> + (1/2)|1>
    u = rotation_unitary(math.pi / 3, "y")
    assert u @ np.array([1, 0]) == pytest.approx(np.array([0.5, -S3 / 2]))
    w = unitary_weights(u)
    assert (w.w0, w.w1) == pytest.approx((-S3 / 4, S3 / 4), abs=1e-15)
    w = unitary_weights(rotation_unitary(math.pi / 4, "y"))
    assert (w.w0, w.w1) == pytest.approx((-0.5, 0.5), abs=1e-15)


def test_unitary_weights_match_direct_matrix_products():
    rng = np.random.default_rng(7)
    for _ in range(5):
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        u, _ = np.linalg.qr(a)
        w = unitary_weights(u)
        m = u.conj().T @ SIGMA_PLUS @ u
        assert (w.w0, w.w1) == pytest.approx((m[0, 0], m[1, 1]), abs=1e-14)


def test_unitary_weights_identity_rejected():
    with pytest.raises(NoCoherenceError, match="no initial coherence"):
        unitary_weights(np.eye(2))
    with pytest.raises(ValueError, match="not unitary"):
        unitary_weights(np.array([[1, 1], [0, 1]]))


def test_preparation_weights_invariant():
    with pytest.raises(NoCoherenceError):
        PreparationWeights(0j, 0j)


def test_projective_matches_unitary_weight_ratio():
    # a rotation taking |0> to |psi(theta0)>; at zero temperature only the
    # ratio w0:w1 matters, and only w1 survives, so both give X = F_+
    theta = math.pi / 3
    u = rotation_unitary(-theta / 2, "y")
    assert abs(u[:, 0] @ BlochState(theta).ket().conj()) == pytest.approx(1.0)
    wp = projective_weights(BlochState(theta))
    wu = unitary_weights(u)
    assert wu.w1 != 0 and wp.w1 != 0


def test_mixed_state_from_unitary_zero_temperature():
    # p0 = |<0|U|1>|^2 = 3/4 and rho_10 = <1|U|1> conj(<0|U|1>) = sqrt3/4 > 0
    st_ = mixed_state_from_unitary(rotation_unitary(math.pi / 3, "y"), math.inf, 1.0)
    assert st_.theta_tilde0 == pytest.approx(math.pi / 3, abs=1e-12)
    assert st_.gamma0 == pytest.approx(0.0, abs=1e-12)
    assert st_.phi0 == pytest.approx(0.0, abs=1e-12)


def test_mixed_state_from_unitary_infinite_temperature():
    with pytest.raises(NoCoherenceError, match="no initial coherence"):
        mixed_state_from_unitary(rotation_unitary(math.pi / 3, "y"), 0, 1.0)


def test_mixed_state_from_unitary_finite_temperature_entries():
    # independent 4-entry construction rho = sum_l g_l U|l><l|U^dag / Z
    beta, w0 = 1.0, 1.0
    a = math.pi / 3
    g = np.array([math.exp(-beta * w0 / 2), math.exp(beta * w0 / 2)])
    g /= g.sum()
    col0 = np.array([math.cos(a), -math.sin(a)])
    col1 = np.array([math.sin(a), math.cos(a)])
    rho = g[0] * np.outer(col0, col0) + g[1] * np.outer(col1, col1)
    st_ = mixed_state_from_unitary(rotation_unitary(a, "y"), beta, w0)
    assert st_.density_matrix() == pytest.approx(rho, abs=1e-14)
    assert math.cos(st_.theta_tilde0 / 2) ** 2 == pytest.approx(rho[0, 0])
    expected_gamma0 = -math.log(2 * abs(rho[1, 0]) / math.sin(st_.theta_tilde0))
    assert st_.gamma0 == pytest.approx(expected_gamma0)
    assert st_.gamma0 > 0


def test_mixed_state_round_trip():
    st_ = MixedInitialState(1.1, 0.4, 0.3)
    back = MixedInitialState.from_density_matrix(st_.density_matrix())
    assert back.theta_tilde0 == pytest.approx(1.1)
    assert back.phi0 == pytest.approx(0.4)
    assert back.gamma0 == pytest.approx(0.3)
    rho = st_.density_matrix()
    assert np.trace(rho).real == pytest.approx(1.0)
    assert np.all(np.linalg.eigvalsh(rho) >= -1e-15)


def test_state_bounds():
    with pytest.raises(ValueError):
        BlochState(-0.1)
    with pytest.raises(ValueError):
        BlochState(1.0, 2 * math.pi)
    with pytest.raises(ValueError):
        MixedInitialState(1.0, 0.0, -0.1)
    assert BlochState(1.0).as_mixed() == MixedInitialState(1.0, 0.0, 0.0)


@pytest.mark.parametrize("raw, expected", [
    ([0, 0.1, 0.2], [0, 0.1, 0.2]),
    ([3.0, -3.0], [3.0, -3.0 + 2 * math.pi]),
    ([0, 1.6, 3.2, -1.6], [0, 1.6, 3.2, -1.6 + 2 * math.pi]),
])
def test_unwrap_examples(raw, expected):
    assert unwrap_phase(raw) == pytest.approx(expected, abs=1e-12)


def test_unwrap_ambiguous_step():
    with pytest.raises(GridTooCoarseError, match="grid too coarse"):
        unwrap_phase([0.0, math.pi])


def test_wrap_phase_range():
    x = np.array([-math.pi, math.pi, 3 * math.pi, -3 * math.pi + 1e-9, 0.0])
    w = wrap_phase(x)
    assert np.all(w > -math.pi) and np.all(w <= math.pi)
    assert wrap_phase(-math.pi) == pytest.approx(math.pi)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-1.5, 1.5), min_size=2, max_size=40), st.floats(-10, 10))
def test_unwrap_is_idempotent_through_wrap(steps, start):
    x = start + np.concatenate([[0.0], np.cumsum(steps)])
    u = unwrap_phase(x)
    again = unwrap_phase(wrap_phase(u))
    # unwrapping a wrapped sequence recovers it up to the 2 pi offset of the start
    offset = u[0] - again[0]
    assert np.allclose(again + offset, u, atol=1e-9)
    assert abs(offset / (2 * math.pi) - round(offset / (2 * math.pi))) < 1e-9
    assert np.all(np.abs(np.diff(u)) < math.pi)
