import math

import numpy as np
import pytest
from scipy import integrate
from scipy.special import gamma as gamma_fn

from geophase.bosonic import (
    BosonicBath,
    OhmicSpectralDensity,
    bath_functions,
    bosonic_branch_factors,
    gamma_uc_bosonic,
    phi_dot_bosonic,
    phi_shift_bosonic,
    thermal_coherence_factor,
)

J1 = OhmicSpectralDensity(0.5, 1.0, 5.0)
T = np.linspace(0.0, 2 * math.pi, 513)


def test_spectral_density():
    assert J1(0.0) == 0.0
    assert J1(5.0) == pytest.approx(0.5 * 5.0 * math.exp(-1.0))
    assert OhmicSpectralDensity(0.5, 0.5, 5.0)(np.array([0.0, 1.0])) == pytest.approx(
        [0.0, 0.5 * 5.0 ** 0.5 * math.exp(-0.2)])
    with pytest.raises(ValueError, match="infrared divergent"):
        OhmicSpectralDensity(0.5, 0.0)
    with pytest.raises(ValueError):
        OhmicSpectralDensity(-0.1)


def test_ohmic_zero_temperature_examples():
    assert gamma_uc_bosonic(J1, math.inf, 1.0) == pytest.approx(0.25 * math.log(26), abs=1e-12)
    assert gamma_uc_bosonic(J1, math.inf, 1.0) == pytest.approx(0.814524, abs=1e-6)
    assert phi_shift_bosonic(J1, 1.0) == pytest.approx(0.686701, abs=1e-6)
    assert phi_dot_bosonic(J1, 0.0) == pytest.approx(2.5, abs=1e-12)
    assert phi_dot_bosonic(J1, 1.0) == pytest.approx(2.5 / 26, abs=1e-12)
    assert thermal_coherence_factor(J1, math.inf, 1.0) == pytest.approx(26 ** -0.25, abs=1e-12)


def test_ohmic_zero_temperature_closed_forms_on_cycle():
    v = bath_functions(J1, math.inf, T)
    assert np.max(np.abs(v["gamma"] - 0.25 * np.log1p(25 * T ** 2))) < 1e-11
    assert np.max(np.abs(v["phi"] - 0.5 * np.arctan(5 * T))) < 1e-11
    assert np.max(np.abs(v["phi_dot"] - 2.5 / (1 + 25 * T ** 2))) < 1e-11


@pytest.mark.parametrize("s", [0.1, 0.3, 0.5, 2.0, 3.0])
def test_general_s_zero_temperature_closed_forms(s):
    # int_0^inf x^(s-2) e^(-x) (e^(ikx) - 1) dx = G(s-1) [(1 - ik)^(1-s) - 1]
    lam, wc = 0.4, 5.0
    J = OhmicSpectralDensity(lam, s, wc)
    k = wc * T
    z = gamma_fn(s - 1.0) * ((1 - 1j * k) ** (1.0 - s) - 1.0)
    v = bath_functions(J, math.inf, T)
    assert np.max(np.abs(v["gamma"] + lam * z.real)) < 1e-10
    assert np.max(np.abs(v["phi"] - lam * z.imag)) < 1e-10
    dz = gamma_fn(s) * (1 - 1j * k) ** (-s)
    assert np.max(np.abs(v["phi_dot"] - lam * wc * dz.real)) < 1e-10


@pytest.mark.parametrize("s, beta, t", [(1.0, 1.0, 1.0), (0.5, 2.0, 3.0), (2.0, 0.5, 6.0),
                                        (0.2, 1.0, 0.7)])
def test_finite_temperature_against_adaptive_quadrature(s, beta, t):
    J = OhmicSpectralDensity(0.5, s, 5.0)

    def integrand(w):
        return J(w) / math.tanh(beta * w / 2) * (1 - math.cos(w * t)) / w ** 2

    def regular(w):
        # integrand / w^(s-1), smooth and finite as w -> 0
        w = max(w, 1e-12)
        return (0.5 * 5.0 ** (1 - s) * math.exp(-w / 5.0) / math.tanh(beta * w / 2)
                * 2 * math.sin(w * t / 2) ** 2 / w)

    head = integrate.quad(regular, 0, 1, weight="alg", wvar=(s - 1.0, 0.0),
                          epsabs=1e-14, epsrel=1e-13)[0]
    tail = sum(integrate.quad(integrand, a, b, limit=400, epsabs=1e-13, epsrel=1e-12)[0]
               for a, b in [(1, 20), (20, 400)])
    ref = head + tail
    assert gamma_uc_bosonic(J, beta, t) == pytest.approx(ref, rel=1e-8, abs=1e-10)


def test_zero_time_and_zero_coupling():
    J0 = OhmicSpectralDensity(0.0, 0.7, 5.0)
    assert gamma_uc_bosonic(J1, 2.0, 0.0) == 0.0
    assert phi_shift_bosonic(J1, 0.0) == 0.0
    v = bath_functions(J0, 1.0, T)
    assert all(np.all(a == 0.0) for a in v.values())
    f = bosonic_branch_factors(J0, 1.0, T)
    assert np.all(f.f_minus == 1) and np.all(f.f_plus == 1)


def test_branch_factors_example():
    f = bosonic_branch_factors(J1, math.inf, 1.0)
    mag = math.exp(-0.25 * math.log(26))
    ph = 0.5 * math.atan(5.0)
    assert f.f_minus == pytest.approx(mag * complex(math.cos(ph), -math.sin(ph)), abs=1e-12)
    assert f.f_plus == pytest.approx(mag * complex(math.cos(ph), math.sin(ph)), abs=1e-12)
    assert f.f_thermal == pytest.approx(mag, abs=1e-12)
    f0 = bosonic_branch_factors(J1, 1.0, 0.0)
    assert (f0.f_minus, f0.f_plus) == (1.0, 1.0)


def test_gamma_linear_in_lambda_and_nonnegative():
    a = bath_functions(OhmicSpectralDensity(0.2, 0.6), 1.5, T)["gamma"]
    b = bath_functions(OhmicSpectralDensity(0.6, 0.6), 1.5, T)["gamma"]
    assert np.allclose(b, 3 * a, rtol=1e-13, atol=0)
    assert np.all(a >= 0)


def test_temperature_increases_decoherence():
    g_cold = gamma_uc_bosonic(J1, 5.0, T)
    g_hot = gamma_uc_bosonic(J1, 0.5, T)
    assert np.all(g_hot[1:] > g_cold[1:])


@pytest.mark.parametrize("s", [0.3, 1.0, 2.5])
def test_phi_dot_matches_finite_differences(s):
    J = OhmicSpectralDensity(0.5, s, 5.0)
    t = np.linspace(0.2, 6.0, 30)
    h = 1e-4
    fd = (phi_shift_bosonic(J, t + h) - phi_shift_bosonic(J, t - h)) / (2 * h)
    assert np.allclose(fd, phi_dot_bosonic(J, t), rtol=1e-6, atol=1e-9)


def test_large_time_still_converged():
    # omega_c t = 500, well past the moderate regime of one cycle
    J = OhmicSpectralDensity(0.5, 1.0, 5.0)
    assert phi_shift_bosonic(J, 100.0) == pytest.approx(0.5 * math.atan(500.0), abs=1e-10)


def test_bath_parts():
    bath = BosonicBath(J1, math.inf)
    log_mod, phase, rate = bath.correlated_parts(T)
    assert np.allclose(-log_mod, 0.25 * np.log1p(25 * T ** 2), atol=1e-11)
    assert np.allclose(phase, 0.5 * np.arctan(5 * T), atol=1e-11)
    unc_log, unc_phase = bath.uncorrelated_parts(T)
    assert np.allclose(unc_log, log_mod) and np.all(unc_phase == 0)
    with pytest.raises(ValueError):
        BosonicBath(J1, -1.0)
