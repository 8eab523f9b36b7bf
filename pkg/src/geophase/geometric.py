"""
Kinematic geometric phase of a dephasing qubit over one cycle.

The qubit state along the cycle is::

    rho(t) = [[cos^2(th/2),                 conj(c(t))],
              [c(t),                        sin^2(th/2)]]
    c(t)   = sin(th)/2 * exp(-gamma0 - gamma(t) + i (phi0 + omega0 t + chi(t)))

(``th`` is the Bloch angle for a pure state, ``gamma0 = 0``). Its eigenvalues
are ``(1 +- F(t))/2`` with ``F = sqrt(cos^2 th + sin^2 th exp(-2 gamma0 -
2 gamma))``. The mixed-state phase is split into three pieces::

    phi1 = -pi - chi(tau)/2 + cos(th) I(tau)/2
    phi2 = arg(1 + exp(i chi(tau)) tan(th(0)/2) tan(th(tau)/2))
    phi3 = arg(1 + a b exp(-i cos(th) I(tau)))

with ``I(tau) = int_0^tau (omega0 + chi_dot) / F dt`` and ``a``, ``b`` built
from the end-point eigen-data. ``phi3`` vanishes for pure states.

``cos(th) I`` is evaluated as ``sign(cos th) [omega0 tau + chi(tau) - K]``
with ``K = int (omega0 + chi_dot)(1 - |cos th|/F) dt``. The two are equal for
continuous ``chi``; the second form stays smooth where the coherence nearly
vanishes (``chi_dot`` spikes while ``1 - |cos th|/F -> 0``) and also assigns
the correct weight to a phase jump of pi at an isolated zero of the
coherence.
"""

import math
from dataclasses import dataclass

import numpy as np

from geophase.core import (
    BlochState,
    MixedInitialState,
    NoCoherenceError,
    wrap_phase,
)
from geophase.kernel import DephasingTrajectory


@dataclass(frozen=True)
class GeometricPhaseResult:
    phi1: float
    phi2: float
    phi3: float
    total: float
    state: MixedInitialState
    integral: float = math.nan
    integral_error: float = 0.0


@dataclass(frozen=True, eq=False)
class EigenPath:
    """Eigen-data of ``rho(t)`` on the trajectory grid."""

    t: np.ndarray
    eps_plus: np.ndarray
    eps_minus: np.ndarray
    f: np.ndarray
    tan_half_theta: np.ndarray


def simpson_richardson(y, dx):
    """Composite Simpson on ``y`` (odd length) with one Richardson step.

    Returns ``(value, error_estimate)``; the estimate is the difference
    between the step-``dx`` and step-``2 dx`` Simpson sums.
    """
    y = np.asarray(y, dtype=float)
    n = y.size - 1
    if n < 2 or n % 2:
        raise ValueError("Simpson needs an even number of intervals")

    def simpson(v, h):
        return h / 3.0 * (v[0] + v[-1] + 4.0 * v[1:-1:2].sum() + 2.0 * v[2:-1:2].sum())

    fine = simpson(y, dx)
    if n % 4:
        return fine, math.nan
    coarse = simpson(y[::2], 2.0 * dx)
    return fine + (fine - coarse) / 15.0, abs(fine - coarse)


def _tan_half(cos_th, sin_th, decay, f):
    """``tan(theta(t)/2)`` with ``sin theta = sin_th decay / f``,
    ``cos theta = cos_th / f``; cancellation-free for either sign of cos."""
    with np.errstate(divide="ignore"):
        if cos_th >= 0:
            return sin_th * decay / (f + cos_th)
        return (f - cos_th) / (sin_th * decay)


def eigen_path(traj, state):
    """Eigenvalues, ``F(t)`` and ``tan(theta(t)/2)`` along the trajectory."""
    state = _as_mixed(state)
    c = _cos_snapped(state.theta_tilde0)
    s = math.sin(state.theta_tilde0)
    decay = np.exp(-(state.gamma0 + traj.gamma))
    f = np.sqrt(c * c + (s * decay) ** 2)
    eps_minus = 0.5 * s * s * (1.0 - decay ** 2) / (1.0 + f)
    return EigenPath(traj.grid, 0.5 * (1.0 + f), eps_minus, f,
                     _tan_half(c, s, decay, f))


def _as_mixed(state):
    if isinstance(state, BlochState):
        return state.as_mixed()
    return state


def _cos_snapped(theta):
    """``cos(theta)`` with the rounding residue at ``theta = pi/2`` removed;
    otherwise a 1e-17 remainder competes with a decayed coherence."""
    c = math.cos(theta)
    return 0.0 if abs(c) < 1e-15 else c


def _check_state(state):
    if math.sin(state.theta_tilde0) == 0.0 or state.theta_tilde0 in (0.0, math.pi):
        raise NoCoherenceError("phase undefined, no coherence")


def _pure_tan_product(cos_th, sin_th, decay, f):
    """``exp(-gamma(tau)) (1 - cos th) / (F(tau) + cos th)`` for a pure state,
    which equals ``tan(theta(0)/2) tan(theta(tau)/2)``."""
    if cos_th >= 0:
        return decay * (1.0 - cos_th) / (f + cos_th)
    # F + cos th = sin^2 th decay^2 / (F - cos th), free of cancellation
    return (1.0 - cos_th) * (f - cos_th) / (sin_th * sin_th * decay)


def _cos_times_integral(traj, cos_th, sin_th, decay, f):
    """``cos(th) * I(tau)`` in the regularised form; also returns ``I`` and
    the quadrature error estimate of ``K``."""
    if cos_th == 0.0:
        return 0.0, math.nan, 0.0
    dx = traj.grid[1] - traj.grid[0]
    rate = traj.omega0 + traj.chi_dot
    sd2 = (sin_th * decay) ** 2
    k_val, k_err = simpson_richardson(rate * sd2 / (f * (f + abs(cos_th))), dx)
    sweep = traj.omega0 * traj.tau + traj.chi[-1] - traj.chi[0]
    ci = math.copysign(1.0, cos_th) * (sweep - k_val)
    return ci, ci / cos_th, k_err


def _phases(traj, state):
    if not isinstance(traj, DephasingTrajectory):
        raise TypeError("expected a DephasingTrajectory")
    state = _as_mixed(state)
    _check_state(state)
    c = _cos_snapped(state.theta_tilde0)
    s = math.sin(state.theta_tilde0)
    decay = np.exp(-(state.gamma0 + traj.gamma))
    f = np.sqrt(c * c + (s * decay) ** 2)
    ci, integral, err = _cos_times_integral(traj, c, s, decay, f)
    chi_end = float(traj.chi[-1])
    sweep = traj.omega0 * traj.tau

    phi1 = -0.5 * sweep - 0.5 * chi_end + 0.5 * ci
    if state.gamma0 == 0.0:
        tt = _pure_tan_product(c, s, float(decay[-1]), float(f[-1]))
    else:
        tt = float(_tan_half(c, s, decay[0], f[0]) * _tan_half(c, s, decay[-1], f[-1]))
    e_chi = np.exp(1j * chi_end)
    phi2 = float(np.angle(1.0 + e_chi * tt))

    phi3 = 0.0
    eps_m0 = 0.5 * s * s * (1.0 - decay[0] ** 2) / (1.0 + f[0])
    if eps_m0 > 0.0:
        eps_m1 = 0.5 * s * s * (1.0 - decay[-1] ** 2) / (1.0 + f[-1])
        a = math.sqrt(eps_m0 * eps_m1 / (0.25 * (1.0 + f[0]) * (1.0 + f[-1])))
        b = (tt + e_chi) / (1.0 + e_chi * tt)
        phi3 = float(np.angle(1.0 + a * b * np.exp(-1j * ci)))
    total = wrap_phase(phi1 + phi2 + phi3)
    return GeometricPhaseResult(phi1, phi2, phi3, total, state, integral, err)


def phase_pure(traj, state):
    """Geometric phase for a pure initial state (``BlochState``).

    Raises :class:`NoCoherenceError` for ``theta0`` in ``{0, pi}``.
    """
    if isinstance(state, MixedInitialState) and state.gamma0 != 0.0:
        raise ValueError("phase_pure needs a pure state; use phase_mixed")
    return _phases(traj, state)


def phase_mixed(traj, state, omega0=None):
    """Geometric phase for a mixed initial state (``MixedInitialState``)."""
    if omega0 is not None and not math.isclose(omega0, traj.omega0):
        raise ValueError("omega0 does not match the trajectory")
    return _phases(traj, state)


def uncoupled_pure_phase(theta0):
    """``-pi + pi cos(theta0)``, the phase of a closed precessing qubit."""
    return -math.pi + math.pi * math.cos(theta0)


def uncoupled_mixed_phase(state, omega0=1.0, grid_size=1024):
    """Phase of the mixed state when the coupling is switched off."""
    return phase_mixed(DephasingTrajectory.free(omega0, grid_size), state).total


def phase_correction(result, reference="pure", omega0=1.0):
    """Signed ``Phi_G - reference`` wrapped to (-pi, pi].

    ``reference="pure"`` uses ``-pi + pi cos(theta0)``; ``"mixed"`` the
    zero-coupling phase of the same mixed initial state.
    """
    if reference == "pure":
        ref = uncoupled_pure_phase(result.state.theta_tilde0)
    elif reference == "mixed":
        ref = uncoupled_mixed_phase(result.state, omega0)
    else:
        raise ValueError(f"unknown reference {reference!r}")
    return wrap_phase(result.total - ref)
