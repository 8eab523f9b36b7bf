"""
Universal coherence ratio for pure dephasing with correlated preparations.

For a global Gibbs state acted on by a qubit operation ``Om`` (projector or
unitary) the normalised coherence is::

    X(t) = <sigma_+(t)> / (<sigma_+(0)> exp(i omega0 t))
         = (c0 F_-(t) + c1 F_+(t)) / (c0 + c1),     c_l = w_l g_l

with preparation weights ``w_l`` (see :mod:`geophase.core`), Gibbs weights
``g_l ~ exp(-beta omega0 (-1)**l / 2)`` and the environment's branch factors
``F_-``, ``F_+``. Both environments in this package have
``F_+- = |F| exp(+-i phase)``, which lets ``X`` be continued analytically in
time without unwrapping principal values.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from geophase.core import (
    NoCoherenceError,
    PreparationWeights,
    SingularTrajectoryError,
    boltzmann_pair,
    check_beta,
    cycle_time,
    projective_weights,
    unitary_weights,
)

DEFAULT_GRID = 2048
MIN_GRID = 256
_SINGULAR_TOL = 1e-12


@dataclass(frozen=True)
class BranchFactors:
    """Normalised bath traces conditioned on the qubit level.

    ``f_minus``: qubit in |0>, bath Hamiltonian ``H_B + V``.
    ``f_plus``: qubit in |1>, bath Hamiltonian ``H_B - V``.
    ``f_thermal``: same trace for the uncoupled bath Gibbs state (the
    uncorrelated coherence ratio); ``None`` if not supplied.
    """

    f_minus: complex
    f_plus: complex
    f_thermal: complex = None


KINDS = ("uncorrelated", "projective", "unitary")


@dataclass(frozen=True)
class CorrelationScenario:
    """How the initial qubit state was prepared.

    ``uncorrelated``: product state with the bath in its own Gibbs state.
    ``projective`` / ``unitary``: operation on the global Gibbs state,
    described by its :class:`PreparationWeights`.
    """

    kind: str
    beta: float
    omega0: float = 1.0
    weights: PreparationWeights = None
    c0: complex = field(init=False, repr=False)
    c1: complex = field(init=False, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown scenario kind {self.kind!r}")
        check_beta(self.beta)
        if self.omega0 <= 0:
            raise ValueError("omega0 must be positive")
        c0 = c1 = 0j
        if self.kind != "uncorrelated":
            if self.weights is None:
                raise ValueError(f"{self.kind} scenario needs preparation weights")
            g0, g1 = boltzmann_pair(self.beta, self.omega0)
            c0, c1 = complex(self.weights.w0) * g0, complex(self.weights.w1) * g1
            if abs(c0 + c1) <= _SINGULAR_TOL * max(abs(c0), abs(c1), 1e-300):
                raise NoCoherenceError("prepared coherence vanishes")
        object.__setattr__(self, "c0", c0)
        object.__setattr__(self, "c1", c1)

    @classmethod
    def uncorrelated(cls, beta, omega0=1.0):
        return cls("uncorrelated", beta, omega0)

    @classmethod
    def projective(cls, state, beta, omega0=1.0):
        return cls("projective", beta, omega0, projective_weights(state))

    @classmethod
    def unitary(cls, u, beta, omega0=1.0):
        return cls("unitary", beta, omega0, unitary_weights(u))

    @property
    def is_correlated(self):
        return self.kind != "uncorrelated"


def coherence_ratio(scenario, factors):
    """``X(t)`` from branch factors (scalars or equal-shape arrays)."""
    if not scenario.is_correlated:
        if factors.f_thermal is None:
            raise ValueError("uncorrelated scenario needs the thermal factor")
        return factors.f_thermal
    c0, c1 = scenario.c0, scenario.c1
    ratio = (c0 * np.asarray(factors.f_minus) + c1 * np.asarray(factors.f_plus)) / (c0 + c1)
    if np.any(ratio == 0):
        raise SingularTrajectoryError("coherence ratio vanishes")
    return ratio[()]


def _readonly(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DephasingTrajectory:
    """Sampled ``gamma(t)``, continuous ``chi(t)`` and ``chi_dot(t)`` on
    ``[0, tau]``; the coherence is ``rho_10(0) exp(i omega0 t + i chi - gamma)``.
    """

    grid: np.ndarray
    gamma: np.ndarray
    chi: np.ndarray
    chi_dot: np.ndarray
    omega0: float

    def __post_init__(self):
        for name in ("grid", "gamma", "chi", "chi_dot"):
            object.__setattr__(self, name, _readonly(getattr(self, name)))
        n = self.grid.size
        if not (self.gamma.size == self.chi.size == self.chi_dot.size == n):
            raise ValueError("trajectory arrays must share the grid length")
        if n < 3 or np.any(np.diff(self.grid) <= 0) or self.grid[0] != 0.0:
            raise ValueError("grid must start at 0 and increase strictly")

    @property
    def tau(self):
        return float(self.grid[-1])

    @property
    def ratio(self):
        return np.exp(-self.gamma + 1j * self.chi)

    @classmethod
    def free(cls, omega0=1.0, grid_size=DEFAULT_GRID):
        """The zero-coupling trajectory ``gamma = chi = 0``."""
        t = np.linspace(0.0, cycle_time(omega0), grid_size + 1)
        z = np.zeros_like(t)
        return cls(t, z, z, z, omega0)


def _correlated_arrays(scenario, log_mod, phase, phase_rate, t):
    c0, c1 = scenario.c0, scenario.c1
    # factor out the dominant branch so the remaining Arg stays on one sheet
    if abs(c1) >= abs(c0):
        q, sign = c0 / c1, 1.0
    else:
        q, sign = c1 / c0, -1.0
    rest = 1.0 + q * np.exp(-2j * sign * phase)
    bad = np.abs(rest) <= _SINGULAR_TOL
    if np.any(bad):
        raise SingularTrajectoryError(
            f"branch interference cancels the coherence at t = {t[bad].tolist()}", t[bad])
    chi = sign * phase + np.angle(rest) - np.angle(1.0 + q)
    gamma = -log_mod - np.log(np.abs(rest)) + math.log(abs(1.0 + q))
    e = np.exp(1j * phase)
    chi_dot = phase_rate * np.real((c1 * e - c0 * e.conj()) / (c0 * e.conj() + c1 * e))
    return gamma, chi, chi_dot


def trajectory_on_grid(scenario, environment, t):
    """Evaluate ``gamma``, ``chi``, ``chi_dot`` at the given times.

    Raises :class:`SingularTrajectoryError` listing the offending times if the
    coherence vanishes at any sample.
    """
    t = np.asarray(t, dtype=float)
    if environment.is_decoupled:
        z = np.zeros_like(t)
        return z, z.copy(), z.copy()
    if scenario.is_correlated:
        log_mod, phase, rate = environment.correlated_parts(t)
        bad = ~np.isfinite(log_mod)
        if np.any(bad):
            raise SingularTrajectoryError(
                f"coherence vanishes at t = {t[bad].tolist()}", t[bad])
        gamma, chi, chi_dot = _correlated_arrays(scenario, log_mod, phase, rate, t)
    else:
        log_mod, chi = environment.uncorrelated_parts(t)
        bad = ~np.isfinite(log_mod)
        if np.any(bad):
            raise SingularTrajectoryError(
                f"coherence vanishes at t = {t[bad].tolist()}", t[bad])
        gamma, chi_dot = -log_mod, np.zeros_like(t)
    at0 = t == 0
    gamma[at0] = 0.0
    chi[at0] = 0.0
    return gamma, chi, chi_dot


def build_trajectory(scenario, environment, grid_size=DEFAULT_GRID, tau=None):
    """Sample the dephasing functions on ``grid_size + 1`` uniform points of
    ``[0, tau]`` (one qubit cycle by default)."""
    if grid_size < MIN_GRID:
        raise ValueError(f"grid_size must be >= {MIN_GRID}")
    if tau is None:
        tau = cycle_time(scenario.omega0)
    t = np.linspace(0.0, tau, grid_size + 1)
    gamma, chi, chi_dot = trajectory_on_grid(scenario, environment, t)
    return DephasingTrajectory(t, gamma, chi, chi_dot, scenario.omega0)
