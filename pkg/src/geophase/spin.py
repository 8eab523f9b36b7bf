"""
Central qubit coupled to N independent bath spins::

    H_B = sum_j omega_j sigma_x^j,    V = sum_j lambda_j sigma_z^j,
    H   = omega0/2 sigma_z + H_B + sigma_z V

Every bath spin contributes a factor ``A_j - i B_j`` (qubit in |0>) or
``A_j + i B_j`` (qubit in |1>) to the normalised bath traces, with
``alpha_j = sqrt(lambda_j^2 + omega_j^2)``, ``r_j = (lambda_j/alpha_j)^2``::

    A_j = 1 - 2 r_j sin^2(alpha_j t)
    B_j = r_j tanh(beta alpha_j) sin(2 alpha_j t)

The uncorrelated (product-state) coherence ratio is ``prod_j A_j``.
"""

import math
from dataclasses import dataclass

import numpy as np

from geophase.core import check_beta, is_zero_temperature
from geophase.kernel import BranchFactors

ZERO_FACTOR = 1e-12


@dataclass(frozen=True)
class PerSpinFactor:
    a: float
    b: float


def _tanh_beta_alpha(beta, alpha):
    if is_zero_temperature(beta):
        return np.ones_like(alpha)
    return np.tanh(beta * alpha)


def _mode_arrays(omega, lam, beta, t):
    """Per-mode ``A``, ``B``, their time derivatives and the continuous
    ``arg(A + iB)``, broadcast as ``(len(t), n_modes)``."""
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    alpha = np.sqrt(lam ** 2 + omega ** 2)
    r = (lam / alpha) ** 2
    tb = _tanh_beta_alpha(beta, alpha)
    phi = 2.0 * np.outer(np.asarray(t, dtype=float), alpha)
    # reduce the angle to [-pi, pi] around the nearest multiple of 2 pi; the
    # factor only depends on cos/sin of it, and the multiple counts windings
    turns = np.round(phi / (2.0 * np.pi))
    delta = phi - 2.0 * np.pi * turns
    a = (1.0 - r) + r * np.cos(delta)
    b = r * tb * np.sin(delta)
    a_dot = -2.0 * r * alpha * np.sin(delta)
    b_dot = 2.0 * r * tb * alpha * np.cos(delta)
    # for r > 1/2 the ellipse (A, B) encloses the origin and winds once per turn
    winds = (2.0 * r > 1.0) & (tb > 0)
    arg = np.arctan2(b, a) + np.where(winds, 2.0 * np.pi * turns, 0.0)
    return a, b, a_dot, b_dot, arg


def per_spin_factor(mode, beta, t):
    """``(A_j(t), B_j(t))`` for one bath spin ``mode = (omega_j, lambda_j)``."""
    omega, lam = mode
    if omega <= 0 or lam < 0:
        raise ValueError("need omega_j > 0 and lambda_j >= 0")
    if not is_zero_temperature(beta):
        check_beta(beta)
    a, b, *_ = _mode_arrays(omega, lam, beta, [t])
    return PerSpinFactor(float(a[0, 0]), float(b[0, 0]))


@dataclass(frozen=True, eq=False)
class SpinBath:
    """Bath spins with transverse fields ``omegas`` and couplings ``lambdas``."""

    omegas: tuple
    lambdas: tuple
    beta: float = math.inf

    def __post_init__(self):
        omegas = tuple(float(w) for w in np.atleast_1d(self.omegas))
        lambdas = tuple(float(v) for v in np.atleast_1d(self.lambdas))
        if len(omegas) != len(lambdas) or not omegas:
            raise ValueError("need matching, non-empty omega and lambda lists")
        if min(omegas) <= 0 or min(lambdas) < 0:
            raise ValueError("need omega_j > 0 and lambda_j >= 0")
        check_beta(self.beta)
        object.__setattr__(self, "omegas", omegas)
        object.__setattr__(self, "lambdas", lambdas)

    @classmethod
    def homogeneous(cls, n, lam, omega=1.0, beta=math.inf):
        return cls((omega,) * n, (lam,) * n, beta)

    @property
    def n(self):
        return len(self.omegas)

    @property
    def is_homogeneous(self):
        return len(set(zip(self.omegas, self.lambdas))) == 1

    @property
    def is_decoupled(self):
        return max(self.lambdas) == 0.0

    def _modes(self):
        """Distinct modes and their multiplicities (homogeneous fast path)."""
        if self.is_homogeneous:
            return self.omegas[:1], self.lambdas[:1], np.array([self.n])
        return self.omegas, self.lambdas, np.ones(self.n)

    def correlated_parts(self, t):
        """``(log|F|, phase, d phase/dt)`` with ``F_+- = prod_j (A_j +- i B_j)``.

        The phase is summed from per-spin continuous arguments, so it never
        needs unwrapping.
        """
        omegas, lambdas, mult = self._modes()
        a, b, a_dot, b_dot, arg = _mode_arrays(omegas, lambdas, self.beta, t)
        mod2 = a * a + b * b
        # a factor at rounding level is a zero of the coherence
        mod2 = np.where(mod2 <= ZERO_FACTOR ** 2, 0.0, mod2)
        with np.errstate(divide="ignore", invalid="ignore"):
            log_mod = (0.5 * np.log(mod2)) @ mult
            rate = ((a * b_dot - a_dot * b) / mod2) @ mult
        return log_mod, arg @ mult, rate

    def uncorrelated_parts(self, t):
        """``(log|prod A_j|, pi * number of negative A_j)``."""
        omegas, lambdas, mult = self._modes()
        a, *_ = _mode_arrays(omegas, lambdas, self.beta, t)
        abs_a = np.where(np.abs(a) <= ZERO_FACTOR, 0.0, np.abs(a))
        with np.errstate(divide="ignore"):
            log_mod = np.log(abs_a) @ mult
        return log_mod, np.pi * ((a < 0) @ mult)

    def branch_factors(self, t):
        return spin_branch_factors(self, t)


def gamma_uc_spin(bath, t):
    """Signed product ``prod_j A_j(t)`` as a complex number (or array).

    ``gamma_uc = -log|prod A_j|``; each negative factor adds a phase pi. An
    exactly vanishing product means infinite ``gamma_uc``.
    """
    omegas, lambdas, mult = bath._modes()
    a, *_ = _mode_arrays(omegas, lambdas, bath.beta, np.atleast_1d(t))
    prod = np.prod(a ** mult, axis=1).astype(complex)
    return complex(prod[0]) if np.ndim(t) == 0 else prod


def spin_branch_factors(bath, t):
    """``F_- = prod (A_j - i B_j)``, ``F_+ = prod (A_j + i B_j)`` and the
    uncorrelated factor ``prod A_j``."""
    omegas, lambdas, mult = bath._modes()
    a, b, *_ = _mode_arrays(omegas, lambdas, bath.beta, np.atleast_1d(t))
    f_plus = np.prod((a + 1j * b) ** mult, axis=1)
    f_thermal = np.prod(a ** mult, axis=1).astype(complex)
    if np.ndim(t) == 0:
        return BranchFactors(complex(f_plus[0]).conjugate(), complex(f_plus[0]),
                             complex(f_thermal[0]))
    return BranchFactors(f_plus.conj(), f_plus, f_thermal)


def gamma_corr1_check(bath, t):
    """First correlation correction to the decay for the spin bath::

        -1/2 sum_j ln[1 + (l_j/w_j)^4 (tanh(beta a_j) sin(2 a_j t)
                                         / (1 + (l_j/w_j)^2 cos(2 a_j t)))^2]

    Equals ``-log|F_-| + log|prod A_j|`` where all ``A_j`` are nonzero.
    """
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    w = np.asarray(bath.omegas)
    lam = np.asarray(bath.lambdas)
    alpha = np.sqrt(lam ** 2 + w ** 2)
    ratio2 = (lam / w) ** 2
    tb = _tanh_beta_alpha(bath.beta, alpha)
    two_at = 2.0 * np.outer(t, alpha)
    den = 1.0 + ratio2 * np.cos(two_at)
    if np.any(den == 0):
        raise ZeroDivisionError("formula singular, use branch factors")
    val = -0.5 * np.sum(np.log1p(ratio2 ** 2 * (tb * np.sin(two_at) / den) ** 2), axis=1)
    return float(val[0]) if scalar else val
