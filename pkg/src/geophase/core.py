"""
Shared conventions, initial-state types and preparation weights.

Basis convention (used everywhere in the package)::

    sigma_z |l> = (-1)**l |l>,   l in {0, 1}
    sigma_+ = |0><1|
    rho_10(t) = <1| rho(t) |0> = <sigma_+(t)>

The qubit Hamiltonian is ``H_S = omega0/2 sigma_z`` (hbar = 1), so the free
coherence rotates as ``exp(+i omega0 t)`` and one cycle lasts
``tau = 2 pi / omega0``.

Inverse temperatures are plain floats; ``math.inf`` (exported as
``ZERO_TEMPERATURE``) selects the exact zero-temperature branch of every
formula. It is never replaced by a large finite number.
"""

import math
from dataclasses import dataclass

import numpy as np

ZERO_TEMPERATURE = math.inf

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)

_PAULI = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}


class NoCoherenceError(ValueError):
    """The prepared qubit state carries no off-diagonal coherence."""


class GridTooCoarseError(ValueError):
    """A phase jump between neighbouring samples is too close to pi to resolve."""


class SingularTrajectoryError(ValueError):
    """The coherence vanishes at one or more grid points."""

    def __init__(self, message, times=()):
        super().__init__(message)
        self.times = tuple(times)


def is_zero_temperature(beta):
    return math.isinf(beta)


def check_beta(beta):
    beta = float(beta)
    if math.isnan(beta) or beta <= 0:
        raise ValueError(f"inverse temperature must be > 0 or inf, got {beta}")
    return beta


def cycle_time(omega0):
    """Duration of one free precession cycle, ``2 pi / omega0``."""
    if omega0 <= 0:
        raise ValueError("omega0 must be positive")
    return 2.0 * math.pi / omega0


def boltzmann_pair(beta, omega0):
    """Relative Gibbs weights ``(g0, g1)`` of the two qubit levels.

    ``g_l`` is proportional to ``exp(-beta omega0 (-1)**l / 2)``; the pair is
    scaled so that ``g1 = 1``, which keeps it finite for any ``beta``. At zero
    temperature ``g0`` is exactly 0.
    """
    if is_zero_temperature(beta):
        return 0.0, 1.0
    return math.exp(-beta * omega0), 1.0


def wrap_phase(x):
    """Map angles to the half-open interval (-pi, pi]."""
    wrapped = np.pi - np.mod(np.pi - np.asarray(x, dtype=float), 2.0 * np.pi)
    if np.ndim(wrapped) == 0:
        return float(wrapped)
    return wrapped


def unwrap_phase(raw_args, ambiguity_tol=1e-6):
    """Remove 2 pi jumps from a sequence of principal-branch angles.

    Each output sample differs from its input by an integer multiple of 2 pi
    and consecutive outputs differ by less than pi. The first sample is left
    untouched.

    Raises
    ------
    GridTooCoarseError
        If a wrapped step lies within ``ambiguity_tol`` of +-pi, where the
        direction of the jump cannot be decided.
    """
    raw = np.asarray(raw_args, dtype=float)
    if raw.size < 2:
        return raw.copy()
    steps = np.diff(raw)
    wrapped = steps - 2.0 * np.pi * np.round(steps / (2.0 * np.pi))
    ambiguous = np.abs(np.abs(wrapped) - np.pi) < ambiguity_tol
    if np.any(ambiguous):
        k = int(np.argmax(ambiguous))
        raise GridTooCoarseError(
            f"grid too coarse: step {k} -> {k + 1} is {steps[k]:.6g} rad, "
            "within tolerance of pi; refine the grid")
    out = np.empty_like(raw)
    out[0] = raw[0]
    out[1:] = raw[0] + np.cumsum(wrapped)
    return out


def rotation_unitary(angle, axis="y"):
    """``exp(i angle sigma_axis)`` as a 2x2 complex array."""
    return math.cos(angle) * np.eye(2) + 1j * math.sin(angle) * _PAULI[axis]


def as_unitary(u, atol=1e-12):
    """Validate and return a 2x2 unitary as a complex ndarray."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {u.shape}")
    if not np.allclose(u.conj().T @ u, np.eye(2), rtol=0, atol=atol):
        raise ValueError("matrix is not unitary")
    return u


@dataclass(frozen=True)
class BlochState:
    """Pure qubit state ``cos(theta0/2)|0> + exp(i phi0) sin(theta0/2)|1>``."""

    theta0: float
    phi0: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta0 <= math.pi:
            raise ValueError("theta0 must lie in [0, pi]")
        if not 0.0 <= self.phi0 < 2.0 * math.pi:
            raise ValueError("phi0 must lie in [0, 2 pi)")

    def ket(self):
        return np.array([math.cos(self.theta0 / 2),
                         np.exp(1j * self.phi0) * math.sin(self.theta0 / 2)])

    def density_matrix(self):
        psi = self.ket()
        return np.outer(psi, psi.conj())

    def as_mixed(self):
        return MixedInitialState(self.theta0, self.phi0, 0.0)


@dataclass(frozen=True)
class MixedInitialState:
    """Qubit state with populations ``cos^2(theta_tilde0/2)``, ``sin^2(...)``
    and coherence ``rho_10 = sin(theta_tilde0)/2 * exp(-gamma0 + i phi0)``.

    ``theta_tilde0`` is not a Bloch angle once ``gamma0 > 0``; ``gamma0 = 0``
    is a pure state.
    """

    theta_tilde0: float
    phi0: float = 0.0
    gamma0: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta_tilde0 <= math.pi:
            raise ValueError("theta_tilde0 must lie in [0, pi]")
        if not 0.0 <= self.phi0 < 2.0 * math.pi:
            raise ValueError("phi0 must lie in [0, 2 pi)")
        if not self.gamma0 >= 0.0:
            raise ValueError("gamma0 must be non-negative")

    @property
    def coherence(self):
        return (0.5 * math.sin(self.theta_tilde0) * math.exp(-self.gamma0)
                * np.exp(1j * self.phi0))

    def density_matrix(self):
        c = self.coherence
        return np.array([[math.cos(self.theta_tilde0 / 2) ** 2, np.conj(c)],
                         [c, math.sin(self.theta_tilde0 / 2) ** 2]])

    @classmethod
    def from_density_matrix(cls, rho, atol=1e-12):
        rho = np.asarray(rho, dtype=complex)
        p0 = float(np.clip(rho[0, 0].real, 0.0, 1.0))
        rho10 = complex(rho[1, 0])
        if abs(rho10) <= atol:
            raise NoCoherenceError("no initial coherence")
        theta = 2.0 * math.acos(math.sqrt(p0))
        sin_theta = math.sin(theta)
        if sin_theta <= atol:
            raise ValueError("inconsistent state: coherence without population "
                             "in both levels")
        ratio = 2.0 * abs(rho10) / sin_theta
        # positivity forces ratio <= 1; clip rounding noise
        gamma0 = max(0.0, -math.log(min(ratio, 1.0)))
        phi0 = float(np.mod(np.angle(rho10), 2.0 * math.pi))
        if phi0 >= 2.0 * math.pi:
            phi0 = 0.0
        return cls(theta, phi0, gamma0)


@dataclass(frozen=True)
class PreparationWeights:
    """Diagonal weights ``w_l = <l| Om^dag sigma_+ Om |l>`` of a preparation.

    Only the ratio ``w0 : w1`` enters the coherence dynamics.
    """

    w0: complex
    w1: complex

    def __post_init__(self):
        if self.w0 == 0 and self.w1 == 0:
            raise NoCoherenceError("no initial coherence")


def projective_weights(state):
    """Weights of a projective measurement onto ``state`` (a BlochState).

    ``<l|P sigma_+ P|l> = |<l|psi>|^2 <psi|sigma_+|psi>``; the common factor
    ``<psi|sigma_+|psi>`` is divided out, leaving the real pair
    ``(cos^2(theta0/2), sin^2(theta0/2))``.
    """
    if math.sin(state.theta0) == 0.0 or state.theta0 in (0.0, math.pi):
        raise NoCoherenceError("no initial coherence")
    return PreparationWeights(complex(math.cos(state.theta0 / 2) ** 2),
                              complex(math.sin(state.theta0 / 2) ** 2))


def unitary_weights(u):
    """Weights ``w_l = <l|U^dag sigma_+ U|l> = conj(<0|U|l>) <1|U|l>``."""
    u = as_unitary(u)
    w = np.conj(u[0, :]) * u[1, :]
    if np.all(np.abs(w) < 1e-15):
        raise NoCoherenceError("no initial coherence")
    return PreparationWeights(complex(w[0]), complex(w[1]))


def mixed_state_from_unitary(u, beta, omega0):
    """Reduced qubit state after applying ``u`` to the global Gibbs state.

    Both bath-conditioned partition functions are equal for the models treated
    here, so the reduced state is ``sum_l g_l U|l><l|U^dag / sum_l g_l`` with
    Gibbs weights ``g_l`` from :func:`boltzmann_pair`. ``beta = 0`` is accepted
    as the infinite-temperature limit.
    """
    u = as_unitary(u)
    if beta == 0:
        g0, g1 = 1.0, 1.0
    else:
        g0, g1 = boltzmann_pair(check_beta(beta), omega0)
    g = np.array([g0, g1]) / (g0 + g1)
    rho = (u * g) @ u.conj().T
    rho10 = complex(rho[1, 0])
    if abs(rho10) < 1e-14:
        raise NoCoherenceError("no initial coherence")
    return MixedInitialState.from_density_matrix(rho)
