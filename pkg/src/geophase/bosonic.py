"""
Harmonic-oscillator environment with spectral density
``J(omega) = lam * omega**s * omega_c**(1 - s) * exp(-omega / omega_c)``.

All three bath functions are frequency integrals over ``[0, inf)``::

    gamma_uc(t) = int J(w) coth(beta w / 2) (1 - cos w t) / w**2 dw
    phi(t)      = int J(w) sin(w t) / w**2 dw
    phi_dot(t)  = int J(w) cos(w t) / w dw

In the dimensionless variable ``x = w / omega_c`` each integrand is
``x**(s - 1) * exp(-x) * h(x)`` with ``h`` smooth (entire apart from the
coth poles on the imaginary axis). The rule used here is a fixed composite
Gauss rule, vectorised over time:

* ``[0, x0]`` with Gauss-Jacobi nodes that absorb ``x**(s - 1)`` exactly,
* geometrically growing Gauss-Legendre panels from ``x0`` up to ``x = 1``
  (``omega = omega_c``), which resolve the algebraic endpoint and the
  ``coth`` pole at ``i pi / (beta omega_c / 2)``,
* uniform panels up to ``x = 50`` whose width shrinks as ``1 / (omega_c t)``
  so every panel sees a bounded number of oscillations.

``exp(-50)`` is below double precision relative to any integrand value, so
the truncation is exact to working precision. An independent coarser rule is
evaluated at the largest requested time as an error estimate.
"""

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from geophase.core import check_beta, is_zero_temperature
from geophase.kernel import BranchFactors

X_MAX = 50.0
X_FIRST = 2.0 ** -30
NODES_PER_PANEL = 20
CHECK_NODES_PER_PANEL = 14
ABS_TOL = 1e-10
REL_TOL = 1e-8
_CHUNK = 256


class QuadratureError(RuntimeError):
    """Frequency quadrature failed to meet its tolerance."""

    def __init__(self, message, error_estimate):
        super().__init__(message)
        self.error_estimate = error_estimate


@dataclass(frozen=True)
class OhmicSpectralDensity:
    """``J(omega) = lam omega^s omega_c^(1-s) exp(-omega/omega_c)``.

    ``s < 1`` is sub-Ohmic, ``s = 1`` Ohmic, ``s > 1`` super-Ohmic.
    """

    lam: float
    s: float = 1.0
    omega_c: float = 5.0

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("coupling lam must be >= 0")
        if self.s <= 0:
            raise ValueError(f"infrared divergent: Ohmicity s = {self.s} must be > 0")
        if self.omega_c <= 0:
            raise ValueError("cutoff omega_c must be > 0")

    def __call__(self, omega):
        omega = np.asarray(omega, dtype=float)
        return (self.lam * omega ** self.s * self.omega_c ** (1 - self.s)
                * np.exp(-omega / self.omega_c))


@functools.lru_cache(maxsize=64)
def _frequency_rule(s, k_bucket, nodes):
    """Nodes ``x`` and weights ``w`` with ``sum w f(x) ~ int_0^inf x^(s-1) f(x) dx``."""
    yj, wj = roots_jacobi(nodes, 0.0, s - 1.0)
    xs = [0.5 * X_FIRST * (1.0 + yj)]
    ws = [(0.5 * X_FIRST) ** s * wj]

    width_cap = min(1.0, 10.0 / k_bucket)
    edges = [X_FIRST]
    while edges[-1] < 1.0 and edges[-1] <= width_cap:
        edges.append(min(2.0 * edges[-1], 1.0))
    n_uniform = int(math.ceil((X_MAX - edges[-1]) / width_cap))
    edges.extend(np.linspace(edges[-1], X_MAX, n_uniform + 1)[1:])
    edges = np.asarray(edges)

    yl, wl = roots_legendre(nodes)
    a, b = edges[:-1, None], edges[1:, None]
    x = 0.5 * (b - a) * yl + 0.5 * (b + a)
    w = 0.5 * (b - a) * wl * x ** (s - 1.0)
    xs.append(x.ravel())
    ws.append(w.ravel())
    return np.concatenate(xs), np.concatenate(ws)


def _k_bucket(k_max):
    return float(2.0 ** max(0, math.ceil(math.log2(max(k_max, 1.0)))))


def _coth_factor(x, beta, omega_c):
    if is_zero_temperature(beta):
        return np.ones_like(x)
    # coth(y) = 1 + 2 / (exp(2 y) - 1), no cancellation for large y
    with np.errstate(over="ignore"):
        return 1.0 + 2.0 / np.expm1(beta * omega_c * x)


def _integrate(J, beta, t, nodes, quantities):
    k = J.omega_c * t
    x, w = _frequency_rule(float(J.s), _k_bucket(float(np.max(k, initial=0.0))),
                           nodes)
    base = w * np.exp(-x)
    coth_w = base * _coth_factor(x, beta, J.omega_c) / x
    sinc_w = base / x
    out = {q: np.empty_like(t) for q in quantities}
    for start in range(0, t.size, _CHUNK):
        kx = np.outer(k[start:start + _CHUNK], x)
        sl = slice(start, start + _CHUNK)
        if "gamma" in out:
            out["gamma"][sl] = (2.0 * np.sin(0.5 * kx) ** 2) @ coth_w
        if "phi" in out:
            out["phi"][sl] = np.sin(kx) @ sinc_w
        if "phi_dot" in out:
            out["phi_dot"][sl] = np.cos(kx) @ base
    scale = {"gamma": J.lam, "phi": J.lam, "phi_dot": J.lam * J.omega_c}
    return {q: scale[q] * v for q, v in out.items()}


def bath_functions(J, beta, t, quantities=("gamma", "phi", "phi_dot"), check=True):
    """Evaluate ``gamma_uc``, ``phi`` and ``phi_dot`` on an array of times.

    Returns a dict keyed by the requested quantity names. With ``check`` the
    largest time is re-integrated with a coarser rule; a disagreement beyond
    ``ABS_TOL + REL_TOL |value|`` raises :class:`QuadratureError`.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t < 0):
        raise ValueError("times must be non-negative")
    if J.lam == 0.0:
        return {q: np.zeros_like(t) for q in quantities}
    if "gamma" in quantities and not is_zero_temperature(beta):
        check_beta(beta)
    values = _integrate(J, beta, t, NODES_PER_PANEL, quantities)
    if check and t.size:
        i = int(np.argmax(t))
        coarse = _integrate(J, beta, t[i:i + 1], CHECK_NODES_PER_PANEL, quantities)
        for q in quantities:
            err = abs(coarse[q][0] - values[q][i])
            if err > ABS_TOL + REL_TOL * abs(values[q][i]):
                raise QuadratureError(
                    f"{q} quadrature not converged at t={t[i]:.6g}: "
                    f"error estimate {err:.3e}", err)
    for q in ("gamma", "phi"):
        if q in values:
            values[q][t == 0] = 0.0
    return values


def _scalar_or_array(t, values):
    return float(values[0]) if np.ndim(t) == 0 else values


def gamma_uc_bosonic(J, beta, t):
    """Decoherence function of the factorised (uncorrelated) initial state."""
    return _scalar_or_array(t, bath_functions(J, beta, t, ("gamma",))["gamma"])


def phi_shift_bosonic(J, t):
    """Phase ``phi(t) = int J(w) sin(w t) / w^2 dw`` (temperature independent)."""
    return _scalar_or_array(t, bath_functions(J, math.inf, t, ("phi",))["phi"])


def phi_dot_bosonic(J, t):
    """Time derivative of :func:`phi_shift_bosonic`, ``int J(w) cos(w t)/w dw``."""
    return _scalar_or_array(t, bath_functions(J, math.inf, t, ("phi_dot",))["phi_dot"])


def bosonic_branch_factors(J, beta, t):
    """Normalised bath traces for the two conditioned bath Hamiltonians.

    ``F_-(t) = exp(-gamma_uc - i phi)`` (qubit in |0>, bath ``H_B + V``) and
    ``F_+(t) = exp(-gamma_uc + i phi)`` (qubit in |1>, bath ``H_B - V``).
    The uncorrelated factor ``exp(-gamma_uc)`` is attached as ``f_thermal``.
    """
    v = bath_functions(J, beta, t, ("gamma", "phi"))
    f_minus = np.exp(-v["gamma"] - 1j * v["phi"])
    f_plus = np.exp(-v["gamma"] + 1j * v["phi"])
    f_thermal = np.exp(-v["gamma"]).astype(complex)
    if np.ndim(t) == 0:
        return BranchFactors(complex(f_minus[0]), complex(f_plus[0]), complex(f_thermal[0]))
    return BranchFactors(f_minus, f_plus, f_thermal)


def thermal_coherence_factor(J, beta, t):
    """``exp(-gamma_uc(t))``, the coherence ratio of the uncorrelated state."""
    return np.exp(-np.asarray(gamma_uc_bosonic(J, beta, t)))[()]


@dataclass(frozen=True)
class BosonicBath:
    """Oscillator bath at inverse temperature ``beta`` (``inf`` for T = 0)."""

    J: OhmicSpectralDensity
    beta: float = math.inf

    def __post_init__(self):
        check_beta(self.beta)

    @property
    def is_decoupled(self):
        return self.J.lam == 0.0

    def correlated_parts(self, t):
        """``(log|F|, phase, d phase/dt)`` with ``F_+- = |F| exp(+-i phase)``."""
        v = bath_functions(self.J, self.beta, t)
        return -v["gamma"], v["phi"], v["phi_dot"]

    def uncorrelated_parts(self, t):
        """``(log|X|, arg X)`` of the uncorrelated coherence ratio ``X``."""
        g = bath_functions(self.J, self.beta, t, ("gamma",))["gamma"]
        return -g, np.zeros_like(g)

    def branch_factors(self, t):
        return bosonic_branch_factors(self.J, self.beta, t)
