"""
Brute-force validators that share no closed-form algebra with the kernel.

* Spin bath: the full ``2^(N+1)``-dimensional Hamiltonian is diagonalised
  densely; Gibbs states, preparations and time evolution are built from that
  eigendecomposition.
* Oscillator bath: each mode is truncated to ``n_max + 1`` Fock states. The
  Hamiltonian is block diagonal in the qubit basis and the modes do not
  interact, so bath traces factorise exactly into single-mode traces; every
  single-mode operator is exponentiated by dense diagonalisation. A fully
  dense joint-space variant is available for small cut-offs.
* The mixed-state geometric phase functional, discretised by parallel
  transport of the eigenvectors of sampled density matrices.
"""

import math
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from geophase.core import (
    SIGMA_PLUS,
    SIGMA_X,
    SIGMA_Z,
    BlochState,
    NoCoherenceError,
    as_unitary,
    check_beta,
    is_zero_temperature,
)
from geophase.kernel import BranchFactors, coherence_ratio

MAX_SPINS = 6
MAX_MODES = 3
MAX_FOCK = 40
_DEGENERATE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class ExactModelSpec:
    """Finite model for brute-force evolution.

    ``kind`` is ``"spin"`` (``modes`` are ``(lambda_j, omega_j)``) or
    ``"fock"`` (``modes`` are ``(g_k, omega_k)``). ``preparation`` is
    ``"uncorrelated"``, ``"projective"`` or ``"unitary"``; ``operation`` holds
    the BlochState (projective) or the 2x2 unitary, and ``system_state`` the
    qubit density matrix used for the uncorrelated product state.
    """

    kind: str
    modes: tuple
    omega0: float = 1.0
    beta: float = math.inf
    preparation: str = "uncorrelated"
    operation: object = None
    system_state: np.ndarray = None
    n_max: int = 30

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple((float(a), float(b)) for a, b in self.modes))
        check_beta(self.beta)
        if self.kind == "spin":
            if not 1 <= len(self.modes) <= MAX_SPINS:
                raise ValueError(f"spin oracle supports 1..{MAX_SPINS} bath spins")
        elif self.kind == "fock":
            if not 1 <= len(self.modes) <= MAX_MODES or not 1 <= self.n_max <= MAX_FOCK:
                raise ValueError(f"fock oracle supports <= {MAX_MODES} modes, "
                                 f"n_max <= {MAX_FOCK}")
        else:
            raise ValueError(f"unknown model kind {self.kind!r}")
        if self.preparation not in ("uncorrelated", "projective", "unitary"):
            raise ValueError(f"unknown preparation {self.preparation!r}")


@dataclass(frozen=True, eq=False)
class DensityMatrixPath:
    """Reduced qubit states ``rho[k]`` (shape ``(M+1, 2, 2)``) at ``grid[k]``."""

    grid: np.ndarray
    rho: np.ndarray = field(repr=False)


# --- dense linear algebra helpers --------------------------------------------

def _kron_all(ops):
    return reduce(np.kron, ops)


def _gibbs(h, beta):
    """Normalised ``exp(-beta h)``; ground-space projector at ``beta = inf``."""
    e, v = np.linalg.eigh(h)
    if is_zero_temperature(beta):
        w = (e - e[0] <= _DEGENERATE_TOL).astype(float)
    else:
        w = np.exp(-beta * (e - e[0]))
    return (v * (w / w.sum())) @ v.conj().T


def _system_state(spec):
    if spec.system_state is not None:
        return np.asarray(spec.system_state, dtype=complex)
    return BlochState(math.pi / 2).density_matrix()


def _initial_state(spec, h_total, h_bath):
    dim_b = h_bath.shape[0]
    if spec.preparation == "uncorrelated":
        return np.kron(_system_state(spec), _gibbs(h_bath, spec.beta))
    gibbs = _gibbs(h_total, spec.beta)
    if spec.preparation == "projective":
        p = np.kron(spec.operation.density_matrix(), np.eye(dim_b))
        rho = p @ gibbs @ p
    else:
        u = np.kron(as_unitary(spec.operation), np.eye(dim_b))
        rho = u @ gibbs @ u.conj().T
    tr = np.trace(rho).real
    if tr <= 0:
        raise NoCoherenceError("preparation annihilates the state")
    return rho / tr


def _dense_expectations(h, rho0, ops, grid):
    """``Tr[rho0 exp(iHt) op exp(-iHt)]`` for each op, on the grid."""
    e, v = np.linalg.eigh(h)
    rho_e = v.conj().T @ rho0 @ v
    phases = np.exp(1j * np.outer(grid, e))
    out = []
    for op in ops:
        c = rho_e.T * (v.conj().T @ op @ v)
        out.append(np.einsum("tm,tm->t", phases, phases.conj() @ c.T))
    return out


# --- spin bath ---------------------------------------------------------------

def _spin_hamiltonians(spec):
    n = len(spec.modes)
    eye2 = np.eye(2)

    def on_bath(op, j):
        return _kron_all([op if i == j else eye2 for i in range(n)])

    h_b = sum(w * on_bath(SIGMA_X, j) for j, (_, w) in enumerate(spec.modes))
    v = sum(lam * on_bath(SIGMA_Z, j) for j, (lam, _) in enumerate(spec.modes))
    dim_b = 2 ** n
    h = (0.5 * spec.omega0 * np.kron(SIGMA_Z, np.eye(dim_b))
         + np.kron(np.eye(2), h_b) + np.kron(SIGMA_Z, v))
    return h, h_b


def _fock_operators(n_max):
    b = np.diag(np.sqrt(np.arange(1, n_max + 1)), 1).astype(complex)
    return b, b.conj().T @ b


def _fock_hamiltonians(spec):
    m = len(spec.modes)
    b, num = _fock_operators(spec.n_max)
    eye = np.eye(spec.n_max + 1)

    def on_mode(op, k):
        return _kron_all([op if i == k else eye for i in range(m)])

    h_b = sum(w * on_mode(num, k) for k, (_, w) in enumerate(spec.modes))
    v = sum(on_mode(np.conj(g) * b + g * b.conj().T, k)
            for k, (g, _) in enumerate(spec.modes))
    dim_b = (spec.n_max + 1) ** m
    h = (0.5 * spec.omega0 * np.kron(SIGMA_Z, np.eye(dim_b))
         + np.kron(np.eye(2), h_b) + np.kron(SIGMA_Z, v))
    return h, h_b


def dense_reduced_path(spec, grid):
    """Reduced qubit density matrices from the full joint-space evolution."""
    grid = np.asarray(grid, dtype=float)
    h, h_b = _spin_hamiltonians(spec) if spec.kind == "spin" else _fock_hamiltonians(spec)
    dim_b = h_b.shape[0]
    rho0 = _initial_state(spec, h, h_b)
    p00 = np.kron(np.diag([1.0, 0.0]), np.eye(dim_b))
    s_plus = np.kron(SIGMA_PLUS, np.eye(dim_b))
    pop0, coh = _dense_expectations(h, rho0, [p00, s_plus], grid)
    rho = np.empty((grid.size, 2, 2), dtype=complex)
    rho[:, 0, 0] = pop0
    rho[:, 1, 1] = 1.0 - pop0
    rho[:, 1, 0] = coh
    rho[:, 0, 1] = coh.conj()
    return DensityMatrixPath(grid, rho)


# --- factorised oscillator bath ----------------------------------------------

def _mode_traces(g, w, n_max, beta, grid):
    """Unnormalised ``Tr[exp(i h0 t) exp(-i h1 t) G_l]`` for one mode and both
    conditioning levels ``l``, plus the uncoupled thermal trace.

    ``G_l`` is ``exp(-beta (h_l - e0_l))`` (ground projector at T = 0) and
    ``e0_l`` its ground energy, returned so the caller can weigh branches.
    """
    b, num = _fock_operators(n_max)
    coupling = np.conj(g) * b + g * b.conj().T
    hs = [w * num + coupling, w * num - coupling]
    eig = [np.linalg.eigh(h) for h in hs]
    u0 = np.einsum("ij,tj,kj->tik", eig[0][1], np.exp(1j * np.outer(grid, eig[0][0])),
                   eig[0][1].conj())
    u1 = np.einsum("ij,tj,kj->tik", eig[1][1], np.exp(-1j * np.outer(grid, eig[1][0])),
                   eig[1][1].conj())
    r = u0 @ u1
    traces, ground = [], []
    for e, v in eig:
        if is_zero_temperature(beta):
            wts = (e - e[0] <= _DEGENERATE_TOL).astype(float)
        else:
            wts = np.exp(-beta * (e - e[0]))
        gl = (v * wts) @ v.conj().T
        traces.append(np.einsum("tij,ji->t", r, gl))
        ground.append(e[0])
    th = _gibbs(w * num, beta)
    thermal = np.einsum("tij,ji->t", r, th)
    return traces, np.array(ground), thermal


def _factorised_fock_coherence(spec, grid):
    per_mode = [_mode_traces(g, w, spec.n_max, spec.beta, grid) for g, w in spec.modes]
    if spec.preparation == "uncorrelated":
        val = np.prod([pm[2] for pm in per_mode], axis=0)
        return val * np.exp(1j * spec.omega0 * grid)
    # <1| Om exp(-beta H) Om^dag |0> = sum_l <1|Om|l><l|Om^dag|0> exp(-beta E_l) Z_l(...)
    if spec.preparation == "projective":
        om = spec.operation.density_matrix()
    else:
        om = as_unitary(spec.operation)
    energy = np.array([0.5 * spec.omega0, -0.5 * spec.omega0])
    offsets = energy + np.sum([pm[1] for pm in per_mode], axis=0)
    if is_zero_temperature(spec.beta):
        weights = (offsets - offsets.min() <= _DEGENERATE_TOL).astype(float)
    else:
        weights = np.exp(-spec.beta * (offsets - offsets.min()))
    total = 0j
    for l in (0, 1):
        amp = om[1, l] * np.conj(om[0, l]) * weights[l]
        if amp == 0:
            continue
        total = total + amp * np.prod([pm[0][l] for pm in per_mode], axis=0)
    return total * np.exp(1j * spec.omega0 * grid)


def exact_coherence(spec, grid, dense=None):
    """Exact ``rho_10(t) / rho_10(0)`` (includes the free ``exp(i omega0 t)``).

    ``dense`` forces (True) or forbids (False) the joint-space evolution; by
    default spin baths are dense and oscillator baths factorised.
    """
    grid = np.asarray(grid, dtype=float)
    if dense is None:
        dense = spec.kind == "spin"
    if dense:
        values = dense_reduced_path(spec, np.concatenate([[0.0], grid])).rho[:, 1, 0]
    else:
        values = _factorised_fock_coherence(spec, np.concatenate([[0.0], grid]))
    if abs(values[0]) < 1e-13:
        raise NoCoherenceError("no initial coherence")
    return values[1:] / values[0]


# --- finite-mode closed forms --------------------------------------------------

def _coth_half(beta, w):
    if is_zero_temperature(beta):
        return 1.0
    return 1.0 / math.tanh(0.5 * beta * w)


@dataclass(frozen=True, eq=False)
class DiscreteModeBath:
    """Finite set of oscillator modes ``(g_k, omega_k)`` in closed form."""

    modes: tuple
    beta: float = math.inf

    @property
    def is_decoupled(self):
        return all(g == 0 for g, _ in self.modes)

    def functions(self, t):
        t = np.asarray(t, dtype=float)
        gamma = np.zeros_like(t)
        phi = np.zeros_like(t)
        phi_dot = np.zeros_like(t)
        for g, w in self.modes:
            amp = 4.0 * abs(g) ** 2 / w ** 2
            gamma += amp * _coth_half(self.beta, w) * (1.0 - np.cos(w * t))
            phi += amp * np.sin(w * t)
            phi_dot += amp * w * np.cos(w * t)
        return gamma, phi, phi_dot

    def correlated_parts(self, t):
        gamma, phi, phi_dot = self.functions(t)
        return -gamma, phi, phi_dot

    def uncorrelated_parts(self, t):
        gamma, _, _ = self.functions(t)
        return -gamma, np.zeros_like(gamma)

    def branch_factors(self, t):
        gamma, phi, _ = self.functions(t)
        return BranchFactors(np.exp(-gamma - 1j * phi), np.exp(-gamma + 1j * phi),
                             np.exp(-gamma).astype(complex))


def discrete_mode_closed_form(modes, beta, scenario, t):
    """Coherence ratio ``X(t)`` from finite mode sums (no quadrature)."""
    factors = DiscreteModeBath(tuple(modes), beta).branch_factors(np.atleast_1d(t))
    return coherence_ratio(scenario, factors)


# --- geometric phase functional ----------------------------------------------

def path_from_trajectory(traj, state):
    """Density matrices along a kernel trajectory for a Bloch/mixed state."""
    if isinstance(state, BlochState):
        state = state.as_mixed()
    rho0 = state.density_matrix()
    coh = rho0[1, 0] * np.exp(1j * traj.omega0 * traj.grid) * traj.ratio
    rho = np.empty((traj.grid.size, 2, 2), dtype=complex)
    rho[:, 0, 0] = rho0[0, 0]
    rho[:, 1, 1] = rho0[1, 1]
    rho[:, 1, 0] = coh
    rho[:, 0, 1] = coh.conj()
    return DensityMatrixPath(traj.grid, rho)


def tong_phase(path):
    """Discretised mixed-state geometric phase of a sampled cyclic path.

    Each eigenvector is parallel transported along the grid by fixing its
    phase so the overlap with the previous sample is real and positive; the
    transported end-point overlaps are weighted by ``sqrt(eps(0) eps(tau))``.
    """
    rho = np.asarray(path.rho)
    evals, evecs = np.linalg.eigh(rho)
    if np.min(evals[:, 1] - evals[:, 0]) < _DEGENERATE_TOL:
        raise ValueError("path degenerate")
    total = 0j
    for k in (0, 1):
        v = evecs[:, :, k]
        steps = np.einsum("ti,ti->t", v[:-1].conj(), v[1:])
        transport = np.exp(-1j * np.sum(np.angle(steps)))
        weight = math.sqrt(max(evals[0, k], 0.0) * max(evals[-1, k], 0.0))
        total += weight * np.vdot(v[0], v[-1]) * transport
    return float(np.angle(total))
