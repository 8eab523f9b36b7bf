"""
Built-in validation matrices: kernel results against the brute-force oracles.

Each matrix is a list of :class:`Check` records holding the largest deviation
found and the tolerance it is judged against.
"""

import math
from dataclasses import dataclass

import numpy as np

from geophase.bosonic import BosonicBath, OhmicSpectralDensity
from geophase.core import BlochState, cycle_time, mixed_state_from_unitary, rotation_unitary
from geophase.geometric import (
    phase_correction,
    phase_mixed,
    phase_pure,
    uncoupled_pure_phase,
)
from geophase.kernel import CorrelationScenario, build_trajectory, coherence_ratio
from geophase.oracles import (
    ExactModelSpec,
    discrete_mode_closed_form,
    exact_coherence,
    path_from_trajectory,
    tong_phase,
)
from geophase.spin import SpinBath, spin_branch_factors

SPIN_TOL = 1e-8
FOCK_TOL = 1e-6
ZERO_COUPLING_TOL = 1e-9
TONG_TOL = 1e-4
TONG_GRID = 4096

PREP_U = rotation_unitary(math.pi / 3, "y")
PREP_STATE = BlochState(math.pi / 3)


@dataclass(frozen=True)
class Check:
    name: str
    deviation: float
    tolerance: float

    @property
    def passed(self):
        return bool(self.deviation <= self.tolerance)


def _scenario(kind, beta, omega0=1.0, state=PREP_STATE, u=PREP_U):
    if kind == "uncorrelated":
        return CorrelationScenario.uncorrelated(beta, omega0)
    if kind == "projective":
        return CorrelationScenario.projective(state, beta, omega0)
    return CorrelationScenario.unitary(u, beta, omega0)


def _operation(kind):
    return {"uncorrelated": None, "projective": PREP_STATE, "unitary": PREP_U}[kind]


def _fmt_beta(beta):
    return "inf" if math.isinf(beta) else f"{beta:g}"


def spin_small(n_values=(1, 2, 3, 4), betas=(0.4, 1.0, math.inf),
               ratios=(0.5, 1.0, 1.5), samples=2049, omega0=1.0):
    """Homogeneous spin baths (``omega_j = 1``) against dense diagonalisation."""
    t = np.linspace(0.0, cycle_time(omega0), samples)
    checks = []
    for n in n_values:
        for beta in betas:
            for ratio in ratios:
                bath = SpinBath.homogeneous(n, ratio, 1.0, beta)
                factors = spin_branch_factors(bath, t)
                for kind in ("uncorrelated", "projective", "unitary"):
                    spec = ExactModelSpec("spin", [(ratio, 1.0)] * n, omega0, beta,
                                          kind, _operation(kind))
                    exact = exact_coherence(spec, t)
                    kernel = coherence_ratio(_scenario(kind, beta, omega0), factors)
                    dev = float(np.max(np.abs(exact - kernel * np.exp(1j * omega0 * t))))
                    checks.append(Check(f"spin N={n} beta={_fmt_beta(beta)} "
                                        f"lambda/omega={ratio:g} {kind}", dev, SPIN_TOL))
    return checks


FOCK_MODES = (
    ((0.3, 1.0),),
    ((0.2, 1.0), (0.3, 1.7)),
    ((0.3, 0.8), (0.2, 1.3), (0.1, 2.1)),
)


def fock_small(betas=(math.inf, 2.0), n_max=30, samples=257, omega0=1.0):
    """Truncated-Fock evolution against the finite-mode closed forms."""
    t = np.linspace(0.0, cycle_time(omega0), samples)
    checks = []
    for modes in FOCK_MODES:
        for beta in betas:
            for kind in ("uncorrelated", "projective", "unitary"):
                spec = ExactModelSpec("fock", modes, omega0, beta, kind, _operation(kind),
                                      n_max=n_max)
                exact = exact_coherence(spec, t)
                closed = discrete_mode_closed_form(modes, beta, _scenario(kind, beta, omega0), t)
                dev = float(np.max(np.abs(exact - closed * np.exp(1j * omega0 * t))))
                checks.append(Check(f"fock modes={len(modes)} beta={_fmt_beta(beta)} {kind}",
                                    dev, FOCK_TOL))
    return checks


def zero_coupling(thetas=(math.pi / 6, math.pi / 3, math.pi / 2, 2.0),
                  betas=(1.0, math.inf), grid=1024):
    """``lambda = 0``: pure phases equal ``-pi + pi cos(theta0)`` and mixed
    corrections vanish, for both environments and all preparations."""
    envs = {"bosonic": lambda b: BosonicBath(OhmicSpectralDensity(0.0, 0.7), b),
            "spin": lambda b: SpinBath.homogeneous(3, 0.0, 1.0, b)}
    checks = []
    for name, make in envs.items():
        for beta in betas:
            env = make(beta)
            for theta in thetas:
                state = BlochState(theta)
                for kind in ("uncorrelated", "projective"):
                    traj = build_trajectory(_scenario(kind, beta, state=state), env, grid)
                    dev = abs(phase_correction(phase_pure(traj, state), "pure"))
                    checks.append(Check(f"{name} beta={_fmt_beta(beta)} theta0={theta:.4f} "
                                        f"{kind}", dev, ZERO_COUPLING_TOL))
            for angle in (math.pi / 3, math.pi / 4):
                u = rotation_unitary(angle, "y")
                state = mixed_state_from_unitary(u, beta, 1.0)
                for kind in ("uncorrelated", "unitary"):
                    traj = build_trajectory(_scenario(kind, beta, u=u), env, grid)
                    res = phase_mixed(traj, state)
                    dev = abs(phase_correction(res, "mixed"))
                    checks.append(Check(f"{name} beta={_fmt_beta(beta)} unitary "
                                        f"angle={angle:.4f} {kind} (mixed)",
                                        dev, ZERO_COUPLING_TOL))
    # the uncoupled pure phase itself, as a sanity anchor
    checks.append(Check("uncoupled theta0=pi/3 is -pi/2",
                        abs(uncoupled_pure_phase(math.pi / 3) + math.pi / 2), ZERO_COUPLING_TOL))
    return checks


def tong_points():
    """Six scenario points spanning both environments and all preparations."""
    u3 = PREP_U
    return [
        ("bosonic projective s=1 lambda=0.5 beta=inf",
         BosonicBath(OhmicSpectralDensity(0.5, 1.0, 5.0)),
         CorrelationScenario.projective(PREP_STATE, math.inf), PREP_STATE),
        ("bosonic uncorrelated s=0.5 lambda=0.5 beta=1",
         BosonicBath(OhmicSpectralDensity(0.5, 0.5, 5.0), 1.0),
         CorrelationScenario.uncorrelated(1.0), PREP_STATE),
        ("bosonic unitary s=1 lambda=0.5 beta=3",
         BosonicBath(OhmicSpectralDensity(0.5, 1.0, 5.0), 3.0),
         CorrelationScenario.unitary(u3, 3.0), mixed_state_from_unitary(u3, 3.0, 1.0)),
        ("spin projective N=4 lambda=0.6 beta=0.4",
         SpinBath.homogeneous(4, 0.6, 1.0, 0.4),
         CorrelationScenario.projective(PREP_STATE, 0.4), PREP_STATE),
        ("spin projective N=3 lambda=0.8 beta=1 theta0=2pi/3",
         SpinBath.homogeneous(3, 0.8, 1.0, 1.0),
         CorrelationScenario.projective(BlochState(2 * math.pi / 3), 1.0),
         BlochState(2 * math.pi / 3)),
        ("spin unitary N=2 lambda=0.5 beta=1",
         SpinBath.homogeneous(2, 0.5, 1.0, 1.0),
         CorrelationScenario.unitary(u3, 1.0), mixed_state_from_unitary(u3, 1.0, 1.0)),
    ]


def tong_deviation(env, scenario, state, grid):
    traj = build_trajectory(scenario, env, grid)
    analytic = phase_mixed(traj, state).total
    oracle = tong_phase(path_from_trajectory(traj, state))
    return abs(float(np.angle(np.exp(1j * (analytic - oracle)))))


def tong(grid=TONG_GRID):
    """Analytic phase against the discretised functional; the check also
    fails if halving the grid does not increase the deviation."""
    checks = []
    for name, env, scenario, state in tong_points():
        fine = tong_deviation(env, scenario, state, grid)
        coarse = tong_deviation(env, scenario, state, grid // 2)
        dev = fine if fine < coarse else math.inf
        checks.append(Check(f"tong {name} (M={grid}; M/2 deviation {coarse:.2e})",
                            dev, TONG_TOL))
    return checks


MATRICES = {
    "spin-small": spin_small,
    "fock": fock_small,
    "zero-coupling": zero_coupling,
    "tong": tong,
}


def run_matrix(selector):
    """Checks for one selector, or for every matrix with ``"all"``."""
    if selector == "all":
        return [c for fn in MATRICES.values() for c in fn()]
    if selector not in MATRICES:
        raise KeyError(selector)
    return MATRICES[selector]()
