"""The equatorial state and the winding of the correlation phase.

For theta0 = pi/2 the phase is -pi as long as the correlation phase chi(tau)
stays within (-pi, pi). In general it is -pi (1 + k) with
k = round(chi(tau) / 2 pi), so odd k gives 0; the discretised functional
agrees.
"""

import math

from geophase import BlochState, BosonicBath, CorrelationScenario, OhmicSpectralDensity
from geophase import build_trajectory, phase_pure
from geophase.oracles import path_from_trajectory, tong_phase

STATE = BlochState(math.pi / 2)
for lam in (0.1, 0.3, 0.5, 0.7, 1.0):
    env = BosonicBath(OhmicSpectralDensity(lam, 0.5, 5.0))
    traj = build_trajectory(CorrelationScenario.projective(STATE, math.inf), env, 4096)
    k = round(traj.chi[-1] / (2 * math.pi))
    analytic = phase_pure(traj, STATE).total
    oracle = tong_phase(path_from_trajectory(traj, STATE))
    print(f"lambda={lam:.1f}  chi(tau)/2pi={traj.chi[-1] / (2 * math.pi):6.3f}  k={k}  "
          f"phase={analytic:+.6f}  functional={oracle:+.6f}")
