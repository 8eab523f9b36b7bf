"""Where does the environment stop shifting the geometric phase?

Sweeps the Ohmicity of a bosonic bath at zero temperature and prints the
values of s at which the phase correction changes sign, with and without
initial system-environment correlations.
"""

import math

import numpy as np

from geophase import BlochState, BosonicBath, CorrelationScenario, OhmicSpectralDensity
from geophase import build_trajectory, phase_correction, phase_pure
from geophase.sweep import find_zero_crossings

STATE = BlochState(math.pi / 3)
svals = np.linspace(0.1, 1.0, 31)
corr, unc = [], []
for s in svals:
    env = BosonicBath(OhmicSpectralDensity(0.5, s, 5.0))
    for scenario, out in ((CorrelationScenario.projective(STATE, math.inf), corr),
                          (CorrelationScenario.uncorrelated(math.inf), unc)):
        traj = build_trajectory(scenario, env, 1024)
        out.append(phase_correction(phase_pure(traj, STATE)))

print(f"{'s':>6} {'corr':>10} {'uncorr':>10}")
for s, c, u in zip(svals, corr, unc):
    print(f"{s:6.3f} {c:10.5f} {u:10.5f}")
print("correlated zero crossings at s =", find_zero_crossings(svals, corr))
print("uncorrelated zero crossings at s =", find_zero_crossings(svals, unc))
