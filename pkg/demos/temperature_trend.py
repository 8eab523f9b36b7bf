"""How temperature changes the effect of the initial correlations.

Prints the largest gap between the correlated and uncorrelated phase
corrections over an Ohmicity sweep, for decreasing beta. The gap shrinks from
beta = inf to beta = 1 but grows again at beta = 0.5: as beta -> 0 the
correlated coherence tends to exp(-gamma) cos(phi), and phi does not depend
on temperature, so the correlations never drop out completely.
"""

from pathlib import Path

import numpy as np

from geophase.sweep import load_spec, run_sweep

RECIPE = Path(__file__).resolve().parents[1] / "recipes" / "fig2a.ini"

for beta in ("inf", "2", "1", "0.5"):
    spec = load_spec(str(RECIPE), ["sweep.count=20", f"scenario.beta={beta}"])
    rows = run_sweep(spec)
    gap = max(abs(np.angle(np.exp(1j * (r[3] - r[4])))) for r in rows)
    print(f"beta={beta:>4}  max gap {gap:.4f}")
