"""
Agent-level simulation of the reservoirs
========================================

Each agent leaves the socialist state and joins the capitalist one with
fixed yearly probabilities.  Averaged over many agents the shares follow
the continuous curves.
"""

import numpy as np

from transecon.transition import MicroRates, analytic_marginals, mc_simulate

rates = MicroRates.from_alphas(0.24, 0.066)
print(f"yearly probabilities p={rates.p:.4f} q={rates.q:.4f}")

res = mc_simulate(rates, agents=100_000, years=20, seed=2024, workers=4)
soc, cap = analytic_marginals(rates, 20)
se = np.sqrt(soc * (1 - soc) / res.agents)
print("year  simulated  expected   z")
for y in range(0, 21, 4):
    z = 0.0 if se[y] == 0 else (res.socialist[y] - soc[y]) / se[y]
    print(f"{y:4d}  {res.socialist[y]:.4f}     {soc[y]:.4f}  {z:+.2f}")
print(f"capitalist share after 20 years: {res.capitalist[-1]:.4f} (expected {cap[-1]:.4f})")
