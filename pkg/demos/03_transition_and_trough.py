"""
The transition curve and its trough
===================================

Output is the sum of a decaying socialist part and a growing capitalist
part.  The faster the old structures dissolve relative to the new ones
forming, the deeper the fall.
"""

import numpy as np

from transecon.transition import TransitionParams, evaluate_transition, find_trough, population_shares, trough_vs_ratio

hungary = TransitionParams(0.40, 0.22, 0.021, start_year=1989)
russia = TransitionParams(0.24, 0.066, 0.033, start_year=1991)

for name, p in (("Hungary", hungary), ("Russia", russia)):
    t_min, level = find_trough(p, 50)
    print(f"{name}: trough {level:.3f} after {t_min:.2f} years ({p.start_year + t_min:.1f})")

t = np.arange(0, 16)
ms, mc, total = evaluate_transition(russia, t.astype(float))
print("Russia  t    ms     mc   total")
for row in zip(t[::3], ms[::3], mc[::3], total[::3]):
    print("        {:2d}  {:.3f}  {:.3f}  {:.3f}".format(*row))

s = population_shares(russia, 15.0)
print(f"after 15 years: socialist {s.socialist:.3f}, capitalist {s.capitalist:.3f}, neither {s.neither:.3f}")

for ratio, level in trough_vs_ratio(0.2, 0.02, [1, 2, 3, 5, 10]):
    print(f"  alpha_s/alpha_c = {ratio:>4g}: minimum {level:.3f}")
