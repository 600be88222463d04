"""
Lower bound by enumeration
==========================

Walk through the elimination program for one configuration.
"""

from sdofbounds import AntennaConfig, benchmark_prior, solve_p0
from sdofbounds.lower_bound import closed_form_symmetric, balancing_feasible

# two users with 2 antennas each, 4-antenna receivers, a 2-antenna eavesdropper
cfg = AntennaConfig(2, 2, 4, 4, 2)
print("R' =", cfg.leakage_budget(), " R'' =", cfg.full_budget())

# below R' some leakage survives, so only part of the transmit space is usable
for R in (0, 4, 7, 8, 12, 16, 20):
    res = solve_p0(cfg.with_ris(R))
    print(f"R={R:2d}  t*={res.t_star}  plan={res.plan_star.as_tuple()}  "
          f"split=({res.delta1},{res.delta2})  benchmark={benchmark_prior(cfg.with_ris(R))}")

# the benchmark waits for R' before sending anything; the program does not
sym = AntennaConfig(2, 2, 2, 2, 2)
for R in range(0, 17, 2):
    closed = closed_form_symmetric(2, 2, 2, R)
    exact = solve_p0(sym.with_ris(R)).t_star
    tag = "balanced" if balancing_feasible(2, 2, 2, R) else ""
    print(f"symmetric R={R:2d}  closed={closed}  exact={exact}  {tag}")
