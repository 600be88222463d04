"""
Building and checking the beamformers
=====================================

Solve for the RIS profile, build precoders, then measure what each
receiver and the eavesdropper actually see.
"""

import numpy as np

from sdofbounds import AntennaConfig, cascade, certify, synthesize_channels

cfg = AntennaConfig(5, 4, 3, 3, 3, R=27)
ch = synthesize_channels(cfg, seed=7)

sol, report, results = certify(ch, cfg)
print("plan", sol.plan.as_tuple(), "attempt", sol.attempt, "streams", sol.delta1, sol.delta2)

casc = cascade(ch, sol.phi)
# leakage: the eavesdropper's view of each precoder
print("|He1 P1| =", np.linalg.norm(casc.Hbar_e1 @ sol.P1))
print("|He2 P2| =", np.linalg.norm(casc.Hbar_e2 @ sol.P2))

# singular values at Rx1: desired block first, then the whole received space
print("Rx1 desired sv", np.round(np.linalg.svd(casc.Hbar11 @ sol.P1, compute_uv=False), 3))
print("Rx1 interference sv", np.round(np.linalg.svd(casc.Hbar12 @ sol.P2, compute_uv=False), 3))

for tag, (s, rep) in results.items():
    print(tag, "passed" if rep.passed else rep.failures, "sum", rep.achieved_sum, "/", rep.t_star)
