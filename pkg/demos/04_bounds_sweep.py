"""
Lower and upper bounds against R
================================

Sweep one configuration and, if matplotlib is around, plot the three curves.
"""

import sys

from sdofbounds.cli import rows_to_csv, sweep

antennas = (5, 4, 3, 3, 3)
rows = sweep(antennas)
print(rows_to_csv(rows)[:400])

try:
    import matplotlib.pyplot as plt
except ImportError:
    sys.exit(0)

R = [r.R for r in rows]
plt.step(R, [r.upper for r in rows], where="post", label="upper")
plt.step(R, [r.lower for r in rows], where="post", label="lower")
plt.step(R, [r.benchmark for r in rows], where="post", label="benchmark", linestyle="--")
for r in rows:
    if r.at_R_prime or r.at_R_double_prime:
        plt.axvline(r.R, color="grey", linewidth=0.5)
plt.xlabel("R")
plt.ylabel("sum SDoF")
plt.title(str(antennas))
plt.legend()
plt.savefig("bounds_5_4_3_3_3.png", dpi=120)
