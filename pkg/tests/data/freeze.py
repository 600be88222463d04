"""Regenerate ``frozen.json`` from the independent oracles.

    python tests/data/freeze.py
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from oracles import p0_bruteforce, p0_no_eve  # noqa: E402

FIGURE = [
    (2, 2, 2, 2, 2), (2, 2, 4, 4, 2), (2, 2, 5, 5, 2), (2, 2, 5, 5, 5),
    (5, 5, 2, 2, 2), (5, 5, 2, 2, 5), (5, 5, 3, 3, 3), (5, 5, 5, 5, 5),
    (5, 2, 5, 2, 2), (5, 2, 5, 5, 2), (5, 4, 2, 2, 3), (5, 4, 2, 3, 3),
    (5, 4, 3, 2, 2), (5, 4, 3, 3, 3), (5, 4, 4, 2, 2), (5, 5, 2, 5, 5),
]


def full_budget(M1, M2, N1, N2, Ne):
    return (M1 + M2) * Ne + M1 * N2 + M2 * N1


def main():
    lower = {}
    for c in FIGURE:
        lower[",".join(map(str, c))] = [p0_bruteforce(*c, R) for R in range(full_budget(*c) + 5)]
    no_eve = {}
    for c in [(2, 2, 2, 2), (5, 4, 3, 3), (3, 1, 2, 4), (1, 5, 6, 2)]:
        M1, M2, N1, N2 = c
        no_eve[",".join(map(str, c))] = [p0_no_eve(*c, R) for R in range(M1 * N2 + M2 * N1 + 3)]
    out = {"lower": lower, "no_eve": no_eve}
    Path(__file__).with_name("frozen.json").write_text(json.dumps(out, indent=1) + "\n")


if __name__ == "__main__":
    main()
