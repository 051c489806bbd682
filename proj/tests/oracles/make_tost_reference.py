"""Freeze reference TOST results computed with statsmodels and scipy.

Run from the repository root:
    python3 tests/oracles/make_tost_reference.py > tests/data/tost_reference.json
"""

import json
import sys

import numpy as np
import scipy
import statsmodels
from scipy import stats
from statsmodels.stats.weightstats import ttost_ind

SEED = 20240517
N_PAIRS = 200
MARGIN = 0.1
ALPHA = 0.05


def t_interval(x, level=0.95):
    lo, hi = stats.t.interval(level, len(x) - 1, loc=np.mean(x), scale=stats.sem(x))
    return [float(lo), float(hi)]


def main():
    rng = np.random.default_rng(SEED)
    pairs = []
    for i in range(N_PAIRS):
        n1 = int(rng.integers(2, 200))
        n2 = int(rng.integers(2, 200))
        base = rng.uniform(0.5, 4.5)
        # Differences straddle the margin so both decisions occur.
        shift = rng.uniform(-0.16, 0.16)
        sd1 = rng.uniform(0.02, 0.5)
        sd2 = sd1 * rng.uniform(0.5, 2.0)
        g1 = rng.normal(base + shift, sd1, n1)
        g2 = rng.normal(base, sd2, n2)
        p, lower, upper = ttost_ind(g1, g2, -MARGIN, MARGIN, usevar="unequal")
        pairs.append(
            {
                "g1": [float(v) for v in g1],
                "g2": [float(v) for v in g2],
                "p": float(p),
                "t_lower": float(lower[0]),
                "p_lower": float(lower[1]),
                "t_upper": float(upper[0]),
                "p_upper": float(upper[1]),
                "df": float(lower[2]),
                "equivalent": bool(p < ALPHA),
                "ci_g1": t_interval(g1),
                "ci_g2": t_interval(g2),
            }
        )
    json.dump(
        {
            "generator": {
                "seed": SEED,
                "statsmodels": statsmodels.__version__,
                "scipy": scipy.__version__,
                "numpy": np.__version__,
                "call": "ttost_ind(g1, g2, -margin, margin, usevar='unequal')",
            },
            "margin": MARGIN,
            "alpha": ALPHA,
            "pairs": pairs,
        },
        sys.stdout,
    )
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
