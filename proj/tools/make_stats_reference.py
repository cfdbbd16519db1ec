#!/usr/bin/env python3
"""Reference values for the significance and agreement statistics, computed
with scipy and statsmodels: Mann-Whitney U (normal approximation with tie
correction and continuity correction, and exact without ties) and Fleiss'
kappa. Written to fixtures/stats/reference.json."""
import json
from pathlib import Path

import numpy as np
from scipy.stats import mannwhitneyu
from statsmodels.stats.inter_rater import aggregate_raters, fleiss_kappa

SEED = 7


def main():
    rng = np.random.default_rng(SEED)
    mwu = []
    for i in range(40):
        na, nb = int(rng.integers(21, 60)), int(rng.integers(21, 60))
        levels = int(rng.integers(3, 12))
        a = rng.integers(0, levels, na) / levels
        b = (rng.integers(0, levels, nb) + rng.integers(0, 2)) / levels
        r = mannwhitneyu(a, b, alternative="two-sided", method="asymptotic", use_continuity=True)
        mwu.append({"a": a.tolist(), "b": b.tolist(), "u": float(r.statistic),
                    "p": float(r.pvalue), "method": "asymptotic"})
    for i in range(20):
        na, nb = int(rng.integers(2, 15)), int(rng.integers(2, 15))
        vals = rng.permutation(100)[: na + nb].astype(float)
        a, b = vals[:na], vals[na:]
        r = mannwhitneyu(a, b, alternative="two-sided", method="exact")
        mwu.append({"a": a.tolist(), "b": b.tolist(), "u": float(r.statistic),
                    "p": float(r.pvalue), "method": "exact"})
    fleiss = []
    for i in range(30):
        items, raters, cats = int(rng.integers(5, 60)), int(rng.integers(2, 7)), int(rng.integers(2, 5))
        bias = rng.dirichlet(np.ones(cats))
        grid = []
        for _ in range(items):
            centre = rng.integers(0, cats)
            row = [int(centre) if rng.random() < 0.6 else int(rng.choice(cats, p=bias))
                   for _ in range(raters)]
            grid.append(row)
        table, _ = aggregate_raters(np.array(grid))
        fleiss.append({"labels": [[f"c{x}" for x in row] for row in grid],
                       "kappa": float(fleiss_kappa(table, method="fleiss"))})
    out = Path(__file__).resolve().parent.parent / "fixtures" / "stats" / "reference.json"
    out.write_text(json.dumps({"mann_whitney": mwu, "fleiss": fleiss}, indent=1) + "\n")


if __name__ == "__main__":
    main()
