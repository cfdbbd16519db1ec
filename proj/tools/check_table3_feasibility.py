#!/usr/bin/env python3
"""LP check: can a set of Table 3 rows of one aspect be matched at once?

Each query has one judged-relevant count R per aspect, shared by the systems.
A system's list on that query has h7 hits in ranks 1-7 and h2 in ranks 8-15
(h7 + h2 <= R). For fixed (R, h7, h2) the reachable (P@7, NDCG@7, P@15,
NDCG@15) form the hull of four corners (hits packed early or late in each
segment), so the relaxation over query fractions is an LP. Infeasible LP
means no set of judgments reproduces those rows.

Usage: check_table3_feasibility.py ASPECT SYSTEM[,SYSTEM...] [TOL] [RMAX]
"""
import math
import sys
from pathlib import Path

import numpy as np
from scipy.optimize import linprog

sys.path.insert(0, str(Path(__file__).resolve().parent))
from make_table3_fixture import TARGETS  # noqa: E402

DISC = [1.0 / math.log2(r + 2) for r in range(15)]
IDEAL = [0.0]
for d in DISC:
    IDEAL.append(IDEAL[-1] + d)


def corners(lo, hi, h):
    seg = DISC[lo:hi]
    return {sum(seg[:h]), sum(seg[len(seg) - h:]) if h else 0.0}


def feasible(aspect, systems, tol=0.0005, rmax=40):
    cols = []
    for si in range(len(systems)):
        for r in range(1, rmax + 1):
            for h7 in range(8):
                for h2 in range(9):
                    if h7 + h2 > r:
                        continue
                    for d1 in corners(0, 7, h7):
                        for d2 in corners(7, 15, h2):
                            cols.append((si, r, h7 / 7, d1 / IDEAL[min(7, r)], (h7 + h2) / 15,
                                         (d1 + d2) / IDEAL[min(15, r)]))
    n = len(cols)
    a_eq, b_eq, a_ub, b_ub = [], [], [], []
    for si, s in enumerate(systems):
        t = TARGETS[(aspect, s)]
        for m in range(4):
            row = np.zeros(n + rmax)
            for j, c in enumerate(cols):
                if c[0] == si:
                    row[j] = c[2 + m]
            a_ub += [row, -row]
            b_ub += [t[m] + tol, -(t[m] - tol)]
        for r in range(1, rmax + 1):
            row = np.zeros(n + rmax)
            for j, c in enumerate(cols):
                if c[0] == si and c[1] == r:
                    row[j] = 1.0
            row[n + r - 1] = -1.0
            a_eq.append(row)
            b_eq.append(0.0)
    row = np.zeros(n + rmax)
    row[n:] = 1.0
    a_eq.append(row)
    b_eq.append(1.0)
    res = linprog(np.zeros(n + rmax), A_ub=np.array(a_ub), b_ub=b_ub, A_eq=np.array(a_eq),
                  b_eq=b_eq, bounds=(0, None), method="highs")
    return res.status == 0


def main():
    aspect = sys.argv[1]
    systems = sys.argv[2].split(",")
    tol = float(sys.argv[3]) if len(sys.argv) > 3 else 0.0005
    rmax = int(sys.argv[4]) if len(sys.argv) > 4 else 40
    ok = feasible(aspect, systems, tol, rmax)
    print(f"{aspect} {','.join(systems)} tol={tol}: {'feasible' if ok else 'infeasible'}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
