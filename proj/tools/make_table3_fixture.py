#!/usr/bin/env python3
"""Builds qrels and four top-15 runs over the 42 AskNature queries whose mean
P@7, P@15, NDCG@7 and NDCG@15 round to the Table 3 target values.

Two steps, both exact solvers (scipy HiGHS):
  1. Per aspect, an LP over per-query hit patterns picks how many queries get
     each judged-relevant count R.
  2. With R fixed per query, a MILP chooses the relevance bit of every rank of
     every run. P totals are equalities, matched NDCG means lie within
     TOL of the target, and the relevant items the four systems retrieve for a
     query fit in R. Relevant items of one (challenge, strategy) type are
     shared across systems, so per aspect the union is the sum over types of
     the largest per-system count. Judged items no system retrieved in the top
     15 fill the remainder of R.

Rows outside MATCHED_NDCG are pulled towards their targets by the objective.

Usage: make_table3_fixture.py [out_dir]
"""
import math
import sys
from pathlib import Path

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, linprog, milp
from scipy.sparse import lil_matrix

SYSTEMS = ["baseline_filtered", "baseline_entire", "barcode_filtered", "barcode_entire"]
ASPECTS = ["challenge", "strategy"]
# (aspect, system) -> (P@7, NDCG@7, P@15, NDCG@15)
TARGETS = {
    ("challenge", "baseline_filtered"): (0.272, 0.554, 0.224, 0.557),
    ("challenge", "baseline_entire"): (0.282, 0.536, 0.240, 0.554),
    ("challenge", "barcode_filtered"): (0.541, 0.736, 0.435, 0.745),
    ("challenge", "barcode_entire"): (0.565, 0.787, 0.541, 0.798),
    ("strategy", "baseline_filtered"): (0.286, 0.565, 0.252, 0.579),
    ("strategy", "baseline_entire"): (0.357, 0.647, 0.295, 0.658),
    ("strategy", "barcode_filtered"): (0.568, 0.763, 0.514, 0.772),
    ("strategy", "barcode_entire"): (0.718, 0.884, 0.694, 0.877),
}
# NDCG rows held within TOL. With the judged-relevant count shared by the four
# systems of a query, the strategy NDCG of BARcode Entire cannot be reached
# together with either baseline's strategy NDCG (see
# check_table3_feasibility.py), so the baseline strategy rows are soft.
MATCHED_NDCG = [key for key in TARGETS
                if key[0] == "challenge" or key[1].startswith("barcode")]
TOL = 0.0004
DEPTH = 15
RMAX = 30
DISC = [1.0 / math.log2(r + 2) for r in range(DEPTH)]
IDEAL = [0.0]
for d in DISC:
    IDEAL.append(IDEAL[-1] + d)


def ideal(k, r):
    return IDEAL[min(k, r)]


def query_ids(path):
    ids = []
    for line in Path(path).read_text().splitlines():
        if line and not line.startswith("#"):
            ids.append(line.split("\t")[0])
    return ids


def hit_totals(key, nq):
    t = TARGETS[key]
    return round(t[0] * 7 * nq), round(t[2] * DEPTH * nq)


def corners(lo, hi, h):
    seg = DISC[lo:hi]
    return {sum(seg[:h]), sum(seg[len(seg) - h:]) if h else 0.0}


def relevant_counts(aspect, nq):
    """LP over query fractions; returns the R of each query, descending."""
    cols = []
    for si in range(len(SYSTEMS)):
        for r in range(1, RMAX + 1):
            for h7 in range(8):
                for h2 in range(9):
                    if h7 + h2 > r:
                        continue
                    for d1 in corners(0, 7, h7):
                        for d2 in corners(7, DEPTH, h2):
                            cols.append((si, r, (h7 / 7, d1 / ideal(7, r), (h7 + h2) / DEPTH,
                                                 (d1 + d2) / ideal(DEPTH, r))))
    n = len(cols)
    # Variables: column weights, R weights, then |deviation| slacks for
    # unmatched NDCG rows.
    soft = [(si, m) for si, s in enumerate(SYSTEMS) if (aspect, s) not in MATCHED_NDCG
            for m in (1, 3)]
    nv = n + RMAX + 2 * len(soft)
    a_ub, b_ub, a_eq, b_eq = [], [], [], []
    for si, s in enumerate(SYSTEMS):
        t = TARGETS[(aspect, s)]
        for m in range(4):
            row = np.zeros(nv)
            for j, c in enumerate(cols):
                if c[0] == si:
                    row[j] = c[2][m]
            if (si, m) in soft:
                k = n + RMAX + 2 * soft.index((si, m))
                row[k], row[k + 1] = -1.0, 1.0
                a_eq.append(row)
                b_eq.append(t[m])
            else:
                a_ub += [row, -row]
                b_ub += [t[m] + TOL / 2, -(t[m] - TOL / 2)]
        for r in range(1, RMAX + 1):
            row = np.zeros(nv)
            for j, c in enumerate(cols):
                if c[0] == si and c[1] == r:
                    row[j] = 1.0
            row[n + r - 1] = -1.0
            a_eq.append(row)
            b_eq.append(0.0)
    row = np.zeros(nv)
    row[n:n + RMAX] = 1.0
    a_eq.append(row)
    b_eq.append(1.0)
    cost = np.zeros(nv)
    cost[n + RMAX:] = 1.0
    res = linprog(cost, A_ub=np.array(a_ub), b_ub=b_ub, A_eq=np.array(a_eq), b_eq=b_eq,
                  bounds=(0, None), method="highs")
    if res.status != 0:
        sys.exit(f"{aspect}: relevant-count LP infeasible")
    w = res.x[n:n + RMAX] * nq
    counts = np.floor(w).astype(int)
    for r in np.argsort(-(w - counts))[:nq - counts.sum()]:
        counts[r] += 1
    out = []
    for r in range(RMAX, 0, -1):
        out += [r] * counts[r - 1]
    return out


def solve_bits(rel, nq, time_limit):
    """MILP over the relevance bits of every (aspect, system, query, rank)."""
    index = {}

    def var(*key):
        if key not in index:
            index[key] = len(index)
        return index[key]

    for a in ASPECTS:
        for s in SYSTEMS:
            for q in range(nq):
                for i in range(DEPTH):
                    var("x", a, s, q, i)
    for s in SYSTEMS:
        for q in range(nq):
            for i in range(DEPTH):
                var("both", s, q, i)
    for q in range(nq):
        for t in ("11", "10", "01"):
            var("max", t, q)
    soft = [(a, s, m) for (a, s) in TARGETS if (a, s) not in MATCHED_NDCG for m in (1, 3)]
    for key in soft:
        var("dev+", *key)
        var("dev-", *key)
    nv = len(index)
    rows, lo, hi = [], [], []

    def add(coeffs, lower, upper):
        rows.append(coeffs)
        lo.append(lower)
        hi.append(upper)

    for a in ASPECTS:
        for s in SYSTEMS:
            h7, h15 = hit_totals((a, s), nq)
            add({var("x", a, s, q, i): 1 for q in range(nq) for i in range(7)}, h7, h7)
            add({var("x", a, s, q, i): 1 for q in range(nq) for i in range(DEPTH)}, h15, h15)
            for m, k in ((1, 7), (3, DEPTH)):
                coeffs = {var("x", a, s, q, i): DISC[i] / ideal(k, rel[(a, q)])
                          for q in range(nq) for i in range(k)}
                target = TARGETS[(a, s)][m] * nq
                if (a, s, m) in soft:
                    coeffs[var("dev+", a, s, m)] = -1
                    coeffs[var("dev-", a, s, m)] = 1
                    add(coeffs, target, target)
                else:
                    add(coeffs, target - TOL * nq, target + TOL * nq)
    for s in SYSTEMS:
        for q in range(nq):
            for i in range(DEPTH):
                b, c, st = var("both", s, q, i), var("x", "challenge", s, q, i), \
                    var("x", "strategy", s, q, i)
                add({b: 1, c: -1}, -np.inf, 0)
                add({b: 1, st: -1}, -np.inf, 0)
                add({b: 1, c: -1, st: -1}, -1, np.inf)
            both = {var("both", s, q, i): 1 for i in range(DEPTH)}
            add({**both, var("max", "11", q): -1}, -np.inf, 0)
            only_c = {var("x", "challenge", s, q, i): 1 for i in range(DEPTH)}
            only_s = {var("x", "strategy", s, q, i): 1 for i in range(DEPTH)}
            for k in both:
                only_c[k] = -1
                only_s[k] = -1
            add({**only_c, var("max", "10", q): -1}, -np.inf, 0)
            add({**only_s, var("max", "01", q): -1}, -np.inf, 0)
    for q in range(nq):
        add({var("max", "11", q): 1, var("max", "10", q): 1}, -np.inf, rel[("challenge", q)])
        add({var("max", "11", q): 1, var("max", "01", q): 1}, -np.inf, rel[("strategy", q)])

    a_mat = lil_matrix((len(rows), nv))
    for r, coeffs in enumerate(rows):
        for j, v in coeffs.items():
            a_mat[r, j] = v
    cost = np.zeros(nv)
    upper = np.ones(nv)
    integrality = np.ones(nv)
    for key, j in index.items():
        if key[0] in ("dev+", "dev-"):
            cost[j] = 1.0
            upper[j] = np.inf
            integrality[j] = 0
        elif key[0] == "max":
            upper[j] = DEPTH
    res = milp(cost, constraints=LinearConstraint(a_mat.tocsr(), lo, hi),
               integrality=integrality, bounds=Bounds(np.zeros(nv), upper),
               options={"time_limit": time_limit, "disp": False})
    if res.x is None:
        return None
    bits = {(a, s): [[int(round(res.x[index[("x", a, s, q, i)]])) for i in range(DEPTH)]
                     for q in range(nq)] for a in ASPECTS for s in SYSTEMS}
    return bits


def metrics(bits, rel, a, s, nq):
    sums = [0.0] * 4
    for q in range(nq):
        b = bits[(a, s)][q]
        r = rel[(a, q)]
        d7 = sum(DISC[i] for i in range(7) if b[i])
        d15 = d7 + sum(DISC[i] for i in range(7, DEPTH) if b[i])
        for m, v in enumerate((sum(b[:7]) / 7, d7 / ideal(7, r), sum(b) / DEPTH,
                               d15 / ideal(DEPTH, r))):
            sums[m] += v
    return [x / nq for x in sums]


def write(bits, rel, qids, out):
    out.mkdir(parents=True, exist_ok=True)
    qrels = []
    runs = {s: [] for s in SYSTEMS}
    for q, qid in enumerate(qids):
        pools = {}  # type -> list of sentence ids, shared across systems
        judged = {}

        def take(t, counter):
            pool = pools.setdefault(t, [])
            if counter[t] >= len(pool):
                sid = f"{qid}:r{t[0]}{t[1]}:{len(pool)}"
                pool.append(sid)
                judged[sid] = t
            sid = pool[counter[t]]
            counter[t] += 1
            return sid

        for s in SYSTEMS:
            counter = {(1, 1): 0, (1, 0): 0, (0, 1): 0}
            for i in range(DEPTH):
                t = (bits[("challenge", s)][q][i], bits[("strategy", s)][q][i])
                if t == (0, 0):
                    sid = f"{qid}:{s}:n{i}"
                    judged[sid] = t
                else:
                    sid = take(t, counter)
                runs[s].append((qid, i + 1, sid, round(1.0 - i / DEPTH, 6)))
        n_c = sum(1 for t in judged.values() if t[0])
        n_s = sum(1 for t in judged.values() if t[1])
        assert n_c <= rel[("challenge", q)] and n_s <= rel[("strategy", q)], qid
        for j in range(rel[("challenge", q)] - n_c):
            judged[f"{qid}:extra_c:{j}"] = (1, 0)
        for j in range(rel[("strategy", q)] - n_s):
            judged[f"{qid}:extra_s:{j}"] = (0, 1)
        for sid in sorted(judged):
            c, s_ = judged[sid]
            qrels.append(f"{qid}\t{sid}\t{c}\t{s_}")
    (out / "qrels.tsv").write_text("\n".join(qrels) + "\n")
    for s, rows in runs.items():
        lines = [f"{a}\t{b}\t{c}\t{d}" for a, b, c, d in rows]
        (out / f"{s}.run.tsv").write_text("\n".join(lines) + "\n")


def main():
    root = Path(__file__).resolve().parent.parent
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else root / "fixtures" / "table3"
    qids = query_ids(root / "data" / "queries" / "asknature.tsv")
    nq = len(qids)
    assert nq == 42, nq
    rel = {}
    for a in ASPECTS:
        # Queries are paired by rank of R across aspects.
        for q, r in enumerate(relevant_counts(a, nq)):
            rel[(a, q)] = r
    bits = solve_bits(rel, nq, time_limit=600)
    if bits is None:
        sys.exit("no relevance assignment found")
    ok = True
    for key, t in TARGETS.items():
        got = metrics(bits, rel, *key, nq)
        matched = [0, 2] + ([1, 3] if key in MATCHED_NDCG else [])
        ok &= all(abs(got[m] - t[m]) <= TOL + 1e-9 for m in matched)
        print(key, "target", t, "got", [round(g, 4) for g in got])
    if not ok:
        sys.exit("solution outside tolerance")
    write(bits, rel, qids, out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
