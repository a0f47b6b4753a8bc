"""Optimal TSP length of an EUC_2D TSPLIB file by iterative subtour
elimination (DFJ cuts added until the degree-2 solution is one cycle).

usage: python3 scripts/dfj_optimum.py data/tsplib/st70.tsp
"""
import itertools
import math
import sys

import highspy
import numpy as np


def read_coords(path):
    pts, inside = [], False
    for line in open(path):
        line = line.strip()
        if line == "NODE_COORD_SECTION":
            inside = True
        elif line == "EOF":
            break
        elif inside and line:
            _, x, y = line.split()
            pts.append((float(x), float(y)))
    return pts


def main(path):
    pts = read_coords(path)
    n = len(pts)
    edges = list(itertools.combinations(range(n), 2))
    cost = [math.floor(math.dist(pts[i], pts[j]) + 0.5) for i, j in edges]
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("mip_rel_gap", 0.0)
    m = len(edges)
    h.addVars(m, np.zeros(m), np.ones(m))
    h.changeColsIntegrality(m, np.arange(m, dtype=np.int32), np.full(m, highspy.HighsVarType.kInteger))
    h.changeColsCost(m, np.arange(m, dtype=np.int32), np.array(cost, dtype=float))
    for v in range(n):
        idx = [k for k, (i, j) in enumerate(edges) if v in (i, j)]
        h.addRow(2.0, 2.0, len(idx), np.array(idx, dtype=np.int32), np.ones(len(idx)))
    rounds = 0
    while True:
        h.run()
        x = h.getSolution().col_value
        adj = {v: [] for v in range(n)}
        for k, (i, j) in enumerate(edges):
            if x[k] > 0.5:
                adj[i].append(j)
                adj[j].append(i)
        seen, comps = set(), []
        for s in range(n):
            if s in seen:
                continue
            comp, stack = [], [s]
            seen.add(s)
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in adj[v]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            comps.append(set(comp))
        if len(comps) == 1:
            break
        rounds += 1
        for c in comps:
            idx = [k for k, (i, j) in enumerate(edges) if i in c and j in c]
            h.addRow(-highspy.kHighsInf, len(c) - 1.0, len(idx), np.array(idx, dtype=np.int32), np.ones(len(idx)))
    print(f"{path}: n={n} optimum={round(h.getInfo().objective_function_value)} cut_rounds={rounds}")


if __name__ == "__main__":
    main(sys.argv[1])
