"""Solve a CPLEX LP file with highspy and write a raw solution plus stats.

usage:
  highs_driver.py solve LP SOL STATS [--time-limit S] [--mip-gap G] [--threads T] [--seed K]
  highs_driver.py fixings LP FIXINGS_JSON OUT_JSON [--time-limit S] [--threads T] [--seed K]
"""
import argparse
import json
import math
import sys
import time

import highspy


def finite(v):
    return v if isinstance(v, (int, float)) and math.isfinite(v) else None


def configure(h, args):
    h.setOptionValue("output_flag", False)
    h.setOptionValue("threads", args.threads)
    h.setOptionValue("random_seed", args.seed)
    h.setOptionValue("time_limit", float(args.time_limit))
    if getattr(args, "mip_gap", None) is not None:
        h.setOptionValue("mip_rel_gap", float(args.mip_gap))


def read(h, path):
    if h.readModel(path) == highspy.HighsStatus.kError:
        print("highs could not read " + path, file=sys.stderr)
        sys.exit(4)


def cmd_solve(args):
    h = highspy.Highs()
    configure(h, args)
    read(h, args.lp)
    start = time.perf_counter()
    h.run()
    wall = time.perf_counter() - start
    info = h.getInfo()
    h.writeSolution(args.sol, 0)
    stats = {
        "model_status": h.modelStatusToString(h.getModelStatus()),
        "primal_solution_status": int(info.primal_solution_status),
        "objective": finite(info.objective_function_value),
        "mip_dual_bound": finite(info.mip_dual_bound),
        "mip_gap": finite(info.mip_gap),
        "nodes": int(max(info.mip_node_count, 0)),
        "runtime_s": wall,
        "highs_version": "%d.%d.%d" % (h.versionMajor(), h.versionMinor(), h.versionPatch()),
    }
    with open(args.stats, "w") as f:
        json.dump(stats, f)


def cmd_fixings(args):
    with open(args.fixings) as f:
        batches = json.load(f)["fixings"]
    h = highspy.Highs()
    configure(h, args)
    read(h, args.lp)
    lp = h.getLp()
    index = {name: i for i, name in enumerate(lp.col_names_)}
    lower = list(lp.col_lower_)
    upper = list(lp.col_upper_)
    statuses = []
    for fixes in batches:
        cols = [index[name] for name, _ in fixes]
        for (name, value), c in zip(fixes, cols):
            h.changeColBounds(c, float(value), float(value))
        h.clearSolver()
        h.run()
        statuses.append(h.modelStatusToString(h.getModelStatus()))
        for c in cols:
            h.changeColBounds(c, lower[c], upper[c])
    with open(args.out, "w") as f:
        json.dump({"statuses": statuses}, f)


def main():
    p = argparse.ArgumentParser()
    sub = p.add_subparsers(dest="cmd", required=True)
    s = sub.add_parser("solve")
    s.add_argument("lp")
    s.add_argument("sol")
    s.add_argument("stats")
    s.add_argument("--mip-gap", type=float, default=0.0)
    x = sub.add_parser("fixings")
    x.add_argument("lp")
    x.add_argument("fixings")
    x.add_argument("out")
    for q in (s, x):
        q.add_argument("--time-limit", type=float, default=3600.0)
        q.add_argument("--threads", type=int, default=1)
        q.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    if args.cmd == "solve":
        cmd_solve(args)
    else:
        cmd_fixings(args)


if __name__ == "__main__":
    main()
