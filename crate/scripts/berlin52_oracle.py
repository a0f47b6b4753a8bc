#!/usr/bin/env python3
"""Solve berlin52 on the complete graph with the Lifted-MTZ baseline and cache
the optimum as data/oracles/berlin52_k52.json.

Usage: scripts/berlin52_oracle.py [--time-limit SECONDS]
Run from the workspace root after `cargo build --release`.
"""

import argparse
import glob
import json
import os
import subprocess
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--time-limit", type=float, default=36000.0)
    ap.add_argument("--binary", default=os.path.join(ROOT, "target", "release", "surftsp"))
    args = ap.parse_args()

    instance = os.path.join(ROOT, "data", "tsplib", "berlin52.tsp")
    with tempfile.TemporaryDirectory() as out:
        cmd = [
            args.binary, "solve",
            "--instance", instance,
            "--complex", "complete",
            "--model", "mtz-baseline",
            "--time-limit", str(args.time_limit),
            "--out", out,
        ]
        proc = subprocess.run(cmd, capture_output=True, text=True)
        sys.stdout.write(proc.stdout)
        sys.stderr.write(proc.stderr)
        reports = glob.glob(os.path.join(out, "*.report.json"))
        if proc.returncode != 0 or len(reports) != 1:
            sys.exit("solve did not finish optimally")
        with open(reports[0]) as f:
            report = json.load(f)

    if report["status"] != "OPTIMAL":
        sys.exit(f"status {report['status']}")
    oracle = {
        "instance": "berlin52",
        "method": "Lifted-MTZ on the complete graph K_52",
        "command": "surftsp solve --instance data/tsplib/berlin52.tsp --complex complete "
                   "--model mtz-baseline",
        "status": report["status"],
        "optimal_length": report["tour_length"],
        "objective": report["objective"],
        "best_bound": report["best_bound"],
        "tour": report["tour"],
        "runtime_s": report["stats"]["runtime_s"],
        "nodes": report["stats"]["nodes"],
        "backend": report["stats"]["backend"],
    }
    dest = os.path.join(ROOT, "data", "oracles", "berlin52_k52.json")
    os.makedirs(os.path.dirname(dest), exist_ok=True)
    with open(dest, "w") as f:
        json.dump(oracle, f, indent=2)
        f.write("\n")
    print(f"wrote {dest}: {oracle['optimal_length']}")


if __name__ == "__main__":
    main()
