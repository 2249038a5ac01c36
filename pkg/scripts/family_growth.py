#!/usr/bin/env python3
"""Study the cyclic family a0 -> a0 a1, a_i -> a_{i+1}, a_{n-1} -> a0.

For each rank the script runs a sweep, reports the index against its
theoretical ceiling (n - 1), and reports the largest expansion power the
run recorded against the reference value 2n - 2, which these maps are
expected to approach.
"""

import argparse
import json
import sys

from fgindex.cli import analyze, index_fraction
from fgindex.config import DEFAULT_BUDGET, RunConfig
from fgindex.families import cyclic_family


def study(n, max_k, budget):
    phi = cyclic_family(n)
    analysis = analyze(phi, RunConfig(max_k=max_k, budget=budget))
    result = analysis.result
    return {
        "rank": n,
        "index": index_fraction(analysis.doubled),
        "index_ceiling": n - 1,
        "complete": result.complete,
        "levels": f"{result.k_reached}/{result.k_target}",
        "classes": len(result.singularities),
        "max_power": result.max_rho_power,
        "max_power_reference": 2 * n - 2,
        "budget_used": result.budget_used,
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--min-n", type=int, default=2)
    parser.add_argument("--max-n", type=int, default=6)
    parser.add_argument("--max-k", type=int, default=None, help="level cap")
    parser.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    parser.add_argument("--json", type=str, default=None, help="write records here")
    args = parser.parse_args(argv)
    if args.min_n < 2 or args.max_n < args.min_n:
        parser.error("need 2 <= min-n <= max-n")
    records = [
        study(n, args.max_k, args.budget)
        for n in range(args.min_n, args.max_n + 1)
    ]
    for r in records:
        gap = "at" if r["max_power"] == r["max_power_reference"] else "below"
        print(
            f"rank {r['rank']:>2}: index {r['index']} (ceiling {r['index_ceiling']}), "
            f"{r['classes']} classes, levels {r['levels']}"
            f"{'' if r['complete'] else ' (truncated)'}, "
            f"max power {r['max_power']} ({gap} reference {r['max_power_reference']})"
        )
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(records, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
