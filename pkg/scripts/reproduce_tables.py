"""Rebuild the bandwidth, time-constant and gain-variation comparison tables.

Writes ``table{3,4,5}.csv`` and ``.json`` into the output directory and prints
a compact view with the residual against the printed reference values.

    python scripts/reproduce_tables.py --out results/tables
"""

import argparse
import json
import os

from sfclab.sim import write_atomic
from sfclab.tables import build_table


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results/tables")
    ap.add_argument("which", nargs="*", type=int, help="any of 3, 4, 5 (default: all)")
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    for which in args.which or [3, 4, 5]:
        report = build_table(which)
        write_atomic(os.path.join(args.out, f"table{which}.csv"), report.to_csv())
        write_atomic(os.path.join(args.out, f"table{which}.json"), json.dumps(report.to_dict(), indent=2) + "\n")
        print(f"table {which}: {report.quantity} vs {report.input_label}")
        print(f"  {'input':>8} {'analytic':>12} {'numeric':>12} {'rel.err':>8} {'ref.num':>10} {'resid':>10}")
        for r in report.rows:
            print(
                f"  {r['input']:8g} {r['analytic']:12.5g} {r['numeric']:12.5g} {r['relative_error']:8.3%}"
                f" {r['reference_numeric']:10.4g} {r['numeric_residual_vs_reference']:10.3g}"
            )


if __name__ == "__main__":
    main()
