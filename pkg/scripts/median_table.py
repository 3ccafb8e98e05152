"""Per-n medians and quartiles of one quantity from a report CSV.

    python scripts/median_table.py results/pointwise.csv h_n
    python scripts/median_table.py results/measure.csv Q_n --param bump --column abs_error
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from cheeger_lab.harness import ExperimentReport


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("csv")
    parser.add_argument("quantity")
    parser.add_argument("--param", default=None)
    parser.add_argument("--column", default="value", choices=("value", "abs_error", "rel_error"))
    args = parser.parse_args(argv)

    with open(args.csv) as fh:
        report = ExperimentReport.from_csv(fh.read())
    rows = report.select(args.quantity, args.param)
    if not rows:
        print(f"no rows for quantity {args.quantity!r}", file=sys.stderr)
        return 1
    print(f"{'n':>8} {'count':>6} {'q1':>12} {'median':>12} {'q3':>12}  target")
    for n in sorted({r.n for r in rows}):
        sel = [r for r in rows if r.n == n]
        vals = np.array([getattr(r, args.column) for r in sel], dtype=float)
        q1, med, q3 = np.percentile(vals, [25, 50, 75])
        targets = {r.target for r in sel}
        target = f"{targets.pop():.6g}" if len(targets) == 1 and None not in targets else "-"
        print(f"{n:>8} {len(sel):>6} {q1:>12.6g} {med:>12.6g} {q3:>12.6g}  {target}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
