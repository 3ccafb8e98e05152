"""Run every shipped config with its pass/fail checks and write reports to an output directory.

    python scripts/run_all_experiments.py --out results
    python scripts/run_all_experiments.py --only pointwise hoeffding
"""

from __future__ import annotations

import argparse
import pathlib
import sys
import time

from cheeger_lab.harness import check_report, load_config, run_experiment

CONFIG_DIR = pathlib.Path(__file__).resolve().parent.parent / "configs"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--out", default="results")
    parser.add_argument("--only", nargs="*", default=None, help="config names without .cfg")
    args = parser.parse_args(argv)

    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    paths = sorted(CONFIG_DIR.glob("*.cfg"))
    if args.only:
        paths = [p for p in paths if p.stem in args.only]
    all_passed = True
    for path in paths:
        cfg = load_config(path)
        start = time.perf_counter()
        report = run_experiment(cfg)
        results = check_report(report, cfg)
        report.write(str(out / path.stem))
        print(f"== {path.stem} ({time.perf_counter() - start:.1f} s)")
        for res in results:
            print("  " + res.line())
        all_passed &= all(r.passed for r in results)
    return 0 if all_passed else 4


if __name__ == "__main__":
    sys.exit(main())
