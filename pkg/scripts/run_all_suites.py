"""Run every verification suite and write one JSON report per suite.

    python3 scripts/run_all_suites.py --seed 7 --out results/
"""
import argparse
import sys
from pathlib import Path

from teichpoisson import verify


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", default="results")
    ap.add_argument("--timings", action="store_true")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ok = True
    for name in verify.SUITES:
        rep = verify.run_suite(name, verify.RunConfig(suite=name, seed=args.seed))
        (out / f"{name}.json").write_text(verify.report_json(rep, args.timings))
        for line in verify.summary_lines(rep):
            print(f"[{name}] {line}")
        ok &= rep.passed
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
