"""Run the randomized suites at acceptance scale and write one JSON report.

    python3 scripts/run_suites.py --out reports/acceptance.json
"""
import argparse
import json
import time
from dataclasses import asdict, dataclass

from slicedev.suites import run_suite


@dataclass(frozen=True)
class SuiteRun:
    suite: str
    trials: int
    seed: int


DEFAULT_RUNS = (SuiteRun("arm", 10_000, 42), SuiteRun("indicatrix", 10_000, 42),
                SuiteRun("slice", 1000, 7))


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", default="-")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--scale", type=float, default=1.0, help="multiply every trial count")
    args = ap.parse_args()

    result = {}
    for run in DEFAULT_RUNS:
        trials = max(1, round(run.trials * args.scale))
        start = time.perf_counter()
        rep = run_suite(run.suite, trials, run.seed, args.jobs)
        elapsed = time.perf_counter() - start
        print(f"{run.suite}: {trials} trials, {len(rep['failures'])} failures, "
              f"min margin {rep['min_margin']}, {elapsed:.1f}s")
        result[run.suite] = {"config": {**asdict(run), "trials": trials}, "elapsed_s": elapsed,
                             "report": rep}
    text = json.dumps(result, indent=2, sort_keys=True)
    if args.out == "-":
        print(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")


if __name__ == "__main__":
    main()
