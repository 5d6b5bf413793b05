"""Run every law suite on both spacetimes and print a compact table.

    python scripts/verify_all_laws.py --seed 42 --trials 1000 --json reports.json
"""
import argparse
import sys
import time
from dataclasses import dataclass

from nullbundle import bundle as bd
from nullbundle import laws


@dataclass(frozen=True)
class Config:
    seed: int = 42
    trials: int = 1000
    json: str | None = None


def parse(argv=None) -> Config:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=Config.seed)
    p.add_argument("--trials", type=int, default=Config.trials)
    p.add_argument("--json", default=None, help="also write the reports as JSON")
    a = p.parse_args(argv)
    return Config(a.seed, a.trials, a.json)


def main(argv=None) -> int:
    cfg = parse(argv)
    reports = []
    for name in sorted(bd.SPACETIMES):
        st = bd.get_spacetime(name)
        for suite in laws.SUITES:
            t0 = time.perf_counter()
            rep = laws.run_suite(suite, st, cfg.seed, cfg.trials)
            dt = time.perf_counter() - t0
            reports.append(rep)
            flag = "ok  " if rep.passed else "FAIL"
            print(f"{flag} {rep.law:<48} failures={rep.failures:<5} "
                  f"max={rep.max_residual:.2e} tol={rep.tol:.0e} {dt:6.2f}s")
    if cfg.json:
        with open(cfg.json, "w") as fh:
            fh.write(laws.reports_json(reports))
    return 0 if all(r.passed for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
