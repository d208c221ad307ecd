"""Run every suite over the desk matrix and print one summary row per model."""
import argparse
import time

from galconf.model import desk_matrix
from galconf.suites import SUITES, run


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--suite", choices=SUITES + ("all",), default="all")
    args = ap.parse_args()
    print(f"{'model':<24}{'passed':>8}{'failed':>8}{'discrep':>9}{'seconds':>9}")
    for cfg in desk_matrix():
        start = time.perf_counter()
        rep = run(cfg, args.suite)
        s = rep.summary
        print(f"{cfg.label():<24}{s['passed']:>8}{s['failed']:>8}{s['discrepancies']:>9}"
              f"{time.perf_counter() - start:>9.2f}")
        for c in rep.checks:
            if c.status == "reported-discrepancy":
                print(f"    {c.id}")


if __name__ == "__main__":
    main()
