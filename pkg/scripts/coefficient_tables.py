"""Print the conformal jet-flow coefficients and the a(l, l') tables."""
import argparse

from galconf.exact_algebra import to_text
from galconf.group_action import conformal_jet_flow
from galconf.model import ModelConfig
from galconf.quasi_invariance import recurrence_direct


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, nargs="+", default=[1, 3, 5, 7])
    args = ap.parse_args()
    for N in args.N:
        cfg = ModelConfig(N, 3 if N % 2 else 2)
        print(f"# N={N}")
        for n in range(cfg.top + 1):
            for k, A in enumerate(conformal_jet_flow(cfg, n)):
                print(f"A[{n},{k}] = {to_text(A)}")
        if cfg.odd:
            for row in recurrence_direct(cfg).as_matrix():
                print("a: " + "  ".join(f"{v:>8}" for v in row))


if __name__ == "__main__":
    main()
