"""Carleman partial sums and fitted tail exponents versus the cut-off n_max.

The fitted exponent should settle near (2r+1)/2 as n_max grows; the partial
sum plus its tail bound brackets the full series.
"""

import argparse

from hypercs.momentproblem import carleman_sum, log_convexity_check


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--r", type=int, nargs="+", default=[1, 2, 3])
    parser.add_argument("--n-max", type=int, nargs="+", default=[100, 300, 1000, 3000])
    args = parser.parse_args()

    print("r,n_max,partial_sum,tail_bound,exponent,expected")
    for r in args.r:
        for n_max in args.n_max:
            res = carleman_sum(r, n_max)
            print(
                f"{r},{n_max},{res.partial_sum:.12g},{res.tail_bound:.3e},"
                f"{res.exponent:.4f},{(2 * r + 1) / 2}"
            )
    for r in args.r:
        print(f"# r={r}: min psi'' on u in [-4, 4] = {log_convexity_check(r):.4f}")


if __name__ == "__main__":
    main()
