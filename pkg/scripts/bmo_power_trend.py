"""Weighted-to-unweighted BMO ratio of log(1/x) against x^(-1+eps) at several depths.

The lower bound ``ratio >= c/eps`` needs the grid to resolve the scale
where ``x^(-1+eps)`` carries its mass, roughly ``2^(-1/eps)``; the table
shows ``ratio * eps`` collapsing once ``1/eps`` exceeds the depth.
"""
import argparse

from dyadlab.suite import power_weight_bmo_trend


def run():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--depths", default="12,16,20,22")
    args = parser.parse_args()
    print("depth,eps,ratio,ratio_times_eps")
    for d in (int(x) for x in args.depths.split(",")):
        for eps, ratio in power_weight_bmo_trend(d).items():
            print(f"{d},{eps},{ratio:.4f},{ratio * eps:.4f}")


if __name__ == "__main__":
    run()
