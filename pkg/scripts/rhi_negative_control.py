"""Search for reverse Holder violations when the scale tau is too small.

With ``r = 1 + 1/(tau [w]'_{A_inf})`` the worst ratio
``<w^r>^{1/r} / <w>`` over cubes is reported for random weights, spikes,
near-critical powers and locally optimized profiles, for several tau.
"""
import argparse

import numpy as np
from scipy.optimize import minimize

from dyadlab.constants import rhi_exponent, rhi_verify
from dyadlab.grid import Weight
from dyadlab.suite import SuiteConfig, negative_control_family


def worst(w, tau):
    return rhi_verify(w, rhi_exponent(w, tau)).worst_ratio


def optimize_profile(depth, tau, starts=(1.6, 2.0), maxfev=4000):
    """Powell ascent on log-weights from dyadic-annulus starting profiles."""
    n = 1 << depth
    j = np.floor(-np.log2((np.arange(n) + 0.5) / n))

    def obj(x):
        # keep leaves representable while the search pushes the dynamic range
        return -worst(Weight(np.exp(np.maximum(x - x.max(), -600.0))), tau)

    best = 0.0
    for a in starts:
        res = minimize(obj, j * np.log(a), method="Powell", options={"maxfev": maxfev, "xtol": 1e-4})
        best = max(best, -res.fun)
    return best


def run():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--taus", default="0.5,1,2,4")
    parser.add_argument("--opt-depth", type=int, default=6)
    args = parser.parse_args()
    family = negative_control_family(SuiteConfig())
    print("tau,weights,violations,worst_family,worst_optimized")
    for tau in (float(x) for x in args.taus.split(",")):
        ratios = [worst(w, tau) for w in family]
        opt = optimize_profile(args.opt_depth, tau)
        print(f"{tau},{len(ratios)},{sum(r > 2 for r in ratios)},{max(ratios):.4f},{opt:.4f}")


if __name__ == "__main__":
    run()
