"""Fitted shift constant across depths, with per-cube and cube-invariant random shifts.

For each shift the fitted constant is ``max_t ||T||_{L^2(w_t)} / core(w_t)``
over two-valued weights.  Cube-invariant shifts give the same constant at
every depth; shifts drawn independently per cube drift because the largest
block norm grows with the number of cubes.
"""
import argparse

import numpy as np

from dyadlab.bounds import bound_a2_shift
from dyadlab.constants import constants_report, weighted_l2_norm_exact
from dyadlab.grid import DyadicGrid, WeightFamilySpec, materialize
from dyadlab.shifts import build_shift


def fitted(kind, m, n, seed, depth, invariant, ts):
    grid = DyadicGrid(depth)
    sha = build_shift(grid, m, n, kind, seed=seed, invariant=invariant)
    T = sha.matrix()
    best, ratios = 0.0, []
    for t in ts:
        w = materialize(WeightFamilySpec.two_valued(t), grid)
        cr = constants_report(w, 2.0)
        norm = weighted_l2_norm_exact(T, w)
        best = max(best, norm / bound_a2_shift(cr, sha.complexity))
        ratios.append(norm / cr.ap)
    return best, ratios


def run():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--count", type=int, default=5)
    parser.add_argument("--depths", default="6,8,10")
    args = parser.parse_args()
    depths = [int(d) for d in args.depths.split(",")]
    ts = [2.0 ** k for k in range(2, 15)]
    rng = np.random.default_rng(args.seed)
    specs = [("petermichl", 0, 1, None)]
    specs += [("random", int(rng.integers(0, 3)), int(rng.integers(0, 3)), int(rng.integers(1 << 30))) for _ in range(args.count)]
    print("kind,m,n,invariant," + ",".join(f"C_N{d}" for d in depths) + ",deviation,ratio_decreasing_t>=16")
    for kind, m, n, seed in specs:
        for invariant in ((False,) if kind == "petermichl" else (False, True)):
            fits, dec = [], None
            for d in depths:
                c, ratios = fitted(kind, m, n, seed, d, invariant, ts)
                fits.append(c)
                if d == 8:
                    tail = ratios[2:]
                    dec = all(b < a for a, b in zip(tail, tail[1:]))
            arr = np.array(fits)
            dev = float(np.max(np.abs(arr / arr.mean() - 1)))
            print(f"{kind},{m},{n},{invariant}," + ",".join(f"{c:.4f}" for c in fits) + f",{dev:.3f},{dec}")


if __name__ == "__main__":
    run()
