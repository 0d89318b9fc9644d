"""Write the two-valued and power-weight sweep tables to CSV."""
import argparse
from pathlib import Path

from dyadlab.cli import main


def run():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="results")
    parser.add_argument("--depth", type=int, default=8)
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for family in ("two_valued", "power"):
        path = out / f"sweep_{family}_N{args.depth}.csv"
        main(["sweep", "--family", family, "--depth", str(args.depth), "--workers", str(args.workers), "--out", str(path)])
        print(path)


if __name__ == "__main__":
    run()
