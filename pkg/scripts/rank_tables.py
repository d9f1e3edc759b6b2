"""Density and strain-rate rank tables for m = 1..5 and n = 1..5 Gauss points.

    python3 scripts/rank_tables.py [--seed 3]
"""

import argparse

from staghydro.analysis import density_dof_rank, reference_coords, strain_rate_rank


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, help="perturb the element nodes")
    ap.add_argument("--max-m", type=int, default=5)
    args = ap.parse_args()

    print("density DOFs (rank of shape values at n x n Gauss points)")
    print("  m\\n " + "".join(f"{n:>5d}" for n in range(1, 6)))
    for m in range(1, args.max_m + 1):
        print(f"  {m:3d} " + "".join(f"{density_dof_rank(m, n).rank:>5d}" for n in range(1, 6)))

    print("\nstrain-rate deficiency (hourglass modes) against 2(m+1)^2 - 3")
    print("  m\\n " + "".join(f"{n:>5d}" for n in range(1, 6)))
    for m in range(1, args.max_m + 1):
        coords = reference_coords(m)
        if args.seed is not None:
            import numpy as np

            coords = coords + np.random.default_rng(args.seed).uniform(-0.1, 0.1, coords.shape) / m
        defs = [strain_rate_rank(m, n, coords).deficiency for n in range(1, 6)]
        flag = "" if m <= 3 else "   outside paper's claimed regime"
        print(f"  {m:3d} " + "".join(f"{d:>5d}" for d in defs) + flag)


if __name__ == "__main__":
    main()
