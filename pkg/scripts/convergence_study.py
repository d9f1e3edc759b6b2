"""Taylor-Green refinement study for the Q2-Q1 and Q3-Q2 pairs.

    python3 scripts/convergence_study.py                 # desk scale
    python3 scripts/convergence_study.py --full          # adds h = 1/64, 1/128 (hours)
    python3 scripts/convergence_study.py --out results
"""

import argparse
import os

from staghydro.cli import converge
from staghydro.config import RunConfig

DESK = {2: [4, 8, 16, 32], 3: [2, 4, 8, 16]}
FULL = {2: [4, 8, 16, 32, 64, 128], 3: [2, 4, 8, 16, 32, 64, 128]}
REFERENCE = {(2, 16): 1.4342e-3, (3, 16): 1.5194e-4}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--full", action="store_true", help="include the expensive fine levels")
    ap.add_argument("--pairs", default="2,3", help="comma-separated m values")
    ap.add_argument("--cfl", type=float, default=RunConfig.cfl)
    ap.add_argument("--dt-cap", type=float, default=RunConfig.dt_cap_coefficient)
    ap.add_argument("--out", default="results")
    args = ap.parse_args()

    table = FULL if args.full else DESK
    for m in (int(v) for v in args.pairs.split(",")):
        cfg = RunConfig(m=m, cfl=args.cfl, dt_cap_coefficient=args.dt_cap,
                        out=os.path.join(args.out, f"q{m}"))
        print(f"Q{m}-Q{m - 1}")
        rows = converge(cfg, table[m])
        for n, r in zip(table[m], rows):
            order = "-" if r["observed_order"] is None else f"{r['observed_order']:.3f}"
            ref = REFERENCE.get((m, n))
            note = f"  (reference {ref:.4e}, ratio {r['error'] / ref:.2f})" if ref else ""
            print(f"  h=1/{n:<4d} dofs=({r['kin_dofs']},{r['thermo_dofs']}) "
                  f"error={r['error']:.4e} order={order}{note}")


if __name__ == "__main__":
    main()
