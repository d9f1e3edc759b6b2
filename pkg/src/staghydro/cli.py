"""Command-line driver: ``staghydro run | converge | analyze``.

Exit codes: 0 success, 1 configuration error, 2 tangled element.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
import time

from .analysis import analyze as analyze_report
from .config import ConfigError, RunConfig, load_config, with_overrides
from .mesh import perturb_interior, uniform_quad_mesh
from .problems import PROBLEMS
from .solver import TangledElementError, advance, init_state, l2_density_error
from .vtkio import write_state_vtk

SUMMARY_SCHEMA = "# staghydro summary v1"
CONVERGENCE_SCHEMA = "# staghydro convergence v1"
SUMMARY_COLUMNS = ["problem", "m", "nx", "ny", "t_final", "cfl", "dt_cap_coefficient",
                   "steps", "l2_density_error", "energy_drift"]
CONVERGENCE_COLUMNS = ["h", "kin_dofs", "thermo_dofs", "error", "observed_order"]

EXIT_OK, EXIT_CONFIG, EXIT_TANGLED = 0, 1, 2


def _g(x) -> str:
    return f"{x:.10e}" if isinstance(x, float) else str(x)


def simulate(cfg: RunConfig, snapshot_dir=None) -> dict:
    """Run one configuration in memory and return the summary record."""
    cfg.validate()
    mesh = uniform_quad_mesh(cfg.nx, cfg.n_y, cfg.m)
    if cfg.seed is not None:
        mesh = perturb_interior(mesh, cfg.perturb_amplitude, cfg.seed)
    problem = PROBLEMS[cfg.problem](source=cfg.energy_source, gamma=cfg.gamma,
                                    t_final=cfg.t_final, cfl=cfg.cfl)
    state = init_state(mesh, problem)

    on_step = None
    if snapshot_dir is not None and cfg.snapshot_interval > 0:
        def on_step(s, k):
            if k % cfg.snapshot_interval == 0:
                write_state_vtk(s, os.path.join(snapshot_dir, f"snapshot_{k:06d}.vtk"))

    t0 = time.perf_counter()
    result = advance(state, cfg.t_final, cfg.cfl, dt_cap=cfg.dt_cap(), on_step=on_step)
    wall = time.perf_counter() - t0
    return {
        "problem": cfg.problem, "m": cfg.m, "nx": cfg.nx, "ny": cfg.n_y,
        "t_final": cfg.t_final, "cfl": cfg.cfl, "dt_cap_coefficient": cfg.dt_cap_coefficient,
        "steps": result.steps, "l2_density_error": l2_density_error(result.state),
        "energy_drift": result.energy_drift, "wall_time": wall,
        "kin_dofs": mesh.n_kin, "thermo_dofs": mesh.n_thermo, "state": result.state,
    }


def run(cfg: RunConfig) -> dict:
    """Simulate and write ``summary.csv`` and ``final.vtk`` into ``cfg.out``.

    Wall time is returned and printed but kept out of the CSV so identical
    configurations give byte-identical files.
    """
    os.makedirs(cfg.out, exist_ok=True)
    summary = simulate(cfg, snapshot_dir=cfg.out)
    with open(os.path.join(cfg.out, "summary.csv"), "w", newline="") as fh:
        fh.write(SUMMARY_SCHEMA + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        w.writerow([_g(summary[c]) for c in SUMMARY_COLUMNS])
    write_state_vtk(summary["state"], os.path.join(cfg.out, "final.vtk"))
    return summary


def observed_orders(hs, errors) -> list:
    orders = [None]
    for (h0, e0), (h1, e1) in zip(zip(hs, errors), zip(hs[1:], errors[1:])):
        if e0 == 0.0 or e1 == 0.0:
            orders.append(float("nan"))
        elif h0 == h1:
            orders.append(math.log2(e0 / e1))
        else:
            orders.append(math.log(e0 / e1) / math.log(h0 / h1))
    return orders


def converge(cfg: RunConfig, levels, log=print) -> list:
    """Run each grid level and write ``convergence.csv``; returns the rows."""
    if len(levels) < 2:
        raise ConfigError("need at least two levels")
    rows = []
    for n in levels:
        s = simulate(with_overrides(cfg, nx=n, ny=n))
        rows.append({"h": 1.0 / n, "kin_dofs": s["kin_dofs"], "thermo_dofs": s["thermo_dofs"],
                     "error": s["l2_density_error"]})
        if log:
            log(f"n={n:4d} steps={s['steps']:6d} error={s['l2_density_error']:.4e} "
                f"({s['wall_time']:.1f}s)")
    for row, o in zip(rows, observed_orders([r["h"] for r in rows], [r["error"] for r in rows])):
        row["observed_order"] = o
    os.makedirs(cfg.out, exist_ok=True)
    with open(os.path.join(cfg.out, "convergence.csv"), "w", newline="") as fh:
        fh.write(f"{CONVERGENCE_SCHEMA} problem={cfg.problem} m={cfg.m} t_final={cfg.t_final!r}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CONVERGENCE_COLUMNS)
        for r in rows:
            o = "" if r["observed_order"] is None else f"{r['observed_order']:.4f}"
            w.writerow([_g(r["h"]), r["kin_dofs"], r["thermo_dofs"], _g(r["error"]), o])
    return rows


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _add_run_options(p):
    p.add_argument("--config", help="key = value config file; flags override it")
    p.add_argument("--problem", choices=sorted(PROBLEMS))
    p.add_argument("--m", type=int, help="space pair Q^m - Q^(m-1) (default 2)")
    p.add_argument("--tfinal", type=float, dest="t_final", help="end time (default 0.5)")
    p.add_argument("--cfl", type=float, help="CFL number (default 0.05)")
    p.add_argument("--dt-cap", type=float, dest="dt_cap_coefficient",
                   help="c0 in dt <= c0 h^((m+1)/2); 0 disables (default 0.05)")
    p.add_argument("--gamma", type=float, help="adiabatic index (default 5/3)")
    p.add_argument("--no-source", action="store_const", const=False, dest="energy_source",
                   help="drop the Taylor-Green energy source")
    p.add_argument("--out", help="output directory (default ./out)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="staghydro", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="run one simulation")
    _add_run_options(p)
    p.add_argument("--n", type=int, dest="nx", help="elements per direction (default 16)")
    p.add_argument("--ny", type=int, help="elements in z if different from --n")
    p.add_argument("--snapshot-every", type=int, dest="snapshot_interval",
                   help="write a VTK snapshot every k steps (default off)")
    p.add_argument("--seed", type=int, help="perturb interior nodes with this seed")

    p = sub.add_parser("converge", help="grid-refinement study")
    _add_run_options(p)
    p.add_argument("--levels", default="4,8,16", help="comma-separated grid sizes (default 4,8,16)")

    p = sub.add_parser("analyze", help="density and strain-rate rank reports")
    p.add_argument("m_pos", nargs="?", type=int, metavar="M")
    p.add_argument("n_pos", nargs="?", type=int, metavar="N")
    p.add_argument("--m", type=int)
    p.add_argument("--quad", type=int, help="Gauss points per direction")
    p.add_argument("--seed", type=int, help="perturb the element nodes")
    return parser


def _config_from_args(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    keys = ["problem", "m", "t_final", "cfl", "dt_cap_coefficient", "gamma",
            "energy_source", "out", "nx", "ny", "snapshot_interval", "seed"]
    return with_overrides(cfg, **{k: getattr(args, k, None) for k in keys}).validate()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            m = args.m if args.m is not None else args.m_pos
            n = args.quad if args.quad is not None else args.n_pos
            if m is None or n is None:
                raise ConfigError("analyze needs m and the quadrature size")
            if not 1 <= m <= 5 or not 1 <= n <= 5:
                raise ConfigError("analyze supports 1 <= m <= 5 and 1 <= n <= 5")
            print(analyze_report(m, n, seed=args.seed))
            return EXIT_OK

        cfg = _config_from_args(args)
        if args.command == "run":
            s = run(cfg)
            print(f"steps={s['steps']} l2_density_error={s['l2_density_error']:.6e} "
                  f"energy_drift={s['energy_drift']:.3e} wall_time={s['wall_time']:.2f}s")
        else:
            levels = [int(v) for v in args.levels.split(",") if v.strip()]
            rows = converge(cfg, levels)
            print(",".join(CONVERGENCE_COLUMNS))
            for r in rows:
                o = "-" if r["observed_order"] is None else f"{r['observed_order']:.4f}"
                print(f"{r['h']:.6g},{r['kin_dofs']},{r['thermo_dofs']},{r['error']:.4e},{o}")
        return EXIT_OK
    except (ValueError, OSError) as exc:
        print(f"staghydro: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TangledElementError as exc:
        print(f"staghydro: aborted: {exc} (element {exc.element}, point {exc.point}, "
              f"t={exc.time:.6g})", file=sys.stderr)
        return EXIT_TANGLED


if __name__ == "__main__":
    sys.exit(main())
