"""Command-line entry point.

Subcommands: mesh, solve, study, probe-half, gradient-field.
Exit codes: 0 success, 2 configuration/usage error, 3 numerical failure.
The THREADS environment variable overrides the configured thread count.
"""

import argparse
import os
import sys

import numpy as np

from .meshing import (build_disk_mesh, build_graded_1d, build_uniform_1d,
                      mesh_stats, save_mesh)
from .study import (StudyConfig, StudyConfigError, emit_plot,
                    export_gradient_field, grading_exponent,
                    load_study_config, probe_half, run_study,
                    _build_cell_mesh, _solve_cell)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _apply_threads(threads):
    """Clamp to the compiled thread pool; oversubscription is a no-op."""
    import numba

    n = min(int(threads), numba.config.NUMBA_NUM_THREADS)
    numba.set_num_threads(max(1, n))


def _effective_threads(config_threads):
    env = os.environ.get("THREADS")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise StudyConfigError(f"THREADS must be an integer, got {env!r}")
    return config_threads


def _one_cell_config(args):
    return StudyConfig(
        dimension=args.dimension,
        s_values=[args.s],
        grading=args.grading,
        sizes=[args.size],
        mu=args.mu,
        rhs_k=args.k,
    )


def _cmd_mesh(args):
    if args.dimension == 1:
        if args.grading == "uniform":
            mesh = build_uniform_1d(int(args.size))
        else:
            mu = grading_exponent(args.grading, args.s, args.mu)
            mesh = build_graded_1d(max(2, int(args.size) // 2), mu)
    else:
        mu = grading_exponent(args.grading, args.s, args.mu)
        mesh = build_disk_mesh(float(args.size), mu)
    save_mesh(mesh, args.out)
    for k, v in mesh_stats(mesh).items():
        print(f"{k}: {v}")
    return EXIT_OK


def _cmd_solve(args):
    config = _one_cell_config(args)
    mesh = _build_cell_mesh(config, args.s, args.size)
    spec, A, b, sol = _solve_cell(config, mesh, args.s)
    with open(args.out, "w", newline="\n") as f:
        f.write("coefficient\n")
        for c in sol.coefficients:
            f.write(format(float(c), ".12g") + "\n")
    print(f"dofs: {mesh.n_dofs}")
    return EXIT_OK


def _cmd_study(args):
    config = load_study_config(args.config)
    _apply_threads(_effective_threads(config.threads))
    records, summary = run_study(config, out_csv=args.out)
    for s, orders in summary["orders"].items():
        print(f"s={s}: order_h={orders['order_h']:.3f} "
              f"order_dofs={orders['order_dofs']:.3f}")
    for s, size, msg in summary["failures"]:
        print(f"failed cell s={s} size={size}: {msg}", file=sys.stderr)
    if args.plot is not None:
        x_field = "dofs" if config.dimension == 2 else "h"
        emit_plot(args.out, x_field, "h1", args.plot)
    if summary["failures"] and not summary["orders"]:
        return EXIT_NUMERICAL
    return EXIT_OK


def _cmd_probe_half(args):
    config = load_study_config(args.config)
    _apply_threads(_effective_threads(config.threads))
    records = probe_half(config, out_csv=args.out)
    for r in records:
        print(f"dofs={r.dofs} h1_seminorm={r.h1:.6g}")
    return EXIT_OK


def _cmd_gradient_field(args):
    config = _one_cell_config(args)
    mesh = _build_cell_mesh(config, args.s, args.size)
    spec, A, b, sol = _solve_cell(config, mesh, args.s)
    export_gradient_field(sol, args.out)
    print(f"elements: {mesh.n_elements}")
    return EXIT_OK


def _add_cell_args(p, dim_default=None):
    p.add_argument("--dimension", type=int, default=dim_default, required=dim_default is None)
    p.add_argument("--s", type=float, default=0.75)
    p.add_argument("--size", type=float, required=True,
                   help="node count (1D) or mesh parameter h (2D)")
    p.add_argument("--grading", default="uniform")
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--out", required=True)


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="fracfem",
        description="P1 finite elements for the integral fractional Laplacian")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mesh", help="build a mesh and serialize it")
    _add_cell_args(p)
    p.set_defaults(func=_cmd_mesh)

    p = sub.add_parser("solve", help="solve one cell, write coefficients")
    _add_cell_args(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("study", help="run a convergence study")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--plot", default=None)
    p.set_defaults(func=_cmd_study)

    p = sub.add_parser("probe-half", help="s = 1/2 seminorm growth probe")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_probe_half)

    p = sub.add_parser("gradient-field",
                       help="per-element gradient magnitudes (2D)")
    _add_cell_args(p, dim_default=2)
    p.set_defaults(func=_cmd_gradient_field)

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; normalize others
        return EXIT_CONFIG if exc.code not in (0,) else 0
    try:
        return args.func(args)
    except (StudyConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
