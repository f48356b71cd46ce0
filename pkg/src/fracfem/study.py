"""Convergence-study sweeps: configuration, CSV persistence, SVG plots.

A study is a declarative TOML file naming the dimension, fractional
indices, mesh grading and refinement sizes. run_study walks the grid,
solves each cell and writes one CSV row per (s, size) with fixed columns

    s,mu,dofs,h,h_min,l2,h1,energy,kappa,wall_time_seconds

All floats are formatted with 12 significant digits so reruns of the
same configuration diff clean. The wall_time_seconds column is written
as 0.0 by default for the same reason; pass record_timings=True to get
real (non-reproducible) timings.
"""

import math
from dataclasses import dataclass, field

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

import numpy as np

from .assembly import assemble_stiffness, assemble_load
from .meshing import build_disk_mesh, build_graded_1d, build_uniform_1d
from .norms import (energy_error, fit_order, h1_error,
                    h1_seminorm_discrete, l2_error)
from .problem import Domain, ProblemSpec
from .solve import DiscreteSolution, condition_estimate, solve_spd

__all__ = [
    "StudyConfig",
    "StudyConfigError",
    "ConvergenceRecord",
    "load_study_config",
    "grading_exponent",
    "run_study",
    "probe_half",
    "emit_plot",
    "export_gradient_field",
    "CSV_COLUMNS",
]

CSV_COLUMNS = ("s", "mu", "dofs", "h", "h_min", "l2", "h1", "energy",
               "kappa", "wall_time_seconds")

_GRADINGS = ("uniform", "mu1", "mu2", "mu2d", "explicit")


class StudyConfigError(ValueError):
    """Invalid study configuration."""


@dataclass
class StudyConfig:
    dimension: int
    s_values: list
    grading: str = "uniform"
    sizes: list = field(default_factory=list)
    mu: float = 1.0            # used only by grading = "explicit"
    rhs_k: int = 0
    solver: str = "cholesky"
    cg_tol: float = 1e-10
    threads: int = 1
    kappa: bool = False

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise StudyConfigError(f"dimension must be 1 or 2, got {self.dimension}")
        if self.grading not in _GRADINGS:
            raise StudyConfigError(
                f"grading must be one of {_GRADINGS}, got {self.grading!r}")
        if self.grading == "mu2" and self.dimension != 1:
            raise StudyConfigError("grading mu2 requires dimension 1")
        if self.grading == "mu2d" and self.dimension != 2:
            raise StudyConfigError("grading mu2d requires dimension 2")
        if not self.s_values:
            raise StudyConfigError("s_values must be nonempty")
        for s in self.s_values:
            if not 0.5 <= s < 1.0:
                raise StudyConfigError(
                    f"s values must lie in [1/2, 1), got {s}")
        if not self.sizes:
            raise StudyConfigError("sizes must be nonempty")
        ref = [1.0 / n for n in self.sizes] if self.dimension == 1 else list(self.sizes)
        if any(b >= a for a, b in zip(ref, ref[1:])):
            raise StudyConfigError("sizes must refine strictly monotonically")
        if self.solver not in ("cholesky", "cg"):
            raise StudyConfigError(f"unknown solver {self.solver!r}")
        if self.threads < 1:
            raise StudyConfigError("threads must be positive")


@dataclass
class ConvergenceRecord:
    s: float
    mu: float
    dofs: int
    h: float
    h_min: float
    l2: float
    h1: float
    energy: float
    kappa: float = None
    wall_time_seconds: float = 0.0


def load_study_config(path):
    """Parse a TOML study file; unknown keys are rejected."""
    try:
        with open(path, "rb") as f:
            raw = tomllib.load(f)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise StudyConfigError(f"cannot read study config {path}: {exc}") from exc
    known = {"dimension", "s_values", "grading", "sizes", "mu", "rhs_k",
             "solver", "cg_tol", "threads", "kappa"}
    extra = set(raw) - known
    if extra:
        raise StudyConfigError(f"unknown config keys: {sorted(extra)}")
    try:
        return StudyConfig(**raw)
    except TypeError as exc:
        raise StudyConfigError(str(exc)) from exc


def grading_exponent(grading, s, mu_explicit=1.0):
    """The mesh grading exponent for a preset and fractional index."""
    if grading == "uniform":
        return 1.0
    if grading == "mu1":
        return 2.0 * (2.0 - s)
    if grading == "mu2":
        if s <= 0.5:
            raise StudyConfigError("mu2 grading needs s > 1/2")
        return 1.0 / (s - 0.5)
    if grading == "mu2d":
        return 2.0
    return float(mu_explicit)


def _build_cell_mesh(config, s, size):
    mu = grading_exponent(config.grading, s, config.mu)
    if config.dimension == 1:
        if config.grading == "uniform":
            return build_uniform_1d(int(size))
        return build_graded_1d(max(2, int(size) // 2), mu)
    return build_disk_mesh(float(size), mu)


def _solve_cell(config, mesh, s):
    spec = ProblemSpec(
        n=config.dimension, s=s, k=config.rhs_k,
        domain=Domain.INTERVAL if config.dimension == 1 else Domain.UNIT_DISK)
    A = assemble_stiffness(mesh, s)
    b = assemble_load(mesh, spec)
    if config.solver == "cg":
        import scipy.sparse.linalg

        Ad = A.dense()
        u, info = scipy.sparse.linalg.cg(Ad, b.values, rtol=config.cg_tol,
                                         atol=0.0, maxiter=50 * len(b.values))
        if info != 0:
            raise ArithmeticError(f"cg failed to converge (info={info})")
        sol = DiscreteSolution(mesh=mesh, coefficients=u)
    else:
        sol = solve_spd(A, b, mesh)
    return spec, A, b, sol


def _cell_record(config, s, size, with_errors=True, record_timings=False):
    import time

    t0 = time.perf_counter()
    mesh = _build_cell_mesh(config, s, size)
    spec, A, b, sol = _solve_cell(config, mesh, s)
    if with_errors:
        l2 = l2_error(sol, spec)
        h1 = h1_error(sol, spec)
        energy = energy_error(A, b, sol, spec)
    else:
        l2 = float("nan")
        h1 = h1_seminorm_discrete(sol)
        energy = float("nan")
    kappa = condition_estimate(A) if config.kappa else None
    wall = time.perf_counter() - t0 if record_timings else 0.0
    return ConvergenceRecord(
        s=s, mu=mesh.mu, dofs=mesh.n_dofs, h=mesh.h_max, h_min=mesh.h_min,
        l2=l2, h1=h1, energy=energy, kappa=kappa, wall_time_seconds=wall)


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".12g")


def write_csv(records, path):
    lines = [",".join(CSV_COLUMNS)]
    for r in records:
        lines.append(",".join(_fmt(getattr(r, c)) for c in CSV_COLUMNS))
    with open(path, "w", newline="\n") as f:
        f.write("\n".join(lines) + "\n")


def read_csv(path):
    """Rows as dicts of floats (kappa may be None)."""
    with open(path) as f:
        header = f.readline().strip().split(",")
        rows = []
        for line in f:
            if not line.strip():
                continue
            vals = line.strip().split(",")
            rows.append({k: (None if v == "" else float(v))
                         for k, v in zip(header, vals)})
    return header, rows


def run_study(config, out_csv=None, record_timings=False):
    """Walk the (s, size) grid; returns (records, summary).

    summary maps s -> {"order_h": float, "order_dofs": float} for every
    sweep with at least 3 successful cells. A failing cell aborts the
    rest of its sweep only; the failure is recorded under "failures"
    with its (s, size) context.
    """
    records = []
    summary = {"orders": {}, "failures": []}
    for s in config.s_values:
        sweep = []
        for size in config.sizes:
            try:
                rec = _cell_record(config, s, size,
                                   record_timings=record_timings)
            except Exception as exc:
                summary["failures"].append(
                    (s, size, f"{type(exc).__name__}: {exc}"))
                break
            sweep.append(rec)
        records.extend(sweep)
        if len(sweep) >= 3:
            summary["orders"][s] = {
                "order_h": fit_order(sweep, "h"),
                "order_dofs": fit_order(sweep, "dofs"),
            }
    if out_csv is not None:
        write_csv(records, out_csv)
    return records, summary


def probe_half(config, out_csv=None):
    """Discrete H1 seminorm growth probe at exactly s = 1/2 (1D).

    The exact solution leaves H1 at s = 1/2, so the seminorms of the
    discrete solutions must grow without bound under refinement; this
    asserts strict growth across the sweep.
    """
    if config.dimension != 1:
        raise StudyConfigError("the s = 1/2 probe is one-dimensional")
    if list(config.s_values) != [0.5]:
        raise StudyConfigError("probe_half requires s_values = [0.5]")
    records = []
    for size in config.sizes:
        records.append(_cell_record(config, 0.5, size, with_errors=False))
    semis = [r.h1 for r in records]
    for a, b in zip(semis, semis[1:]):
        if not b > a:
            raise ArithmeticError(
                f"discrete H1 seminorm failed to grow: {a} -> {b}")
    if out_csv is not None:
        write_csv(records, out_csv)
    return records


# ---------------------------------------------------------------------------
# SVG output


_SVG_W, _SVG_H = 640, 480
_MARGIN = 60
_COLORS = ("#1b6ca8", "#b5442d", "#3a7d44", "#7b4fa6", "#b08b2e", "#555555")


def _ticks_log(lo, hi):
    # decade ticks covering [lo, hi]
    e0 = math.floor(math.log10(lo))
    e1 = math.ceil(math.log10(hi))
    return [10.0 ** e for e in range(e0, e1 + 1)]


def emit_plot(csv_path, x_field, y_field, out_svg):
    """Log-log SVG plot of y_field vs x_field, one polyline per s.

    Each series is annotated with its least-squares slope to 3 decimals
    (matching fit_order). Deterministic byte output for identical input;
    raises on empty series before creating the file.
    """
    header, rows = read_csv(csv_path)
    for fieldname in (x_field, y_field, "s"):
        if fieldname not in header:
            raise ValueError(f"CSV {csv_path} lacks required column {fieldname!r}")
    series = {}
    for row in rows:
        x, y = row[x_field], row[y_field]
        if x is None or y is None or not (x > 0.0) or not (y > 0.0):
            continue
        series.setdefault(row["s"], []).append((x, y))
    if not series or any(len(pts) == 0 for pts in series.values()):
        raise ValueError(f"no plottable data in {csv_path}")

    xs = [p[0] for pts in series.values() for p in pts]
    ys = [p[1] for pts in series.values() for p in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x0 == x1:
        x0, x1 = 0.9 * x0, 1.1 * x1
    if y0 == y1:
        y0, y1 = 0.9 * y0, 1.1 * y1

    def px(x):
        t = (math.log(x) - math.log(x0)) / (math.log(x1) - math.log(x0))
        return _MARGIN + t * (_SVG_W - 2 * _MARGIN)

    def py(y):
        t = (math.log(y) - math.log(y0)) / (math.log(y1) - math.log(y0))
        return _SVG_H - _MARGIN - t * (_SVG_H - 2 * _MARGIN)

    parts = []
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SVG_W}" '
        f'height="{_SVG_H}" viewBox="0 0 {_SVG_W} {_SVG_H}">')
    parts.append(f'<rect width="{_SVG_W}" height="{_SVG_H}" fill="white"/>')
    ax = (f'M {_MARGIN} {_MARGIN} L {_MARGIN} {_SVG_H - _MARGIN} '
          f'L {_SVG_W - _MARGIN} {_SVG_H - _MARGIN}')
    parts.append(f'<path d="{ax}" stroke="black" fill="none"/>')
    for t in _ticks_log(x0, x1):
        if x0 <= t <= x1:
            parts.append(
                f'<line x1="{px(t):.2f}" y1="{_SVG_H - _MARGIN}" '
                f'x2="{px(t):.2f}" y2="{_SVG_H - _MARGIN + 5}" stroke="black"/>')
            parts.append(
                f'<text x="{px(t):.2f}" y="{_SVG_H - _MARGIN + 18}" '
                f'font-size="10" text-anchor="middle">1e{int(math.log10(t))}</text>')
    for t in _ticks_log(y0, y1):
        if y0 <= t <= y1:
            parts.append(
                f'<line x1="{_MARGIN - 5}" y1="{py(t):.2f}" x2="{_MARGIN}" '
                f'y2="{py(t):.2f}" stroke="black"/>')
            parts.append(
                f'<text x="{_MARGIN - 8}" y="{py(t):.2f}" font-size="10" '
                f'text-anchor="end">1e{int(math.log10(t))}</text>')
    parts.append(
        f'<text x="{_SVG_W // 2}" y="{_SVG_H - 12}" font-size="12" '
        f'text-anchor="middle">{x_field}</text>')
    parts.append(
        f'<text x="16" y="{_SVG_H // 2}" font-size="12" text-anchor="middle" '
        f'transform="rotate(-90 16 {_SVG_H // 2})">{y_field}</text>')

    for idx, s in enumerate(sorted(series)):
        pts = sorted(series[s])
        color = _COLORS[idx % len(_COLORS)]
        slope = fit_order(pts, x_field, y_field) if len(pts) >= 3 else float("nan")
        path = " ".join(
            f'{"M" if i == 0 else "L"} {px(x):.2f} {py(y):.2f}'
            for i, (x, y) in enumerate(pts))
        parts.append(f'<path d="{path}" stroke="{color}" fill="none" '
                     f'stroke-width="1.5"/>')
        for x, y in pts:
            parts.append(f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" r="2.5" '
                         f'fill="{color}"/>')
        parts.append(
            f'<text x="{_SVG_W - _MARGIN + 4}" y="{_MARGIN + 14 * idx + 10}" '
            f'font-size="11" fill="{color}">s={_fmt(s)} slope {slope:.3f}</text>')
    parts.append("</svg>")
    with open(out_svg, "w", newline="\n") as f:
        f.write("\n".join(parts) + "\n")


def export_gradient_field(sol, out_csv):
    """Per-element rows (centroid_x, centroid_y, log10 |grad u_h|), 2D only."""
    mesh = sol.mesh
    if mesh is None or mesh.dim != 2:
        raise ValueError("gradient-field export requires a 2D solution")
    from .quadrature import _element_geometry_2d

    tv, area, grads = _element_geometry_2d(mesh)
    full = np.zeros(len(mesh.nodes))
    full[mesh.interior_nodes] = sol.coefficients
    vals = full[mesh.elements]  # (Ne, 3)
    gx = np.einsum("ei,eid->ed", vals, grads)
    norm = np.hypot(gx[:, 0], gx[:, 1])
    cen = tv.mean(axis=1)
    lines = ["centroid_x,centroid_y,log10_grad_norm"]
    for e in range(mesh.n_elements):
        lg = "-inf" if norm[e] == 0.0 else _fmt(math.log10(norm[e]))
        lines.append(f"{_fmt(cen[e, 0])},{_fmt(cen[e, 1])},{lg}")
    with open(out_csv, "w", newline="\n") as f:
        f.write("\n".join(lines) + "\n")
