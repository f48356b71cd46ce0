"""Convergence on the interval: uniform vs graded meshes.

Solves (-Delta)^s u = f on (-1, 1) with homogeneous exterior data for a
few fractional indices and compares H1 convergence orders on uniform
meshes against meshes graded toward the endpoints. On uniform meshes
the order (in the number of unknowns) is s - 1/2; grading with
mu = 1/(s - 1/2) recovers order ~1.

Run from the repository root:

    python demos/interval_convergence.py
"""

import tempfile
from pathlib import Path

from fracfem.study import StudyConfig, emit_plot, run_study

outdir = Path(tempfile.mkdtemp(prefix="fracfem-interval-"))

uniform = StudyConfig(
    dimension=1,
    s_values=[0.6, 0.7, 0.8, 0.9],
    grading="uniform",
    sizes=[64, 128, 256, 512],
)
records, summary = run_study(uniform, out_csv=outdir / "uniform.csv")
print("uniform meshes (expected order s - 1/2):")
for s, orders in summary["orders"].items():
    print(f"  s={s}: H1 order {orders['order_dofs']:.3f}")

graded = StudyConfig(
    dimension=1,
    s_values=[0.6, 0.7, 0.8, 0.9],
    grading="mu2",
    sizes=[64, 128, 256, 512],
)
records, summary = run_study(graded, out_csv=outdir / "graded.csv")
print("graded meshes, mu = 1/(s - 1/2) (expected order ~1):")
for s, orders in summary["orders"].items():
    print(f"  s={s}: H1 order {orders['order_dofs']:.3f}")

emit_plot(outdir / "uniform.csv", "dofs", "h1", outdir / "uniform.svg")
emit_plot(outdir / "graded.csv", "dofs", "h1", outdir / "graded.svg")
print(f"CSV tables and SVG plots written under {outdir}")
