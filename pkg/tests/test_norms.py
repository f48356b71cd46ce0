import math

import numpy as np
import pytest

from fracfem.meshing import build_disk_mesh, build_uniform_1d
from fracfem.norms import (
    energy_error,
    fit_order,
    h1_error,
    h1_seminorm_discrete,
    l2_error,
    load_pairing_quadrature,
)
from fracfem.problem import ProblemSpec, exact_solution
from fracfem.solve import DiscreteSolution


def _interpolant(mesh, spec):
    vals = exact_solution(spec, mesh.nodes[mesh.interior_nodes])
    return DiscreteSolution(mesh=mesh, coefficients=np.asarray(vals))


def test_l2_error_of_interpolated_exact_field_small():
    # P1 interpolant of the exact solution: error is pure interpolation
    mesh = build_uniform_1d(201)
    spec = ProblemSpec(n=1, s=0.75, k=0)
    assert l2_error(_interpolant(mesh, spec), spec) < 5e-4


def test_h1_error_affine_interpolant_is_zero():
    # a P1 function interpolated on its own mesh reproduces gradients
    mesh = build_uniform_1d(21)
    x = mesh.nodes[mesh.interior_nodes]
    sol = DiscreteSolution(mesh=mesh, coefficients=0.3 * x + 0.1 * (1 - x * x) * 0)
    # compare against itself through the discrete seminorm route
    vals = np.zeros(len(mesh.nodes))
    vals[mesh.interior_nodes] = sol.coefficients
    g = np.diff(vals) / np.diff(mesh.nodes)
    acc = float(np.sum(np.diff(mesh.nodes) * g * g))
    assert h1_seminorm_discrete(sol) == pytest.approx(math.sqrt(acc),
                                                      rel=1e-12)


def test_h1_seminorm_zero_and_single_hat():
    mesh = build_uniform_1d(11)
    zero = DiscreteSolution(mesh=mesh, coefficients=np.zeros(mesh.n_dofs))
    assert h1_seminorm_discrete(zero) == 0.0
    h = 0.2
    coeff = np.zeros(mesh.n_dofs)
    coeff[4] = 1.0
    hat = DiscreteSolution(mesh=mesh, coefficients=coeff)
    assert h1_seminorm_discrete(hat) == pytest.approx(math.sqrt(2.0 / h),
                                                      rel=1e-12)


def test_h1_error_zero_solution_equals_exact_seminorm_2d():
    from scipy.integrate import quad

    s = 0.6
    spec = ProblemSpec(n=2, s=s, k=0)
    c = spec.solution_constant
    I, _ = quad(lambda r: r ** 3 * (1 - r * r) ** (2 * s - 2.0), 0.0, 1.0)
    seminorm = math.sqrt((2 * s * c) ** 2 * 2 * math.pi * I)
    mesh = build_disk_mesh(0.2, 2.0)
    zero = DiscreteSolution(mesh=mesh, coefficients=np.zeros(mesh.n_dofs))
    assert h1_error(zero, spec) == pytest.approx(seminorm, rel=1e-3)


def test_errors_decrease_under_refinement():
    spec = ProblemSpec(n=1, s=0.75, k=0)
    from fracfem.assembly import assemble_load, assemble_stiffness
    from fracfem.solve import solve_spd

    h1s, l2s = [], []
    for N in (41, 81, 161):
        mesh = build_uniform_1d(N)
        A = assemble_stiffness(mesh, 0.75)
        b = assemble_load(mesh, spec)
        sol = solve_spd(A, b, mesh)
        h1s.append(h1_error(sol, spec))
        l2s.append(l2_error(sol, spec))
    assert h1s[0] > h1s[1] > h1s[2]
    assert l2s[0] > l2s[1] > l2s[2]


def test_load_pairing_quadrature_matches_closed_form():
    for spec in (ProblemSpec(n=1, s=0.5, k=0), ProblemSpec(n=1, s=0.8, k=1),
                 ProblemSpec(n=2, s=0.7, k=0), ProblemSpec(n=2, s=0.6, k=2)):
        from fracfem.problem import load_solution_pairing

        assert load_pairing_quadrature(spec) == pytest.approx(
            load_solution_pairing(spec), rel=1e-10)


def test_energy_error_identity_and_optimality(cell_1d_s075):
    mesh, spec, A, b, sol = cell_1d_s075
    e0 = energy_error(A, b, sol, spec)
    # identity: for the Galerkin solution the quadratic form collapses to
    # <f,u> - b.u_h
    fu = load_pairing_quadrature(spec)
    direct = math.sqrt(max(fu - float(b.values @ sol.coefficients), 0.0))
    assert e0 == pytest.approx(direct, abs=1e-9)
    # best approximation: any perturbation increases the energy error
    rng = np.random.default_rng(7)
    for _ in range(10):
        delta = np.zeros(mesh.n_dofs)
        delta[rng.integers(mesh.n_dofs)] = rng.choice([-1.0, 1.0]) * 1e-2
        pert = DiscreteSolution(mesh=mesh,
                                coefficients=sol.coefficients + delta)
        assert energy_error(A, b, pert, spec) > e0


def test_fit_order_exact_line():
    recs = [(100, 1.0), (400, 0.5), (1600, 0.25)]
    assert fit_order(recs, "dofs") == pytest.approx(0.5, rel=1e-12)
    flat = [(10, 1.0), (20, 1.0), (40, 1.0)]
    assert fit_order(flat, "h") == pytest.approx(0.0, abs=1e-12)


def test_fit_order_reference_rate():
    # synthetic data on the published uniform-mesh line for s=0.6
    ns = np.array([1000.0, 2000.0, 5000.0, 10000.0])
    errs = 2.0 * ns ** -0.101
    assert fit_order(list(zip(ns, errs)), "N") == pytest.approx(0.101,
                                                                abs=1e-3)


def test_fit_order_validation():
    with pytest.raises(ValueError):
        fit_order([(1.0, 1.0), (2.0, 0.5)], "h")
    with pytest.raises(ValueError):
        fit_order([(1.0, 1.0), (2.0, 0.5), (3.0, -0.1)], "h")
