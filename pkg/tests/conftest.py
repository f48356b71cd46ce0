import numpy as np
import pytest

from fracfem import (
    Domain,
    ProblemSpec,
    assemble_load,
    assemble_stiffness,
    build_uniform_1d,
    solve_spd,
)


@pytest.fixture(scope="session")
def mesh1d_small():
    # 6 elements, 5 interior dofs
    return build_uniform_1d(7)


@pytest.fixture(scope="session")
def cell_1d_s075():
    """Assembled and solved 1D cell reused across tests."""
    mesh = build_uniform_1d(41)
    spec = ProblemSpec(n=1, s=0.75, k=0, domain=Domain.INTERVAL)
    A = assemble_stiffness(mesh, 0.75)
    b = assemble_load(mesh, spec)
    sol = solve_spd(A, b, mesh)
    return mesh, spec, A, b, sol


def fit_slope(xs, ys):
    # plain least squares in log-log, positive slope for decay
    lx = np.log(np.asarray(xs, dtype=float))
    ly = np.log(np.asarray(ys, dtype=float))
    return -np.polyfit(lx, ly, 1)[0]
