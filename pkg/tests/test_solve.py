import numpy as np
import pytest

from fracfem.assembly import LoadVector, SymmetricMatrix
from fracfem.norms import fit_order
from fracfem.solve import condition_estimate, solve_spd


def _lv(v):
    v = np.asarray(v, dtype=float)
    return LoadVector(dim=len(v), values=v)


def test_identity_solve():
    A = SymmetricMatrix.from_dense(np.eye(4))
    b = _lv([1.0, -2.0, 3.0, 0.5])
    u = solve_spd(A, b).coefficients
    assert np.allclose(u, b.values, atol=1e-14)


def test_hand_solved_2x2():
    A = SymmetricMatrix.from_dense(np.array([[2.0, 1.0], [1.0, 2.0]]))
    u = solve_spd(A, _lv([3.0, 3.0])).coefficients
    assert np.allclose(u, [1.0, 1.0], atol=1e-13)


def test_random_spd_residual():
    rng = np.random.default_rng(1234)
    B = rng.standard_normal((50, 50))
    A = B @ B.T + 50.0 * np.eye(50)
    b = rng.standard_normal(50)
    u = solve_spd(SymmetricMatrix.from_dense(A), _lv(b)).coefficients
    assert np.linalg.norm(A @ u - b) / np.linalg.norm(b) <= 1e-10


def test_rejects_indefinite():
    A = SymmetricMatrix.from_dense(np.diag([1.0, -1.0]))
    with pytest.raises(ArithmeticError):
        solve_spd(A, _lv([1.0, 1.0]))


def test_dimension_mismatch():
    A = SymmetricMatrix.from_dense(np.eye(3))
    with pytest.raises(ValueError):
        solve_spd(A, _lv([1.0, 2.0]))


def test_condition_estimate_diagonal():
    assert condition_estimate(SymmetricMatrix.from_dense(np.eye(5))) == \
        pytest.approx(1.0, rel=1e-6)
    A = SymmetricMatrix.from_dense(np.diag([1.0, 10.0]))
    assert condition_estimate(A) == pytest.approx(10.0, rel=1e-3)


def test_condition_growth_1d_stiffness():
    # kappa ~ dofs^{2s} on uniform 1D meshes
    from fracfem.assembly import assemble_stiffness
    from fracfem.meshing import build_uniform_1d

    s = 0.75
    recs = []
    for N in (32, 64, 128, 256):
        mesh = build_uniform_1d(N)
        A = assemble_stiffness(mesh, s)
        recs.append((mesh.n_dofs, condition_estimate(A)))
    # fit_order negates the slope for dofs; kappa grows, so flip back
    slope = -fit_order(recs, "dofs")
    assert abs(slope - 2.0 * s) <= 0.2
