import numpy as np
import pytest

from fracfem.assembly import (
    assemble_load,
    assemble_stiffness,
    load_matrix,
    save_matrix,
)
from fracfem.meshing import build_disk_mesh, build_graded_1d, build_uniform_1d
from fracfem.oracle import brute_force_entry
from fracfem.problem import ProblemSpec


def test_stiffness_symmetric_and_spd(mesh1d_small):
    A = assemble_stiffness(mesh1d_small, 0.75).dense()
    assert np.array_equal(A, A.T)
    w = np.linalg.eigvalsh(A)
    assert w.min() > 0.0


def test_far_offdiagonal_negative():
    # hats with far-disjoint supports interact only through the negative
    # cross term
    mesh = build_uniform_1d(13)
    A = assemble_stiffness(mesh, 0.8).dense()
    assert A[0, 10] < 0.0
    assert A[1, 9] < 0.0


def test_stiffness_matches_oracle_1d_n5():
    mesh = build_uniform_1d(5)
    s = 0.75
    A = assemble_stiffness(mesh, s).dense()
    for i in range(mesh.n_dofs):
        for j in range(i, mesh.n_dofs):
            ref = brute_force_entry(mesh, i, j, s)
            assert A[i, j] == pytest.approx(ref, rel=1e-6)


def test_stiffness_graded_spd():
    mesh = build_graded_1d(8, 3.0)
    A = assemble_stiffness(mesh, 0.7).dense()
    assert np.linalg.eigvalsh(A).min() > 0.0


def test_load_vector_1d_constant_rhs():
    mesh = build_uniform_1d(9)
    spec = ProblemSpec(n=1, s=0.75, k=0)
    b = assemble_load(mesh, spec).values
    h = 0.25
    # interior hat over two elements of length h has area h
    assert np.allclose(b, h, atol=1e-14)
    # partition of unity minus the two boundary half-hats
    assert b.sum() == pytest.approx(2.0 - h, rel=1e-13)


def test_load_vector_2d_k1_against_quadrature_oracle():
    from fracfem.quadrule import triangle_rule
    from fracfem.problem import exact_rhs

    mesh = build_disk_mesh(0.5, 1.0)
    spec = ProblemSpec(n=2, s=0.8, k=1)
    b = assemble_load(mesh, spec).values
    # independent high-order rule
    tr = triangle_rule(10)
    u, v = tr.points[:, 0], tr.points[:, 1]
    lam = np.stack([1.0 - u - v, u, v], axis=1)
    ref = np.zeros_like(b)
    areas = mesh.element_measures()
    p = mesh.nodes[mesh.elements]
    for e in range(mesh.n_elements):
        pts = (np.outer(lam[:, 0], p[e, 0]) + np.outer(lam[:, 1], p[e, 1])
               + np.outer(lam[:, 2], p[e, 2]))
        fv = exact_rhs(spec, pts)
        w = 2.0 * areas[e] * tr.weights
        for loc in range(3):
            d = mesh.dof_of_node[mesh.elements[e, loc]]
            if d >= 0:
                ref[d] += np.sum(w * fv * lam[:, loc])
    assert np.allclose(b, ref, atol=1e-10)


def test_dimension_mismatch_rejected():
    mesh = build_uniform_1d(9)
    with pytest.raises(ValueError):
        assemble_load(mesh, ProblemSpec(n=2, s=0.75, k=0))
    with pytest.raises(ValueError):
        assemble_stiffness(mesh, 1.5)


def test_matrix_roundtrip(tmp_path):
    mesh = build_uniform_1d(9)
    A = assemble_stiffness(mesh, 0.66)
    path = str(tmp_path / "A.bin")
    save_matrix(A, path)
    B = load_matrix(path)
    assert np.array_equal(A.dense(), B.dense())
