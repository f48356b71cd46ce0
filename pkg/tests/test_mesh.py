import math
import os

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracfem.meshing import (
    build_disk_mesh,
    build_graded_1d,
    build_uniform_1d,
    grading_violation,
    load_mesh,
    mesh_stats,
    save_mesh,
    shape_regularity,
)


def test_graded_mu1_is_uniform():
    mesh = build_graded_1d(2, 1.0)
    assert np.allclose(mesh.nodes, [-1.0, -0.5, 0.0, 0.5, 1.0])


def test_graded_mu2_node_positions():
    mesh = build_graded_1d(2, 2.0)
    right = mesh.nodes[mesh.nodes >= 0.0]
    assert np.allclose(right, [0.0, 0.75, 1.0])
    assert mesh.h_min == pytest.approx(0.25, rel=1e-14)


def test_graded_hmin_formula():
    mesh = build_graded_1d(100, 4.0)
    assert mesh.h_min == pytest.approx(1e-8, rel=1e-10)
    stats = mesh_stats(mesh)
    assert stats["h_min"] == pytest.approx(1e-8, rel=1e-10)


@settings(deadline=None, max_examples=40)
@given(st.integers(min_value=2, max_value=200),
       st.floats(min_value=1.0, max_value=6.0))
def test_graded_mesh_invariants(M, mu):
    mesh = build_graded_1d(M, mu)
    x = mesh.nodes
    assert np.all(np.diff(x) > 0.0)
    assert x[0] == -1.0 and x[-1] == 1.0
    # symmetric about the origin
    assert np.allclose(x, -x[::-1])
    assert mesh.n_dofs == len(x) - 2
    assert mesh.h_min == pytest.approx((1.0 / M) ** mu, rel=1e-9)


def test_uniform_small_cases():
    mesh = build_uniform_1d(3)
    assert np.allclose(mesh.nodes, [-1.0, 0.0, 1.0])
    assert mesh.n_dofs == 1
    mesh = build_uniform_1d(1001)
    assert mesh.h_max == pytest.approx(2.0 / 1000, rel=1e-13)
    assert np.allclose(build_uniform_1d(5).nodes, build_graded_1d(2, 1.0).nodes)


def test_build_validation():
    with pytest.raises(ValueError):
        build_graded_1d(1, 2.0)
    with pytest.raises(ValueError):
        build_graded_1d(10, 0.5)
    with pytest.raises(ValueError):
        build_uniform_1d(2)


def test_disk_uniform_regime():
    mesh = build_disk_mesh(0.5, 1.0)
    d = mesh.element_diameters()
    # all diameters comparable to h; the outermost ring is deliberately
    # sliced thin in the angular direction, so exempt it from the
    # diameter floor and the aspect bound
    inner = mesh.elem_dist > 1e-12
    assert d.max() <= 2.0 * 0.5
    assert d[inner].min() >= 0.15 * 0.5
    assert shape_regularity(mesh, skip_boundary=True) < 10.0


def test_disk_mesh_is_valid_triangulation():
    mesh = build_disk_mesh(0.3, 2.0)
    # positive areas, all nodes on or inside the unit circle
    assert np.all(mesh.element_measures() > 0.0)
    r = np.linalg.norm(mesh.nodes, axis=1)
    assert np.all(r <= 1.0 + 1e-12)
    assert np.allclose(r[mesh.boundary_nodes], 1.0, atol=1e-12)
    # total area approaches pi as boundary segments refine
    assert mesh.element_measures().sum() == pytest.approx(math.pi, rel=0.02)
    # every boundary node flagged, every interior node a dof
    assert mesh.n_dofs + len(mesh.boundary_nodes) == len(mesh.nodes)


def test_disk_graded_boundary_elements():
    h = 1.0 / 16
    mesh = build_disk_mesh(h, 2.0)
    d = mesh.element_diameters()
    touching = mesh.elem_dist <= 1e-12
    # boundary-ring triangles scale like h^2 (radially); diameters stay
    # below the angular width c*h
    assert np.all(d[touching] <= 3.0 * h)
    radial = 1.0 - np.linalg.norm(
        mesh.nodes[mesh.elements[touching]].mean(axis=1), axis=1)
    assert np.all(radial <= 4.0 * h * h)


def test_disk_dof_count_tracks_h():
    # dofs within a factor 4 of h^-2 |log h| across dyadic refinements
    for h in (1.0 / 8, 1.0 / 16, 1.0 / 32):
        mesh = build_disk_mesh(h, 2.0)
        target = h ** (-2.0) * abs(math.log(h))
        assert 0.25 * target <= mesh.n_dofs <= 4.0 * target


def test_grading_violation_bounded():
    for mesh in (build_graded_1d(50, 2.0), build_disk_mesh(0.25, 2.0)):
        assert grading_violation(mesh) < np.inf


def test_mesh_roundtrip(tmp_path):
    for mesh in (build_graded_1d(10, 3.0), build_disk_mesh(0.4, 2.0)):
        path = os.path.join(tmp_path, f"m{mesh.dim}.npz")
        save_mesh(mesh, path)
        back = load_mesh(path)
        assert back.dim == mesh.dim
        assert np.array_equal(back.elements, mesh.elements)
        assert np.allclose(back.nodes, mesh.nodes)
        assert np.array_equal(back.interior_nodes, mesh.interior_nodes)
        assert back.mu == mesh.mu and back.h_param == mesh.h_param


def test_mesh_stats_keys():
    stats = mesh_stats(build_uniform_1d(11))
    for key in ("dofs", "h_max", "h_min", "shape_regularity"):
        assert key in stats
    assert stats["dofs"] == 9
