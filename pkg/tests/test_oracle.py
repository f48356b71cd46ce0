import math

import numpy as np
import pytest

from fracfem.meshing import build_uniform_1d
from fracfem.oracle import (
    OracleInconclusiveError,
    brute_force_entry,
    brute_force_matrix,
    brute_force_pair,
    oracle_tail_weight,
)
from fracfem.problem import Domain
from fracfem.quadrature import complement_integral, pair_integral


def test_far_pair_matches_plain_tensor_gauss():
    # far-disjoint supports: smooth integrand, a straight tensor rule is
    # already converged
    mesh = build_uniform_1d(11)
    s = 0.7
    ta, tb = 1, 8
    xa = mesh.nodes[ta:ta + 2]
    xb = mesh.nodes[tb:tb + 2]
    gx, gw = np.polynomial.legendre.leggauss(16)
    pa = 0.5 * (xa[0] + xa[1]) + 0.5 * (xa[1] - xa[0]) * gx
    pb = 0.5 * (xb[0] + xb[1]) + 0.5 * (xb[1] - xb[0]) * gx
    wa = 0.5 * (xa[1] - xa[0]) * gw
    wb = 0.5 * (xb[1] - xb[0]) * gw
    # phi_0 on T_a is the hat of the left node restricted there, i=0
    ha = (xa[1] - pa) / (xa[1] - xa[0])
    hb = (xb[1] - pb) / (xb[1] - xb[0])
    ref = 0.0
    for q in range(16):
        ker = np.abs(pa[q] - pb) ** (-1.0 - 2.0 * s)
        ref += wa[q] * np.sum(wb * (-1.0 * ha[q] * hb) * ker)
    got = brute_force_pair(mesh, ta, tb, s, 0, 0, levels=4)
    assert got == pytest.approx(ref, rel=1e-10)


def test_identical_element_depths_agree():
    # the touching-pair value is depth-independent once extrapolated, and it
    # cross-checks the production route
    mesh = build_uniform_1d(7)
    s = 0.6
    vals = [brute_force_pair(mesh, 2, 2, s, 0, 0, levels=L)
            for L in (4, 8, 12)]
    assert vals[1] == pytest.approx(vals[0], rel=1e-10)
    assert vals[2] == pytest.approx(vals[1], rel=1e-10)
    assert pair_integral(mesh, 2, 2, s, 0, 0) == pytest.approx(
        vals[2], rel=1e-7)


def test_pair_cross_validation_6_elements():
    # both routes are independent; agreement validates each
    mesh = build_uniform_1d(7)
    s = 0.75
    for ta in range(mesh.n_elements):
        for tb in range(ta, mesh.n_elements):
            for i in range(2):
                for j in range(2):
                    a = pair_integral(mesh, ta, tb, s, i, j)
                    b = brute_force_pair(mesh, ta, tb, s, i, j)
                    assert a == pytest.approx(b, rel=1e-6, abs=1e-12)


def test_matrix_cross_validation_n5():
    mesh = build_uniform_1d(5)
    from fracfem.assembly import assemble_stiffness

    s = 0.8
    A = assemble_stiffness(mesh, s).dense()
    B = brute_force_matrix(mesh, s)
    assert np.allclose(B, B.T)
    assert np.all(np.diag(B) > 0.0)
    assert np.allclose(A, B, rtol=1e-6, atol=1e-12)
    # entry accessor reads the same values
    assert brute_force_entry(mesh, 0, 2, s) == pytest.approx(B[0, 2],
                                                             rel=1e-14)


def test_inconclusive_when_tolerance_unreachable():
    mesh = build_uniform_1d(7)
    with pytest.raises(OracleInconclusiveError):
        brute_force_pair(mesh, 2, 2, 0.6, 0, 0, levels=4, tol=1e-14)


def test_too_few_levels_rejected():
    # the extrapolation needs five partial sums to bound its own error
    mesh = build_uniform_1d(7)
    with pytest.raises(ValueError):
        brute_force_pair(mesh, 2, 2, 0.6, 0, 0, levels=3)


def test_depth_cap_enforced():
    mesh = build_uniform_1d(7)
    with pytest.raises(ValueError):
        brute_force_pair(mesh, 2, 2, 0.6, 0, 0, levels=13)


def test_tail_weight_interval_closed_form():
    for x in (-0.8, 0.0, 0.55):
        for s in (0.6, 0.9):
            want = ((1.0 + x) ** (-2 * s) + (1.0 - x) ** (-2 * s)) / (2 * s)
            assert oracle_tail_weight(x, Domain.INTERVAL, s) == pytest.approx(
                want, rel=1e-13)


def test_tail_weight_disk_center_and_cross_validation():
    for s in (0.55, 0.75):
        got = oracle_tail_weight(np.array([[0.0, 0.0]]), Domain.UNIT_DISK, s)
        assert got[0] == pytest.approx(math.pi / s, rel=1e-10)
    # independent route used by the production assembly
    for r in (0.3, 0.7, 0.95):
        a = oracle_tail_weight(np.array([[r, 0.0]]), Domain.UNIT_DISK, 0.8)[0]
        b = complement_integral(np.array([r, 0.0]), Domain.UNIT_DISK, 0.8)
        assert a == pytest.approx(b, rel=1e-8)
