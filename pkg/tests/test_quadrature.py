import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracfem.meshing import build_uniform_1d
from fracfem.problem import Domain
from fracfem.quadrature import complement_integral, pair_integral
from fracfem.quadrule import gauss_legendre


def test_gauss_legendre_small_rules():
    r = gauss_legendre(1)
    assert np.allclose(r.points, [0.0]) and np.allclose(r.weights, [2.0])
    r = gauss_legendre(2)
    assert np.allclose(np.sort(r.points), [-1 / math.sqrt(3), 1 / math.sqrt(3)])
    assert np.allclose(r.weights, [1.0, 1.0])


def test_gauss_legendre_polynomial_exactness():
    r = gauss_legendre(8)
    # integral of x^8 over [-1,1] is 2/9
    assert np.sum(r.weights * r.points ** 8) == pytest.approx(2.0 / 9.0,
                                                              abs=1e-13)
    # degree 15 still exact
    assert np.sum(r.weights * r.points ** 14) == pytest.approx(2.0 / 15.0,
                                                               abs=1e-13)


def test_pair_integral_far_disjoint_is_negative():
    # with disjoint supports only the cross term -2 phi_i(x) phi_j(y) K
    # survives, so the value is strictly negative
    mesh = build_uniform_1d(11)
    v = pair_integral(mesh, 0, 7, 0.75, 0, 1)
    assert v < 0.0


def test_pair_integral_symmetry():
    mesh = build_uniform_1d(9)
    for ta, tb in ((2, 2), (2, 3), (1, 6)):
        for i in range(2):
            for j in range(2):
                a = pair_integral(mesh, ta, tb, 0.65, i, j)
                b = pair_integral(mesh, tb, ta, 0.65, j, i)
                assert a == pytest.approx(b, rel=1e-13, abs=1e-15)


def test_pair_integral_scaling():
    # shrinking both elements by lambda scales the integral by
    # lambda^{1-2s} in one dimension (slopes 1/l, kernel l^{-1-2s}, l^2
    # of measure)
    s = 0.7
    coarse = build_uniform_1d(5)    # elements of length 0.5
    fine = build_uniform_1d(9)      # elements of length 0.25
    v1 = pair_integral(coarse, 1, 1, s, 0, 0)
    v2 = pair_integral(fine, 3, 3, s, 0, 0)
    assert v2 / v1 == pytest.approx(0.5 ** (1.0 - 2.0 * s), rel=1e-10)


def test_pair_integral_identical_element_positive_diagonal():
    mesh = build_uniform_1d(7)
    for s in (0.6, 0.75, 0.9):
        assert pair_integral(mesh, 2, 2, s, 0, 0) > 0.0


def test_pair_integral_validation():
    mesh = build_uniform_1d(7)
    with pytest.raises(ValueError):
        pair_integral(mesh, 0, 1, 1.2, 0, 0)
    with pytest.raises(ValueError):
        pair_integral(mesh, 0, 1, 0.7, 0, 3)


def test_complement_interval_closed_form():
    # omega(x) = ((1+x)^{-2s} + (1-x)^{-2s}) / (2s); x=0, s=1/2 gives 2
    assert complement_integral(0.0, Domain.INTERVAL, 0.5) == pytest.approx(
        2.0, rel=1e-13)
    want = ((1.3) ** -1.6 + (0.7) ** -1.6) / 1.6
    assert complement_integral(0.3, Domain.INTERVAL, 0.8) == pytest.approx(
        want, rel=1e-12)


@settings(deadline=None, max_examples=50)
@given(st.floats(min_value=-0.99, max_value=0.99),
       st.floats(min_value=0.51, max_value=0.95))
def test_complement_interval_even(x, s):
    a = complement_integral(x, Domain.INTERVAL, s)
    b = complement_integral(-x, Domain.INTERVAL, s)
    assert a == pytest.approx(b, rel=1e-12)


def test_complement_disk_center():
    # polar coordinates: 2 pi int_1^inf r^{-1-2s} dr = pi / s
    for s in (0.55, 0.75, 0.9):
        got = complement_integral(np.zeros(2), Domain.UNIT_DISK, s)
        assert got == pytest.approx(math.pi / s, rel=1e-9)


def test_complement_disk_monotone_in_radius():
    s = 0.7
    vals = [complement_integral(np.array([r, 0.0]), Domain.UNIT_DISK, s)
            for r in (0.0, 0.3, 0.6, 0.9, 0.99)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_complement_rejects_exterior():
    with pytest.raises(ValueError):
        complement_integral(1.0, Domain.INTERVAL, 0.7)
    with pytest.raises(ValueError):
        complement_integral(np.array([0.8, 0.8]), Domain.UNIT_DISK, 0.7)
