import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fracfem.special import (
    gamma_fn,
    jacobi_poly,
    jacobi_poly_deriv,
    normalization_constant,
)


def test_gamma_basic_values():
    assert gamma_fn(1.0) == pytest.approx(1.0, rel=1e-14)
    assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    # independent high-precision value of Gamma(1.5)
    assert gamma_fn(1.5) == pytest.approx(0.8862269254527580, rel=1e-13)


@given(st.floats(min_value=0.1, max_value=20.0))
def test_gamma_recurrence(x):
    assert gamma_fn(x + 1.0) == pytest.approx(x * gamma_fn(x), rel=1e-12)


def test_normalization_constant_values():
    # C(1, 1/2) = 1/pi by direct substitution into the Gamma formula
    assert normalization_constant(1, 0.5) == pytest.approx(1.0 / math.pi,
                                                           rel=1e-13)
    c = (2.0 ** 1.5 * 0.75 * gamma_fn(0.75 + 1.0)
         / (math.pi * gamma_fn(0.25)))
    assert normalization_constant(2, 0.75) == pytest.approx(c, rel=1e-13)
    assert normalization_constant(2, 0.75) == pytest.approx(0.17117,
                                                            rel=5e-4)


def test_normalization_constant_vanishes_linearly_as_s_to_1():
    # C(n,s) ~ const * (1-s) near s = 1
    for n in (1, 2):
        r1 = normalization_constant(n, 1.0 - 1e-4) / 1e-4
        r2 = normalization_constant(n, 1.0 - 1e-5) / 1e-5
        assert r1 == pytest.approx(r2, rel=1e-3)


@given(st.integers(min_value=0, max_value=6),
       st.floats(min_value=0.51, max_value=0.99),
       st.floats(min_value=-1.0, max_value=1.0))
def test_jacobi_k0_is_one(_, s, z):
    assert jacobi_poly(0, s, -0.5, z) == pytest.approx(1.0, rel=1e-14)


def test_jacobi_k1_endpoints():
    # P_1^{(a,b)}(z) = (a+1) + (a+b+2)(z-1)/2
    assert jacobi_poly(1, 0.5, 0.0, 1.0) == pytest.approx(1.5, rel=1e-14)
    assert jacobi_poly(1, 0.5, 0.0, -1.0) == pytest.approx(-1.0, rel=1e-14)


def test_jacobi_value_at_one():
    # P_k^{(a,b)}(1) = Gamma(a+k+1) / (k! Gamma(a+1))
    for k in range(1, 5):
        for a, b in ((0.6, 0.0), (0.9, 0.3), (0.75, -0.5)):
            want = gamma_fn(a + k + 1) / (math.factorial(k) * gamma_fn(a + 1))
            assert jacobi_poly(k, a, b, 1.0) == pytest.approx(want, rel=1e-12)


def test_jacobi_against_scipy():
    from scipy.special import eval_jacobi

    zs = np.linspace(-1.0, 1.0, 17)
    for k in range(0, 6):
        for a, b in ((0.6, 0.0), (0.8, -0.5), (0.55, 0.25)):
            for z in zs:
                assert jacobi_poly(k, a, b, z) == pytest.approx(
                    float(eval_jacobi(k, a, b, z)), rel=1e-11, abs=1e-12)


@given(st.integers(min_value=1, max_value=5),
       st.floats(min_value=-0.95, max_value=0.95))
def test_jacobi_deriv_matches_finite_difference(k, z):
    a, b = 0.7, -0.5
    eps = 1e-6
    fd = (jacobi_poly(k, a, b, z + eps) - jacobi_poly(k, a, b, z - eps)) / (2 * eps)
    assert jacobi_poly_deriv(k, a, b, z) == pytest.approx(fd, rel=1e-7,
                                                          abs=1e-7)


def test_invalid_arguments():
    with pytest.raises(ValueError):
        normalization_constant(3, 0.5)
    with pytest.raises(ValueError):
        normalization_constant(1, 1.0)
    with pytest.raises(ValueError):
        jacobi_poly(-1, 0.5, 0.0, 0.0)
