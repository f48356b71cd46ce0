import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracfem.problem import (
    Domain,
    ProblemSpec,
    exact_gradient,
    exact_rhs,
    exact_solution,
    load_solution_pairing,
)


def test_spec_validation():
    with pytest.raises(ValueError):
        ProblemSpec(n=3, s=0.6)
    with pytest.raises(ValueError):
        ProblemSpec(n=1, s=1.0)
    with pytest.raises(ValueError):
        ProblemSpec(n=1, s=0.6, k=-1)
    with pytest.raises(ValueError):
        ProblemSpec(n=1, s=0.6, domain=Domain.UNIT_DISK)
    # default domain follows the dimension
    assert ProblemSpec(n=1, s=0.6).domain is Domain.INTERVAL
    assert ProblemSpec(n=2, s=0.6).domain is Domain.UNIT_DISK


def test_rhs_k0_is_constant_one():
    spec = ProblemSpec(n=1, s=0.75, k=0)
    assert exact_rhs(spec, 0.3) == pytest.approx(1.0, rel=1e-14)
    xs = np.linspace(-1.0, 1.0, 11)
    assert np.allclose(exact_rhs(spec, xs), 1.0)


def test_rhs_2d_k1_affine_profile():
    # f(x) = (2+s)|x|^2 - 1 for k = 1 on the disk
    spec = ProblemSpec(n=2, s=0.8, k=1)
    x = np.array([0.5, 0.5])  # |x|^2 = 0.5
    assert exact_rhs(spec, x) == pytest.approx((2 + 0.8) * 0.5 - 1.0,
                                               rel=1e-13)
    r = math.sqrt(1.0 / (2 + 0.8))
    assert exact_rhs(spec, np.array([r, 0.0])) == pytest.approx(0.0,
                                                                abs=1e-14)


def test_solution_vanishes_on_boundary():
    for spec in (ProblemSpec(n=1, s=0.6, k=2), ProblemSpec(n=2, s=0.9, k=1)):
        x = 1.0 if spec.n == 1 else np.array([0.6, 0.8])
        assert exact_solution(spec, x) == 0.0


def test_solution_center_values():
    spec = ProblemSpec(n=1, s=0.5, k=0)
    assert exact_solution(spec, 0.0) == pytest.approx(1.0, rel=1e-13)
    spec2 = ProblemSpec(n=2, s=0.7, k=1)
    s = 0.7
    want = -1.0 / (2.0 ** (2 * s) * math.gamma(2.0 + s) ** 2)
    assert exact_solution(spec2, np.zeros(2)) == pytest.approx(want,
                                                               rel=1e-12)


def test_gradient_zero_at_center():
    assert exact_gradient(ProblemSpec(n=1, s=0.8, k=0), 0.0) == 0.0
    g = exact_gradient(ProblemSpec(n=2, s=0.8, k=0), np.zeros(2))
    assert np.allclose(g, 0.0)


def test_gradient_rejects_boundary():
    with pytest.raises(ValueError):
        exact_gradient(ProblemSpec(n=1, s=0.8, k=0), 1.0)


@settings(deadline=None, max_examples=100)
@given(st.floats(min_value=-0.9, max_value=0.9),
       st.floats(min_value=0.55, max_value=0.95),
       st.integers(min_value=0, max_value=3))
def test_gradient_matches_finite_difference_1d(x, s, k):
    spec = ProblemSpec(n=1, s=s, k=k)
    eps = 1e-6
    fd = (exact_solution(spec, x + eps) - exact_solution(spec, x - eps)) / (2 * eps)
    g = exact_gradient(spec, x)
    assert g == pytest.approx(fd, rel=1e-5, abs=1e-8)


@settings(deadline=None, max_examples=60)
@given(st.floats(min_value=-0.6, max_value=0.6),
       st.floats(min_value=-0.6, max_value=0.6),
       st.floats(min_value=0.55, max_value=0.95),
       st.integers(min_value=0, max_value=2))
def test_gradient_matches_finite_difference_2d(x0, x1, s, k):
    spec = ProblemSpec(n=2, s=s, k=k)
    x = np.array([x0, x1])
    eps = 1e-6
    g = exact_gradient(spec, x)
    for d in range(2):
        step = np.zeros(2)
        step[d] = eps
        fd = (exact_solution(spec, x + step)
              - exact_solution(spec, x - step)) / (2 * eps)
        assert g[d] == pytest.approx(float(fd), rel=1e-5, abs=1e-8)


def test_load_pairing_interval_closed_form():
    # k=0, s=1/2 on the interval: int of (1-x^2)^{1/2} is pi/2
    spec = ProblemSpec(n=1, s=0.5, k=0)
    assert load_solution_pairing(spec) == pytest.approx(math.pi / 2.0,
                                                        rel=1e-13)


@pytest.mark.parametrize("n,s,k", [(1, 0.6, 0), (1, 0.8, 2),
                                   (2, 0.7, 0), (2, 0.9, 1)])
def test_load_pairing_against_quadrature(n, s, k):
    from scipy.integrate import quad

    spec = ProblemSpec(n=n, s=s, k=k)
    if n == 1:
        val, _ = quad(lambda x: exact_rhs(spec, x) * exact_solution(spec, x),
                      -1.0, 1.0, points=[0.0], limit=200)
    else:
        val, _ = quad(
            lambda r: 2.0 * math.pi * r * exact_rhs(spec, np.array([r, 0.0]))
            * exact_solution(spec, np.array([r, 0.0])),
            0.0, 1.0, limit=200)
    assert load_solution_pairing(spec) == pytest.approx(val, rel=1e-9)
