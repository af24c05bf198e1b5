import math

import pytest
from hypothesis import given, strategies as st

from perturbkit.errors import QuadratureFailure
from perturbkit.quadrature import (DEFAULT_QUAD, QuadratureConfig,
                                   integrate_interval, integrate_pieces,
                                   principal_value)


def test_power_tail():
    val, err = integrate_interval(lambda x: x ** -5.0 + 0j, 1.0, math.inf)
    assert abs(val - 0.25) < 1e-12
    assert err < 1e-10


def test_complex_integrand():
    val, _ = integrate_interval(lambda x: (1.0 + 2.0j) * math.exp(-x), 0.0,
                                math.inf)
    assert abs(val - (1.0 + 2.0j)) < 1e-11


def test_pieces_sum():
    val, _ = integrate_pieces(lambda x: x + 0j, [(0.0, 1.0), (1.0, 2.0)])
    assert abs(val - 2.0) < 1e-12


def test_semiinfinite_map():
    cfg = DEFAULT_QUAD
    assert cfg.semiinfinite_map(3.0, 0.0) == 3.0
    assert cfg.semiinfinite_map(3.0, 0.5) == 4.0
    ts = [0.1 * k for k in range(10)]
    xs = [cfg.semiinfinite_map(2.0, t) for t in ts]
    assert all(b > a for a, b in zip(xs, xs[1:]))


def test_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(abs_tol=-1.0)
    with pytest.raises(ValueError):
        QuadratureConfig(max_subdivisions=0)


def test_budget_failure():
    cfg = QuadratureConfig(abs_tol=1e-13, rel_tol=1e-13, max_subdivisions=1)
    with pytest.raises(QuadratureFailure):
        integrate_interval(lambda x: math.sin(50.0 * x) / (1 + x * x) + 0j,
                           0.0, 200.0, cfg)


def test_principal_value_odd_cancellation():
    val = principal_value(lambda x: 1.0 + 0j, 1.0, 0.0, 2.0)
    assert abs(val) < 1e-12


def test_principal_value_affine():
    # PV int_1^3 x/(x-2) dx = 2 (the constant part integrates to 2)
    val = principal_value(lambda x: x + 0j, 2.0, 1.0, 3.0)
    assert abs(val - 2.0) < 1e-10


@given(q=st.floats(min_value=-6.0, max_value=-1.3),
       a=st.floats(min_value=0.5, max_value=4.0))
def test_power_antiderivative_oracle(q, a):
    val, _ = integrate_interval(lambda x: x ** q + 0j, a, math.inf)
    exact = -a ** (q + 1.0) / (q + 1.0)
    assert abs(val - exact) < 1e-9 * (1 + abs(exact))
