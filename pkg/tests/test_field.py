import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from liaplab.errors import AliasingError, ConfigurationError
from liaplab.field import (SineGrid, SpectralState, eval_norm_d, poincare_gap, quad_nonlinear,
                           random_state, to_grid, to_modes)


def test_single_mode_round_trip():
    M = 15
    x = math.pi * np.arange(1, M + 1) / (M + 1)
    grid = to_grid([1.0, 0.0, 0.0], M)
    np.testing.assert_allclose(grid, np.sin(x), atol=1e-15)
    np.testing.assert_allclose(to_modes(grid, 3), [1.0, 0.0, 0.0], atol=1e-15)


def test_zero_modes_zero_grid():
    assert not to_grid(np.zeros(4), 9).any()


def test_random_round_trip(rng):
    m = rng.standard_normal(8)
    assert np.max(np.abs(to_modes(to_grid(m, 31), 8) - m)) < 1e-12


def test_aliasing_error():
    with pytest.raises(AliasingError):
        to_grid(np.ones(8), 7)
    with pytest.raises(AliasingError):
        to_modes(np.ones(7), 8)
    with pytest.raises(AliasingError):
        SineGrid(8, 7)


def test_sinegrid_matches_transform(rng):
    g = SineGrid(16, 33)
    m = rng.standard_normal(16)
    np.testing.assert_allclose(g.to_grid(m), to_grid(m, 33), atol=1e-13)
    np.testing.assert_allclose(g.to_modes(g.to_grid(m)), m, atol=1e-13)


def test_derivative_fields():
    g = SineGrid(4, 64)
    s = SpectralState([0.0, 1.0, 0, 0], [1.0, 0, 0, 0])
    f = g.fields(s)
    np.testing.assert_allclose(f["u_x"], 2 * np.cos(2 * g.x), atol=1e-13)
    np.testing.assert_allclose(f["u_xx"], -4 * np.sin(2 * g.x), atol=1e-13)
    np.testing.assert_allclose(f["u_xt"], np.cos(g.x), atol=1e-13)


@pytest.mark.parametrize("eps,d2", [(1.0, 1.5 * math.pi), (2.0, 3 * math.pi)])
def test_norm_first_mode(eps, d2):
    s = SpectralState([1.0], [0.0])
    assert eval_norm_d(s, eps) ** 2 == pytest.approx(d2, rel=1e-15)


def test_norm_first_mode_value():
    assert eval_norm_d(SpectralState([1.0], [0.0]), 1.0) == pytest.approx(2.170804, abs=1e-6)


def test_zero_state():
    assert eval_norm_d(SpectralState.zeros(5), 3.0) == 0.0


def test_poincare_examples():
    assert poincare_gap([1.0]) == 0.0
    assert poincare_gap([0.0, 1.0]) == pytest.approx(1.5 * math.pi, rel=1e-15)


@given(arrays(float, st.integers(1, 20), elements=st.floats(-1e3, 1e3)))
def test_poincare_nonnegative(u):
    assert poincare_gap(u) >= -1e-12


def test_quadrature_examples():
    M = 255
    x = math.pi * np.arange(1, M + 1) / (M + 1)
    assert quad_nonlinear(np.sin(x) ** 2) == pytest.approx(math.pi / 2, abs=1e-4)
    assert quad_nonlinear(np.sin(x)) == pytest.approx(2.0, abs=1e-4)
    assert quad_nonlinear(np.zeros(M)) == 0.0


def test_parseval_against_grid_quadrature(rng):
    N = 12
    g = SineGrid(N, 8 * N)
    for _ in range(20):
        eps = float(rng.uniform(0, 2))
        s = random_state(N, rng, eps=eps, d=1.0)
        f = g.fields(s)
        integrand = eps ** 2 * f["u_xx"] ** 2 + f["u_x"] ** 2 + f["u"] ** 2 + f["u_t"] ** 2
        # u_x^2 does not vanish at the ends: full trapezoid with end values
        ends = 0.5 * (np.sum(s.u_modes * g.n) ** 2 + np.sum(s.u_modes * g.n * (-1) ** (g.n + 1)) ** 2)
        quad = math.pi / (g.M + 1) * (integrand.sum() + ends)
        assert quad == pytest.approx(eval_norm_d(s, eps) ** 2, rel=1e-4)


def test_pointwise_bounds_by_norm(rng):
    g = SineGrid(16)
    for _ in range(200):
        eps = float(rng.uniform(0, 2))
        s = random_state(16, rng, eps=eps, d=float(rng.uniform(0.01, 3)))
        d = eval_norm_d(s, eps)
        f = g.fields(s)
        assert np.max(np.abs(f["u"])) <= d * (1 + 1e-12)
        assert eps * np.max(np.abs(f["u_x"])) <= d * (1 + 1e-12)


def test_state_validation():
    with pytest.raises(ConfigurationError):
        SpectralState([1.0, 2.0], [1.0])
    with pytest.raises(ConfigurationError):
        SpectralState([np.nan], [0.0])
    s = SpectralState([1.0], [2.0], 0.5)
    with pytest.raises(ValueError):
        s.u_modes[0] = 3.0


def test_random_state_norm(rng):
    s = random_state(10, rng, eps=0.5, d=0.3, t=2.0)
    assert eval_norm_d(s, 0.5) == pytest.approx(0.3, rel=1e-14)
    assert s.t == 2.0
