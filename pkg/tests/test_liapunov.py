import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import special

from liaplab import coefficients as co
from liaplab.errors import ConfigurationError, DomainError
from liaplab.field import SineGrid, SpectralState, random_state
from liaplab.liapunov import (LiapunovParams, W_upper_bound, eval_B, eval_g, eval_hamiltonian,
                              eval_hamiltonian_dot, eval_m, eval_W, eval_W_dot_analytic,
                              invert_B)
from liaplab.solver import semidiscretize

from .conftest import const_problem

P = LiapunovParams(3.0, 2.0)


def test_zero_state():
    prob = const_problem(1.0, 4.0, forcing=co.sine_forcing())
    s = SpectralState.zeros(8)
    assert eval_W(s, prob, P) == 0.0
    assert eval_W_dot_analytic(s, prob, P) == 0.0
    assert eval_hamiltonian(s, prob) == 0.0


def test_W_first_mode_closed_form():
    prob = const_problem(1.0, 4.0, a_prime=1.0)
    s = SpectralState([1.0], [0.0])
    assert eval_W(s, prob, P) == pytest.approx(11 * math.pi / 2, rel=1e-14)
    assert eval_W(s, prob, P) == pytest.approx(17.27876, abs=1e-5)


def test_W_sine_forcing_potential():
    lin = const_problem(1.0, 4.0, a_prime=1.0)
    sg = const_problem(1.0, 4.0, a_prime=1.0, forcing=co.sine_forcing(1.0, 1.0))
    s = SpectralState(np.r_[1.0, np.zeros(15)], np.zeros(16))
    drop = eval_W(s, lin, P) - eval_W(s, sg, P)
    # int_0^pi (1 - cos(sin x)) dx = pi (1 - J0(1))
    oracle = (1 + P.gamma) * math.pi * (1 - special.j0(1.0))
    assert drop == pytest.approx(oracle, rel=1e-12)


def test_W_dot_eps_zero_closed_form():
    prob = const_problem(0.0, 4.0, a_prime=1.0)
    s = SpectralState([1.0], [0.0])
    assert eval_W_dot_analytic(s, prob, LiapunovParams(1.7, 2.0)) == pytest.approx(-4 * math.pi, rel=1e-14)


def _total_derivative(fn, state, rhs, h=1e-5):
    du, dv = rhs(state.u_modes, state.v_modes, state.t)
    plus = SpectralState(state.u_modes + h * du, state.v_modes + h * dv, state.t + h)
    minus = SpectralState(state.u_modes - h * du, state.v_modes - h * dv, state.t - h)
    return (fn(plus) - fn(minus)) / (2 * h)


PROBLEMS = {
    "example1-sine": lambda: co.make_example1(1.0, 2.0, 4.0, co.sine_forcing(0.5), co.no_damping(1.0)),
    "example2": lambda: co.make_example2(1.0, 0.25, 4.0, 0.5, co.zero_forcing(), co.no_damping(1.0)),
    "example3-absu": lambda: co.make_example3(co.periodic_eps(0.5, 0.5, 1.0), 4.0, 1.0, 1.0,
                                              co.restoring_power_forcing(1.0, 2.0),
                                              co.abs_u_damping(1.0, 0.7)),
    "normpower": lambda: co.make_example1(0.5, 1.0, 3.0, co.sine_forcing(0.3, 2.0),
                                          co.norm_power_damping(0.5, 0.8, 0.5)),
}


@pytest.mark.parametrize("name", sorted(PROBLEMS))
@pytest.mark.parametrize("params", [LiapunovParams(3.0, 2.0), LiapunovParams(14.65, 2.02),
                                    LiapunovParams(2.0, 0.0, functional_a_prime=0.0)])
def test_W_dot_identity_along_semidiscrete_flow(name, params, rng):
    """The analytic derivative equals d/dt W along the projected mode system."""
    prob = PROBLEMS[name]()
    N = 12
    grid = SineGrid(N)
    rhs = semidiscretize(prob, N, grid)
    for t in (0.3, 2.0, 7.5):
        s = random_state(N, rng, eps=float(prob.family.eps(t)), d=0.4, t=t, decay=3.0)
        fd = _total_derivative(lambda z: eval_W(z, prob, params, grid), s, rhs)
        an = eval_W_dot_analytic(s, prob, params, grid)
        assert an == pytest.approx(fd, rel=1e-7, abs=1e-12)


@pytest.mark.parametrize("name", sorted(PROBLEMS))
def test_hamiltonian_dot_identity(name, rng):
    prob = PROBLEMS[name]()
    N = 12
    grid = SineGrid(N)
    rhs = semidiscretize(prob, N, grid)
    s = random_state(N, rng, eps=float(prob.family.eps(1.0)), d=0.5, t=1.0, decay=3.0)
    fd = _total_derivative(lambda z: eval_hamiltonian(z, prob, grid), s, rhs)
    assert eval_hamiltonian_dot(s, prob, grid) == pytest.approx(fd, rel=1e-7, abs=1e-12)


@given(st.floats(0.0, 10.0))
def test_hamiltonian_exact_mode(t0):
    prob = const_problem(0.0, 4.0, a_prime=0.0)
    s = SpectralState([math.cos(2 * t0)], [-2 * math.sin(2 * t0)], t0)
    assert eval_hamiltonian(s, prob) == pytest.approx(math.pi, rel=1e-13)


def test_hamiltonian_dot_zero_without_dissipation(rng):
    prob = const_problem(0.0, 4.0, a_prime=0.0)
    s = random_state(8, rng, d=1.0)
    assert eval_hamiltonian_dot(s, prob) == 0.0


def test_envelopes_zero_forcing():
    f = co.zero_forcing()
    assert eval_m(3.0, f) == 0.0
    assert eval_B(0.7, f) == 0.7
    assert invert_B(0.7, f) == 0.7


def test_envelopes_sine():
    f = co.sine_forcing(1.0, 1.0)
    assert eval_m(0.1, f) == 1.0
    assert eval_B(0.3, f) == pytest.approx(0.3 * math.sqrt(2), rel=1e-15)
    assert invert_B(0.3, f) == pytest.approx(0.3 / math.sqrt(2), rel=1e-15)


@given(st.floats(1e-6, 50.0))
def test_invert_B_power_round_trip(y):
    f = co.restoring_power_forcing(1.0, 1.0)
    x = invert_B(y, f)
    assert eval_B(x, f) == pytest.approx(y, rel=1e-12)
    assert x <= y


def test_B_increasing_and_above_identity():
    f = co.restoring_power_forcing(2.0, 0.5)
    d = np.linspace(0, 5, 500)
    B = np.array([eval_B(x, f) for x in d])
    assert np.all(np.diff(B) > 0)
    assert np.all(B >= d)


def test_domain_errors():
    f = co.zero_forcing()
    with pytest.raises(DomainError):
        invert_B(-1.0, f)
    with pytest.raises(DomainError):
        eval_m(-0.1, f)
    with pytest.raises(DomainError):
        eval_B(-0.1, f)


def test_g_example1(example1):
    # g = C - eps_dot/2 + 1 = 4 + 1 + 1 at t = 0; the declared sup bound 7 dominates it
    assert eval_g(0.0, example1.family) == 6.0
    assert example1.family.g_sup == 7.0
    t = np.linspace(0, 100, 1001)
    assert np.all(example1.family.g(t) <= example1.family.g_sup)
    assert np.all(example1.family.g(t) > 1)


def test_W_upper_bound_formula(example1_sine):
    val = W_upper_bound(0.2, 0.0, 3.0, example1_sine)
    assert val == pytest.approx(4.0 * 6.0 * 1.5 * 0.04, rel=1e-14)


def test_params_validation():
    with pytest.raises(ConfigurationError):
        LiapunovParams(0.0, 1.0)
    with pytest.raises(ConfigurationError):
        LiapunovParams(1.0, -1.0)
