"""The two-parameter Liapunov functional ``W``, its time derivative and the
Hamiltonian, evaluated on spectral states.

Quadratic pieces are exact mode sums; pieces involving ``F`` or the
nonlinear damping ``a`` use grid quadrature.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import optimize

from .errors import ConfigurationError, DomainError
from .field import HALF_PI, default_grid, eval_norm_d


@dataclass(frozen=True)
class LiapunovParams:
    """Parameters ``gamma`` and ``theta`` of ``W``.

    ``functional_a_prime`` replaces the linear damping constant inside the
    functional only (the equation keeps its own ``a'``); ``None`` uses the
    equation's value. Setting it to 0 together with ``theta = 0`` gives the
    older single-parameter functional.
    """

    gamma: float
    theta: float
    functional_a_prime: Optional[float] = None

    def __post_init__(self):
        if not self.gamma > 0:
            raise ConfigurationError("gamma must be positive")
        if self.theta < 0:
            raise ConfigurationError("theta must be nonnegative")


def _coefficients(state, problem):
    fam, t = problem.family, state.t
    return (float(fam.eps(t)), float(fam.eps_dot(t)), float(fam.eps_ddot(t)),
            float(fam.C(t)), float(fam.C_dot(t)))


def _grid_for(state, grid):
    return default_grid(state.n_modes) if grid is None else grid


def eval_W(state, problem, params, grid=None):
    """Value of the Liapunov functional ``W(u, u_t, t; gamma, theta)``."""
    eps, eps_dot, _, C, _ = _coefficients(state, problem)
    gamma, theta = params.gamma, params.theta
    ap = problem.damping.a_prime if params.functional_a_prime is None else params.functional_a_prime
    n2 = (np.arange(1, state.n_modes + 1, dtype=float)) ** 2
    u, v = state.u_modes, state.v_modes
    stiffness = C * (1.0 + gamma) - eps_dot + eps * (ap + theta)
    quadratic = HALF_PI * float(np.sum(
        gamma * v ** 2
        + (eps * n2 * u + v) ** 2
        + stiffness * n2 * u ** 2
        + ap * theta * u ** 2
        + 2.0 * theta * u * v
    ))
    potential = 0.0
    if not problem.forcing.is_zero:
        g = _grid_for(state, grid)
        potential = g.quad(problem.forcing.antiderivative(g.to_grid(u)))
    return 0.5 * quadratic - (1.0 + gamma) * potential


def eval_W_dot_analytic(state, problem, params, grid=None):
    """Exact ``dW/dt`` along solutions, from the equation before any bounding."""
    eps, eps_dot, eps_ddot, C, C_dot = _coefficients(state, problem)
    gamma, theta = params.gamma, params.theta
    a_prime = problem.damping.a_prime
    bp = a_prime if params.functional_a_prime is None else params.functional_a_prime
    n = np.arange(1, state.n_modes + 1, dtype=float)
    n2 = n ** 2
    u, v = state.u_modes, state.v_modes

    int_uxx2 = HALF_PI * float(np.sum(n2 ** 2 * u ** 2))
    int_ut2 = HALF_PI * float(np.sum(v ** 2))
    int_ux2 = HALF_PI * float(np.sum(n2 * u ** 2))
    int_uxt2 = HALF_PI * float(np.sum(n2 * v ** 2))
    int_ut_uxx = -HALF_PI * float(np.sum(n2 * u * v))
    int_u_ut = HALF_PI * float(np.sum(u * v))

    dissipation = (
        eps * (C - eps_dot) * int_uxx2
        + (a_prime * (1.0 + gamma) - theta) * int_ut2
        + (2.0 * theta * C + eps_ddot - eps_dot * (bp + theta) - (1.0 + gamma) * C_dot) * int_ux2 / 2.0
        + eps * gamma * int_uxt2
    )

    damping, forcing = problem.damping, problem.forcing
    if not (damping.is_zero and forcing.is_zero):
        g = _grid_for(state, grid)
        f = g.fields(state, derivatives=True)
        if not damping.is_zero:
            d = eval_norm_d(state, eps)
            a = np.asarray(damping.a_eval(g.x, state.t, f["u"], f["u_x"], f["u_t"], f["u_xx"], d),
                           dtype=float)
            dissipation += g.quad(a * f["u_t"] * ((1.0 + gamma) * f["u_t"]
                                                  + theta * f["u"] - eps * f["u_xx"]))
        if not forcing.is_zero:
            F = forcing.eval(f["u"])
            dissipation += g.quad(F * (eps * f["u_xx"] - theta * f["u"]))

    # only nonzero when the functional uses its own a'
    mismatch = eps * (a_prime - bp) * int_ut_uxx + theta * (bp - a_prime) * int_u_ut
    return -dissipation + mismatch


def eval_hamiltonian(state, problem, grid=None):
    """Energy ``int [(u_t^2 + C u_x^2)/2 - int_0^u F] dx``."""
    C = float(problem.family.C(state.t))
    n2 = (np.arange(1, state.n_modes + 1, dtype=float)) ** 2
    kinetic = HALF_PI * float(np.sum(state.v_modes ** 2 + C * n2 * state.u_modes ** 2)) / 2.0
    if problem.forcing.is_zero:
        return kinetic
    g = _grid_for(state, grid)
    return kinetic - g.quad(problem.forcing.antiderivative(g.to_grid(state.u_modes)))


def eval_hamiltonian_dot(state, problem, grid=None):
    eps, _, _, _, C_dot = _coefficients(state, problem)
    n2 = (np.arange(1, state.n_modes + 1, dtype=float)) ** 2
    u, v = state.u_modes, state.v_modes
    a_prime = problem.damping.a_prime
    out = -HALF_PI * float(np.sum(a_prime * v ** 2 + eps * n2 * v ** 2))
    out += C_dot * HALF_PI * float(np.sum(n2 * u ** 2)) / 2.0
    if not problem.damping.is_zero:
        g = _grid_for(state, grid)
        f = g.fields(state)
        a = np.asarray(problem.damping.a_eval(g.x, state.t, f["u"], f["u_x"], f["u_t"],
                                              f["u_xx"], eval_norm_d(state, eps)), dtype=float)
        out -= g.quad(a * f["u_t"] ** 2)
    return out


# ---------------------------------------------------------------------------
# scalar envelopes

def eval_g(t, family):
    """``g(t) = C(t) - eps_dot(t)/2 + 1``."""
    return float(family.g(t))


def eval_m(r, forcing):
    """Slope envelope ``m(r) = max |F_z|`` over ``|z| <= r``."""
    if r < 0:
        raise DomainError("m(r) needs r >= 0")
    return float(forcing.slope_envelope(r))


def eval_B(d, forcing):
    """``B(d) = sqrt(1 + m(d)) d``."""
    if d < 0:
        raise DomainError("B(d) needs d >= 0")
    return math.sqrt(1.0 + eval_m(d, forcing)) * d


def _constant_envelope(forcing):
    return forcing.name in ("zero", "sine")


def invert_B(y, forcing):
    """Solve ``B(x) = y`` for ``x >= 0``."""
    if y < 0:
        raise DomainError("invert_B needs y >= 0")
    if y == 0:
        return 0.0
    if math.isinf(y):
        return math.inf
    if _constant_envelope(forcing):
        return y / math.sqrt(1.0 + eval_m(0.0, forcing))
    # B(x) >= x and m non-decreasing give the bracket [y/sqrt(1+m(y)), y]
    lo, hi = y / math.sqrt(1.0 + eval_m(y, forcing)), y
    f = lambda x: eval_B(x, forcing) - y  # noqa: E731
    if f(lo) >= 0:
        return lo
    if f(hi) <= 0:
        return hi
    return optimize.brentq(f, lo, hi, xtol=1e-14 * y, rtol=4 * np.finfo(float).eps, maxiter=500)


def W_upper_bound(d, t, gamma, problem):
    """``[1 + gamma] g(t) B(d)^2``."""
    return (1.0 + gamma) * eval_g(t, problem.family) * eval_B(d, problem.forcing) ** 2
