"""Method-of-lines integration of the damped wave problem in the sine basis.

Each mode obeys ``u_n'' + (eps n^2 + a') u_n' + C n^2 u_n = f_n`` where
``f = F(u) - a u_t`` is formed on the grid and projected back. The
``imex2`` scheme applies Crank-Nicolson to the diagonal linear part (a
2x2 solve per mode) and second-order extrapolation to ``f``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import BlowUpError, ConfigurationError
from .field import SineGrid, SpectralState, eval_norm_d
from .liapunov import LiapunovParams, eval_hamiltonian, eval_W, eval_W_dot_analytic

CSV_COLUMNS = ("t", "d", "W", "W_dot_analytic", "W_dot_fd", "H", "sup_abs_u", "envelope_bound")


@dataclass(frozen=True)
class SolverConfig:
    n_modes: int = 64
    dt: float = 1e-3
    scheme: str = "imex2"
    t_end: float = 10.0
    sample_every: int = 10
    grid_factor: int = 2

    def __post_init__(self):
        if self.n_modes < 1:
            raise ConfigurationError("n_modes must be >= 1")
        if not self.dt > 0:
            raise ConfigurationError("dt must be positive")
        if self.scheme not in ("imex2", "erk4"):
            raise ConfigurationError(f"unknown scheme {self.scheme!r}")
        if self.sample_every < 1 or self.grid_factor < 1:
            raise ConfigurationError("sample_every and grid_factor must be >= 1")

    def grid(self):
        return SineGrid(self.n_modes, self.grid_factor * self.n_modes + 1)


def semidiscretize(problem, n_modes, grid=None):
    """Right-hand side ``(u, v, t) -> (u', v')`` of the projected mode system.

    The returned callable exposes ``.nonlinear(u, v, t)`` for the projected
    ``F(u) - a u_t`` alone.
    """
    grid = grid or SineGrid(n_modes)
    fam, forcing, damping = problem.family, problem.forcing, problem.damping
    n2 = grid.n ** 2
    a_prime = damping.a_prime
    linear_only = forcing.is_zero and damping.is_zero

    def nonlinear(u, v, t):
        if linear_only:
            return np.zeros(n_modes)
        u_g = grid.to_grid(u)
        f = np.zeros_like(u_g) if forcing.is_zero else np.asarray(forcing.eval(u_g), dtype=float)
        if not damping.is_zero:
            v_g = grid.to_grid(v)
            u_x = grid.cos_to_grid(grid.n * u)
            u_xx = grid.to_grid(-n2 * u)
            d = eval_norm_d(SpectralState(u, v, t), float(fam.eps(t)))
            a = np.asarray(damping.a_eval(grid.x, t, u_g, u_x, v_g, u_xx, d), dtype=float)
            f = f - a * v_g
        return grid.to_modes(f)

    def rhs(u, v, t):
        eps, C = float(fam.eps(t)), float(fam.C(t))
        dv = -(eps * n2 + a_prime) * v - C * n2 * u + nonlinear(u, v, t)
        return v.copy(), dv

    rhs.nonlinear = nonlinear
    rhs.grid = grid
    return rhs


def linear_mode_oracle(n, eps0, a_prime, C0, u_init, v_init, t):
    """Exact ``(u, u')`` of ``x'' + (eps0 n^2 + a') x' + C0 n^2 x = 0``."""
    b = eps0 * n ** 2 + a_prime
    c = C0 * n ** 2
    disc = b * b - 4.0 * c
    alpha = 0.5 * b
    if abs(disc) <= 1e-14 * max(b * b, 4.0 * c):
        w = v_init + alpha * u_init
        e = math.exp(-alpha * t)
        return e * (u_init + w * t), e * (w - alpha * (u_init + w * t))
    if disc < 0:
        omega = math.sqrt(-disc) / 2.0
        w = (v_init + alpha * u_init) / omega
        e = math.exp(-alpha * t)
        cs, sn = math.cos(omega * t), math.sin(omega * t)
        u = e * (u_init * cs + w * sn)
        v = e * (-alpha * (u_init * cs + w * sn) + omega * (-u_init * sn + w * cs))
        return u, v
    root = math.sqrt(disc)
    r1, r2 = (-b + root) / 2.0, (-b - root) / 2.0
    A = (v_init - r2 * u_init) / (r1 - r2)
    B = u_init - A
    e1, e2 = math.exp(r1 * t), math.exp(r2 * t)
    return A * e1 + B * e2, r1 * A * e1 + r2 * B * e2


@dataclass(eq=False)
class Trajectory:
    """Sampled states with the diagnostics ``d``, ``W``, ``dW/dt`` and ``H``."""

    times: np.ndarray
    states: tuple
    d: np.ndarray
    W: np.ndarray
    W_dot: np.ndarray
    W_dot_fd: np.ndarray
    H: np.ndarray
    sup_abs_u: np.ndarray
    top_mode_fraction: np.ndarray
    params: LiapunovParams
    problem: object = None
    config: Optional[SolverConfig] = None
    meta: dict = field(default_factory=dict)

    @property
    def t0(self):
        return float(self.times[0])

    def __len__(self):
        return len(self.times)

    def with_params(self, params):
        """Recompute ``W`` diagnostics with other functional parameters (same states)."""
        grid = self.config.grid() if self.config else None
        W = np.array([eval_W(s, self.problem, params, grid) for s in self.states])
        W_dot = np.array([eval_W_dot_analytic(s, self.problem, params, grid) for s in self.states])
        return Trajectory(self.times, self.states, self.d, W, W_dot,
                          np.full_like(W, np.nan), self.H, self.sup_abs_u, self.top_mode_fraction,
                          params, self.problem, self.config, dict(self.meta))

    def rows(self, envelope_bound=None):
        env = np.full(len(self), np.nan) if envelope_bound is None else np.asarray(envelope_bound)
        cols = (self.times, self.d, self.W, self.W_dot, self.W_dot_fd, self.H, self.sup_abs_u, env)
        for values in zip(*cols):
            yield [_fmt(x) for x in values]

    def to_csv(self, path, envelope_bound=None):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            writer.writerows(self.rows(envelope_bound))


def _fmt(x):
    x = float(x)
    return "" if math.isnan(x) else repr(x)


def _modes(spec, grid, n_modes):
    if spec is None:
        return np.zeros(n_modes)
    if callable(spec):
        return grid.to_modes(np.asarray(spec(grid.x), dtype=float))
    arr = np.asarray(spec, dtype=float).ravel()
    if arr.size > n_modes:
        raise ConfigurationError(f"{arr.size} initial modes exceed n_modes={n_modes}")
    out = np.zeros(n_modes)
    out[:arr.size] = arr
    return out


def integrate(problem, u0, u1, t0=0.0, config=None, liapunov_params=None):
    """Integrate from ``(u0, u1)`` at ``t0`` to ``config.t_end``.

    ``u0``/``u1`` are mode vectors (zero-padded to ``n_modes``) or callables
    sampled on the grid. ``W`` diagnostics use ``liapunov_params`` (default
    ``gamma = 3``, ``theta = a'``).
    """
    config = config or SolverConfig()
    if t0 < 0:
        raise ConfigurationError("t0 must be >= 0")
    if not config.t_end > t0:
        raise ConfigurationError("t_end must exceed t0")
    N, dt = config.n_modes, config.dt
    grid = config.grid()
    fam = problem.family
    a_prime = problem.damping.a_prime
    params = liapunov_params or LiapunovParams(3.0, a_prime)
    if config.scheme == "erk4":
        eps_sup = fam.eps_sup
        if eps_sup is None or not math.isfinite(eps_sup):
            raise ConfigurationError("erk4 needs a finite declared eps_sup")
        if dt * (eps_sup * N ** 2 + a_prime) > 2.0:
            raise ConfigurationError(
                f"erk4 stability guard: dt (eps_sup N^2 + a') = {dt * (eps_sup * N ** 2 + a_prime):.3g} > 2")

    rhs = semidiscretize(problem, N, grid)
    n2 = grid.n ** 2
    n_steps = int(round((config.t_end - t0) / dt))
    if n_steps < 1:
        raise ConfigurationError("integration interval shorter than one step")
    sample_idx = set(range(0, n_steps + 1, config.sample_every))
    sample_idx.add(n_steps)
    w_idx = {0, 1, 2, 3, 4, n_steps - 4, n_steps - 3, n_steps - 2, n_steps - 1, n_steps}
    for i in sample_idx:
        w_idx.update((i - 1, i, i + 1))
    w_idx = {j for j in w_idx if 0 <= j <= n_steps}

    u = _modes(u0, grid, N)
    v = _modes(u1, grid, N)
    t = t0
    W_at, samples = {}, []

    def record(i, u, v, t):
        if i not in w_idx:
            return
        state = SpectralState(u, v, t)
        W_at[i] = eval_W(state, problem, params, grid)
        if i in sample_idx:
            samples.append((i, state))

    record(0, u, v, t)
    f_prev = None
    h = 0.5 * dt
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(1, n_steps + 1):
            if config.scheme == "imex2":
                f_now = rhs.nonlinear(u, v, t)
                f_ext = f_now if f_prev is None else 1.5 * f_now - 0.5 * f_prev
                f_prev = f_now
                tm = t + h
                lam = float(fam.eps(tm)) * n2 + a_prime
                kap = float(fam.C(tm)) * n2
                s = h * lam + h * h * kap
                v_new = (v * (1.0 - s) - 2.0 * h * kap * u + dt * f_ext) / (1.0 + s)
                u = u + h * (v + v_new)
                v = v_new
            else:
                k1u, k1v = rhs(u, v, t)
                k2u, k2v = rhs(u + h * k1u, v + h * k1v, t + h)
                k3u, k3v = rhs(u + h * k2u, v + h * k2v, t + h)
                k4u, k4v = rhs(u + dt * k3u, v + dt * k3v, t + dt)
                u = u + dt / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u)
                v = v + dt / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)
            t_next = t0 + i * dt
            if not (np.isfinite(u).all() and np.isfinite(v).all()):
                raise BlowUpError(f"non-finite state at t={t_next!r}", last_valid_time=t)
            t = t_next
            record(i, u, v, t)

    # one-sided fourth-order stencil at the ends, centered inside
    one_sided = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / (12.0 * dt)

    def fd(i):
        if 0 < i < n_steps:
            return (W_at[i + 1] - W_at[i - 1]) / (2.0 * dt)
        if n_steps >= 4:
            if i == 0:
                return float(one_sided @ [W_at[j] for j in range(5)])
            return -float(one_sided @ [W_at[n_steps - j] for j in range(5)])
        return (W_at[1] - W_at[0]) / dt if i == 0 else (W_at[i] - W_at[i - 1]) / dt

    states = tuple(s for _, s in samples)
    eps_vals = [float(fam.eps(s.t)) for s in states]
    top = []
    for s, e in zip(states, eps_vals):
        weights = (e ** 2 * n2 ** 2 + n2 + 1.0) * s.u_modes ** 2 + s.v_modes ** 2
        total = weights.sum()
        top.append(weights[-1] / total if total > 0 else 0.0)
    return Trajectory(
        times=np.array([s.t for s in states]),
        states=states,
        d=np.array([eval_norm_d(s, e) for s, e in zip(states, eps_vals)]),
        W=np.array([W_at[i] for i, _ in samples]),
        W_dot=np.array([eval_W_dot_analytic(s, problem, params, grid) for s in states]),
        W_dot_fd=np.array([fd(i) for i, _ in samples]),
        H=np.array([eval_hamiltonian(s, problem, grid) for s in states]),
        sup_abs_u=np.array([float(np.max(np.abs(grid.to_grid(s.u_modes)))) for s in states]),
        top_mode_fraction=np.array(top),
        params=params, problem=problem, config=config,
    )
