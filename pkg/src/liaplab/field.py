"""Sine-mode representation of Dirichlet fields on ]0, pi[.

A field ``u(x) = sum_{n=1..N} u_n sin(n x)`` is stored by its mode
coefficients. Quadratic integrals are exact mode sums; nonlinear
integrands are evaluated on the interior grid ``x_j = j pi/(M+1)`` and
integrated by the trapezoid rule, which for a product with any field of at
most ``M`` sine modes coincides with the discrete-sine inner product.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy import fft

from .errors import AliasingError, ConfigurationError

HALF_PI = 0.5 * math.pi


def _readonly(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SpectralState:
    """Mode coefficients of ``(u, u_t)`` at time ``t``."""

    u_modes: np.ndarray
    v_modes: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        u = _readonly(np.atleast_1d(self.u_modes))
        v = _readonly(np.atleast_1d(self.v_modes))
        if u.ndim != 1 or u.shape != v.shape or u.size < 1:
            raise ConfigurationError("u_modes and v_modes must be 1-D arrays of equal length >= 1")
        if not (np.isfinite(u).all() and np.isfinite(v).all() and math.isfinite(self.t)):
            raise ConfigurationError("state entries must be finite")
        object.__setattr__(self, "u_modes", u)
        object.__setattr__(self, "v_modes", v)
        object.__setattr__(self, "t", float(self.t))

    @property
    def n_modes(self):
        return self.u_modes.size

    def scaled(self, factor):
        return SpectralState(self.u_modes * factor, self.v_modes * factor, self.t)

    @classmethod
    def zeros(cls, n_modes, t=0.0):
        return cls(np.zeros(n_modes), np.zeros(n_modes), t)


def wavenumbers(n_modes):
    return np.arange(1, n_modes + 1, dtype=float)


def to_grid(modes, M):
    """Values of ``sum_n modes[n-1] sin(n x_j)`` at ``x_j = j pi/(M+1)``, j = 1..M."""
    modes = np.asarray(modes, dtype=float)
    N = modes.shape[-1]
    if M < N:
        raise AliasingError(f"grid of {M} points cannot hold {N} modes")
    padded = np.zeros(modes.shape[:-1] + (M,))
    padded[..., :N] = modes
    return 0.5 * fft.dst(padded, type=1, axis=-1)


def to_modes(values, N):
    """First ``N`` sine coefficients of grid values (inverse of :func:`to_grid`)."""
    values = np.asarray(values, dtype=float)
    M = values.shape[-1]
    if M < N:
        raise AliasingError(f"grid of {M} points cannot hold {N} modes")
    return fft.dst(values, type=1, axis=-1)[..., :N] / (M + 1)


def quad_nonlinear(values):
    """Trapezoid rule for ``int_0^pi f dx`` from interior values (f = 0 at the ends)."""
    values = np.asarray(values, dtype=float)
    return math.pi / (values.shape[-1] + 1) * values.sum(axis=-1)


def eval_norm_d(state, eps_t):
    """Weighted norm ``d`` with ``d^2 = int (eps^2 u_xx^2 + u_x^2 + u^2 + u_t^2) dx``."""
    n2 = wavenumbers(state.n_modes) ** 2
    u2, v2 = state.u_modes ** 2, state.v_modes ** 2
    d2 = HALF_PI * float(np.sum((eps_t ** 2 * n2 ** 2 + n2 + 1.0) * u2 + v2))
    return math.sqrt(d2)


def poincare_gap(u_modes):
    """``int u_x^2 - int u^2``, nonnegative for Dirichlet fields."""
    u_modes = np.asarray(u_modes, dtype=float)
    n2 = wavenumbers(u_modes.size) ** 2
    return HALF_PI * float(np.sum((n2 - 1.0) * u_modes ** 2))


class SineGrid:
    """Cached transform data for ``N`` modes on ``M`` interior points."""

    def __init__(self, n_modes, n_points=None):
        if n_modes < 1:
            raise ConfigurationError("need at least one mode")
        if n_points is None:
            n_points = 2 * n_modes + 1
        if n_points < n_modes:
            raise AliasingError(f"grid of {n_points} points cannot hold {n_modes} modes")
        self.N = n_modes
        self.M = n_points
        self.n = wavenumbers(n_modes)
        self.x = math.pi * np.arange(1, n_points + 1) / (n_points + 1)
        # dense matrices beat FFT call overhead at these sizes
        self._sin = np.sin(np.outer(self.x, self.n))
        self._sin_inv = self._sin.T * (2.0 / (n_points + 1))
        self._cos = np.cos(np.outer(self.x, self.n))

    def to_grid(self, modes):
        return self._sin @ modes

    def to_modes(self, values):
        return self._sin_inv @ values

    def cos_to_grid(self, modes):
        """Grid values of ``sum_n modes[n-1] cos(n x)``."""
        return self._cos @ modes

    def quad(self, values):
        return quad_nonlinear(values)

    def fields(self, state, derivatives=True):
        """Grid values of u, u_t and (optionally) u_x, u_xx, u_xt."""
        if state.n_modes != self.N:
            raise ConfigurationError(f"state has {state.n_modes} modes, grid expects {self.N}")
        out = {"u": self.to_grid(state.u_modes), "u_t": self.to_grid(state.v_modes)}
        if derivatives:
            n = self.n
            out["u_x"] = self.cos_to_grid(n * state.u_modes)
            out["u_xx"] = self.to_grid(-(n ** 2) * state.u_modes)
            out["u_xt"] = self.cos_to_grid(n * state.v_modes)
        return out


@functools.lru_cache(maxsize=32)
def default_grid(n_modes, grid_factor=2):
    return SineGrid(n_modes, grid_factor * n_modes + 1)


def random_state(n_modes, rng, eps=0.0, d=1.0, t=0.0, decay=1.5):
    """Random state with spectrum decaying like ``n^-decay``, scaled to norm ``d``."""
    n = wavenumbers(n_modes)
    u = rng.standard_normal(n_modes) * n ** -(decay + 1.0)
    v = rng.standard_normal(n_modes) * n ** -decay
    state = SpectralState(u, v, t)
    norm = eval_norm_d(state, eps)
    if norm == 0.0:
        return state
    return state.scaled(d / norm)
