"""Checks of the certified stability envelopes against sampled trajectories.

Every check returns an :class:`EnvelopeReport`. A margin is ``bound - value``
(positive when the inequality holds) and the report keeps the smallest one.
An unmet antecedent (initial norm above the certified threshold, horizon
shorter than the attraction time) yields ``"inconclusive"``, never ``"fail"``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"

ENVELOPE_RTOL = 1e-9
DECAY_ATOL = 1e-8
WDOT_RTOL = 1e-4


@dataclass(frozen=True)
class EnvelopeReport:
    name: str
    verdict: str
    worst_margin: float = math.nan
    time_of_worst: float = math.nan
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.verdict == PASS

    def to_dict(self):
        return {"name": self.name, "verdict": self.verdict, "worst_margin": self.worst_margin,
                "time_of_worst": self.time_of_worst, "details": dict(self.details)}


def _inconclusive(name, reason, **details):
    return EnvelopeReport(name, INCONCLUSIVE, details={"reason": reason, **details})


def _judge(name, times, margins, details, strict=False):
    """Report built from per-sample margins; ``strict`` demands margins > 0."""
    margins = np.asarray(margins, dtype=float)
    if margins.size == 0:
        return _inconclusive(name, "no samples to check", **details)
    i = int(np.argmin(margins))
    worst = float(margins[i])
    ok = worst > 0 if strict else worst >= 0
    return EnvelopeReport(name, PASS if ok else FAIL, worst, float(times[i]), details)


def _d0(traj):
    return float(traj.d[0]) if len(traj) else math.nan


def _below(traj, delta):
    return delta is None or _d0(traj) < delta


def check_stability_envelope(traj, sigma, delta):
    """``d(t0) < delta`` should keep ``d(t) < sigma`` at every sample."""
    name = "stability"
    if len(traj) == 0:
        return _inconclusive(name, "empty trajectory")
    if not _d0(traj) < delta:
        return _inconclusive(name, "d(t0) >= delta", d0=_d0(traj), delta=delta)
    i = int(np.argmax(traj.d))
    details = {"sigma": sigma, "delta": delta, "d0": _d0(traj),
               "max_d": float(traj.d[i]), "time_of_max_d": float(traj.times[i])}
    return _judge(name, traj.times, sigma - traj.d, details, strict=True)


def fitted_decay_rate(times, d):
    """Least-squares rate ``-slope`` of ``log d`` against ``t`` (``inf`` for the null orbit)."""
    times, d = np.asarray(times, float), np.asarray(d, float)
    keep = d > 0
    if keep.sum() < 2:
        return math.inf
    slope = np.polyfit(times[keep], np.log(d[keep]), 1)[0]
    return float(-slope)


def check_exponential_envelope(traj, D, E, delta=None, name="exponential"):
    """``d(t) <= D exp[-E (t - t0)] d(t0)`` at every sample, plus the fitted rate."""
    if len(traj) == 0:
        return _inconclusive(name, "empty trajectory")
    if not _below(traj, delta):
        return _inconclusive(name, "d(t0) >= delta", d0=_d0(traj), delta=delta)
    t0, d0 = traj.times[0], _d0(traj)
    bound = D * np.exp(-E * (traj.times - t0)) * d0
    rate = fitted_decay_rate(traj.times, traj.d)
    details = {"D": D, "E": E, "delta": delta, "d0": d0, "fitted_rate": rate,
               "rate_conservative": bool(rate >= E)}
    return _judge(name, traj.times, bound * (1.0 + ENVELOPE_RTOL) - traj.d, details)


def envelope_bound(traj, D, E):
    """The exponential envelope at the sample times (for the CSV column)."""
    return D * np.exp(-E * (traj.times - traj.times[0])) * _d0(traj)


def check_boundedness(traj, beta, delta=None, s=None, name="boundedness"):
    """``d(t0) < delta`` (and ``t0 >= s`` for eventual statements) should keep ``d < beta``."""
    if len(traj) == 0:
        return _inconclusive(name, "empty trajectory")
    if not _below(traj, delta):
        return _inconclusive(name, "d(t0) >= delta", d0=_d0(traj), delta=delta)
    if s is not None and traj.t0 < s:
        return _inconclusive(name, "t0 precedes the onset time s(delta)", t0=traj.t0, s=s)
    i = int(np.argmax(traj.d))
    details = {"beta": beta, "delta": delta, "s": s, "d0": _d0(traj),
               "max_d": float(traj.d[i]), "time_of_max_d": float(traj.times[i])}
    return _judge(name, traj.times, beta - traj.d, details, strict=True)


def check_attractivity(traj, nu, T, alpha=None, name="attractivity"):
    """``d(t0) < alpha`` should give ``d(t) < nu`` for every ``t >= t0 + T``."""
    if len(traj) == 0:
        return _inconclusive(name, "empty trajectory")
    if not _below(traj, alpha):
        return _inconclusive(name, "d(t0) >= alpha", d0=_d0(traj), alpha=alpha)
    t0 = traj.t0
    if not math.isfinite(T):
        return _inconclusive(name, "no finite attraction time", T=T)
    horizon = float(traj.times[-1]) - t0
    if horizon < T:
        return _inconclusive(name, "horizon shorter than T", T=T, horizon=horizon,
                             required_t_end=t0 + T,
                             hint=f"set the solver end time to at least {t0 + T:.6g}")
    late = traj.times >= t0 + T
    details = {"nu": nu, "T": T, "alpha": alpha, "d0": _d0(traj)}
    return _judge(name, traj.times[late], nu - traj.d[late], details, strict=True)


def check_integral_envelope(traj, h, chi, eta, family, delta=None, name="integral-envelope"):
    """``chi d^2(t) <= h g(t0) d^2(t0) exp[-eta G(t)/h]`` with ``G = int dz/g``.

    This is the decay route available when ``g`` is unbounded.
    """
    if len(traj) == 0:
        return _inconclusive(name, "empty trajectory")
    if not _below(traj, delta):
        return _inconclusive(name, "d(t0) >= delta", d0=_d0(traj), delta=delta)
    bound = integral_envelope_bound(traj, h, chi, eta, family)
    details = {"h": h, "chi": chi, "eta": eta, "delta": delta, "d0": _d0(traj)}
    return _judge(name, traj.times, bound * (1.0 + ENVELOPE_RTOL) - traj.d, details)


def integral_envelope_bound(traj, h, chi, eta, family):
    t = traj.times
    if len(t) < 2:
        G = np.zeros(len(t))
    else:
        G = integrate.cumulative_simpson(1.0 / np.asarray(family.g(t), dtype=float), x=t, initial=0.0)
    g0 = float(family.g(t[0]))
    return np.sqrt(h * g0 / chi * np.exp(-eta * G / h)) * _d0(traj)


def check_decay_inequality(traj, eta, kappa=0.0, atol=DECAY_ATOL, name="decay-inequality"):
    """``dW/dt <= -eta d^2 + atol`` at every sample with ``t >= kappa``."""
    late = traj.times >= kappa
    if not late.any():
        return _inconclusive(name, "no samples after kappa", kappa=kappa)
    margins = -eta * traj.d[late] ** 2 + atol - traj.W_dot[late]
    details = {"eta": eta, "kappa": kappa, "atol": atol, "gamma": traj.params.gamma,
               "theta": traj.params.theta, "functional_a_prime": traj.params.functional_a_prime,
               "violations": int(np.sum(margins < 0))}
    return _judge(name, traj.times[late], margins, details)


def check_wdot_consistency(traj, rtol=WDOT_RTOL, name="wdot-consistency"):
    """Analytic ``dW/dt`` against the finite difference of sampled ``W``."""
    fd = np.asarray(traj.W_dot_fd, dtype=float)
    ok = np.isfinite(fd)
    if not ok.any():
        return _inconclusive(name, "no finite-difference samples")
    an = traj.W_dot[ok]
    rel = np.abs(an - fd[ok]) / np.maximum(np.abs(an), 1e-12)
    details = {"rtol": rtol, "max_relative_error": float(rel.max())}
    return _judge(name, traj.times[ok], rtol - rel, details)


def check_mode_resolution(traj, limit=1e-8, name="mode-resolution"):
    """Energy fraction of the highest retained mode stays below ``limit``."""
    frac = np.asarray(traj.top_mode_fraction, dtype=float)
    details = {"limit": limit, "max_fraction": float(frac.max()) if frac.size else math.nan}
    return _judge(name, traj.times, limit - frac, details)


def overall(reports):
    """Aggregate verdict: any fail, else any inconclusive, else pass."""
    verdicts = [r.verdict for r in reports]
    if FAIL in verdicts:
        return FAIL
    if INCONCLUSIVE in verdicts:
        return INCONCLUSIVE
    return PASS
