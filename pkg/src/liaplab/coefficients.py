"""Problem data: time-dependent coefficients, conservative force and damping.

The declared inf/sup constants on a :class:`CoefficientFamily` are
authoritative. Sampling (:func:`audit_bounds`, :func:`validate_hypotheses`)
only checks that they are not contradicted.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import ConfigurationError, EvaluationError

INF = math.inf

#: slack on sampled strict inequalities
SAMPLE_MARGIN = 1e-9

C_DOT_CLASSES = ("nonpositive", "vanishing", "neither")


# ---------------------------------------------------------------------------
# quadrature helpers

def adaptive_simpson(f, a, b, tol=1e-12, max_depth=50, rtol=1e-14):
    """Integrate ``f`` over ``[a, b]`` by recursive adaptive Simpson.

    Refinement stops once the Richardson correction is below ``tol`` or
    ``rtol`` times the local estimate, whichever is larger.
    """
    if a == b:
        return 0.0

    def simpson(fa, fm, fb, a, b):
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = simpson(fa, flm, fm, a, m)
        right = simpson(fm, frm, fb, m, b)
        delta = left + right - whole
        if depth <= 0 or not math.isfinite(delta) or abs(delta) <= 15.0 * max(tol, rtol * abs(left + right)):
            return left + right + delta / 15.0
        return (recurse(a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + recurse(m, b, fm, frm, fb, right, tol / 2.0, depth - 1))

    fa, fb, fm = f(a), f(b), f(0.5 * (a + b))
    return recurse(a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, max_depth)


def _golden_max(f, lo, hi, tol=1e-10):
    """Maximize a unimodal ``f`` on ``[lo, hi]`` by golden-section search."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd = f(d)
    return max(fc, fd, f(lo), f(hi))


def sampled_slope_envelope(slope, n_samples=257):
    """Build ``m(r) = max{|F_z(z)| : |z| <= r}`` for a user-supplied slope.

    Dense sampling locates the best bracket, golden-section refines it.
    Values are memoized per ``r``.
    """
    absolute = lambda z: abs(float(slope(z)))  # noqa: E731

    @functools.lru_cache(maxsize=4096)
    def envelope(r):
        r = float(r)
        if r <= 0.0:
            return absolute(0.0)
        z = np.linspace(-r, r, n_samples)
        vals = np.abs(np.asarray(slope(z), dtype=float))
        i = int(np.argmax(vals))
        lo, hi = z[max(i - 1, 0)], z[min(i + 1, n_samples - 1)]
        return max(float(vals[i]), _golden_max(absolute, lo, hi))

    return envelope


# ---------------------------------------------------------------------------
# forcing

@dataclass(frozen=True)
class ForcingTerm:
    """Conservative force ``F`` with its slope data.

    ``k`` bounds ``F_z`` on ``|z| < rho``; ``slope_envelope`` is the
    non-decreasing ``m(r)``. The two flags record whether the stronger
    sign conditions on ``int_0^z F`` and ``z F(z)`` hold on ``|z| < rho``.
    """

    eval: Callable
    slope: Callable
    antiderivative: Callable
    k: float
    rho: float
    slope_envelope: Callable
    antiderivative_nonpositive: bool = False
    z_times_F_nonpositive: bool = False
    name: str = "custom"
    params: dict = field(default_factory=dict)

    @property
    def is_zero(self):
        return self.name == "zero"

    def describe(self):
        return {"name": self.name, "k": self.k, "rho": self.rho, **self.params}


def zero_forcing():
    zero = lambda z: np.zeros_like(np.asarray(z, dtype=float))  # noqa: E731
    return ForcingTerm(
        eval=zero, slope=zero, antiderivative=zero, k=0.0, rho=INF,
        slope_envelope=lambda r: 0.0,
        antiderivative_nonpositive=True, z_times_F_nonpositive=True,
        name="zero",
    )


def sine_forcing(b=1.0, omega=1.0):
    """``F(z) = b sin(omega z)``, the perturbed sine-Gordon force (k = b omega)."""
    if b < 0 or omega <= 0:
        raise ConfigurationError("sine forcing needs b >= 0 and omega > 0")
    k = b * omega
    return ForcingTerm(
        eval=lambda z: b * np.sin(omega * np.asarray(z, dtype=float)),
        slope=lambda z: k * np.cos(omega * np.asarray(z, dtype=float)),
        # 1 - cos written as 2 sin^2 to keep precision at small amplitude
        antiderivative=lambda z: (2.0 * b / omega) * np.sin(0.5 * omega * np.asarray(z, dtype=float)) ** 2,
        k=k, rho=INF,
        slope_envelope=lambda r: k,
        name="sine", params={"b": b, "omega": omega},
    )


def restoring_power_forcing(b=1.0, q=1.0):
    """``F(z) = -b |z|^q z``; k = 0 and both sign conditions hold on all of R."""
    if b <= 0 or q < 0:
        raise ConfigurationError("restoring power forcing needs b > 0 and q >= 0")

    def F(z):
        z = np.asarray(z, dtype=float)
        return -b * np.abs(z) ** q * z

    return ForcingTerm(
        eval=F,
        slope=lambda z: -b * (q + 1.0) * np.abs(np.asarray(z, dtype=float)) ** q,
        antiderivative=lambda z: -b * np.abs(np.asarray(z, dtype=float)) ** (q + 2.0) / (q + 2.0),
        k=0.0, rho=INF,
        slope_envelope=lambda r: b * (q + 1.0) * float(r) ** q,
        antiderivative_nonpositive=True, z_times_F_nonpositive=True,
        name="restoring_power", params={"b": b, "q": q},
    )


def repulsive_power_forcing(b=1.0, q=1.0, rho=1.0):
    """``F(z) = +b |z|^q z``; only usable on a finite radius, k = b(q+1) rho^q."""
    if b <= 0 or q < 0:
        raise ConfigurationError("repulsive power forcing needs b > 0 and q >= 0")
    if not (0 < rho < INF):
        raise ConfigurationError("repulsive power forcing needs a finite rho > 0")

    def F(z):
        z = np.asarray(z, dtype=float)
        return b * np.abs(z) ** q * z

    return ForcingTerm(
        eval=F,
        slope=lambda z: b * (q + 1.0) * np.abs(np.asarray(z, dtype=float)) ** q,
        antiderivative=lambda z: b * np.abs(np.asarray(z, dtype=float)) ** (q + 2.0) / (q + 2.0),
        k=b * (q + 1.0) * rho ** q, rho=rho,
        slope_envelope=lambda r: b * (q + 1.0) * float(r) ** q,
        name="repulsive_power", params={"b": b, "q": q},
    )


def custom_forcing(F, F_z, k, rho=INF, antiderivative=None, slope_envelope=None,
                   antiderivative_nonpositive=False, z_times_F_nonpositive=False):
    """Wrap a user force. Missing pieces fall back to numerical constructions."""
    if antiderivative is None:
        scalar = lambda z: adaptive_simpson(lambda s: float(F(s)), 0.0, float(z))  # noqa: E731
        vec = np.vectorize(scalar, otypes=[float])
        antiderivative = lambda z: vec(np.asarray(z, dtype=float))  # noqa: E731
    if slope_envelope is None:
        slope_envelope = sampled_slope_envelope(F_z)
    return ForcingTerm(
        eval=F, slope=F_z, antiderivative=antiderivative, k=float(k), rho=float(rho),
        slope_envelope=slope_envelope,
        antiderivative_nonpositive=antiderivative_nonpositive,
        z_times_F_nonpositive=z_times_F_nonpositive,
    )


# ---------------------------------------------------------------------------
# damping

@dataclass(frozen=True)
class DampingTerm:
    """Linear damping ``a'`` plus nonlinear damping ``a >= 0`` with ``a <= A d^tau``.

    ``a_eval(x, t, u, u_x, u_t, u_xx, d)`` receives grid arrays and the
    current norm ``d``.
    """

    a_prime: float
    a_eval: Callable
    A: float = 0.0
    tau: float = 0.0
    name: str = "custom"

    @property
    def is_zero(self):
        return self.name == "none"

    def describe(self):
        return {"name": self.name, "a_prime": self.a_prime, "A": self.A, "tau": self.tau}


def _check_damping(a_prime, A, tau):
    if a_prime < 0 or A < 0 or tau < 0:
        raise ConfigurationError("damping constants a_prime, A, tau must be nonnegative")


def no_damping(a_prime=0.0):
    _check_damping(a_prime, 0.0, 0.0)
    return DampingTerm(a_prime, lambda x, t, u, u_x, u_t, u_xx, d: np.zeros_like(u),
                       0.0, 0.0, "none")


def constant_damping(a_prime=0.0, A=1.0):
    _check_damping(a_prime, A, 0.0)
    return DampingTerm(a_prime, lambda x, t, u, u_x, u_t, u_xx, d: np.full_like(u, A),
                       A, 0.0, "constant")


def abs_u_damping(a_prime=0.0, A=1.0):
    """``a = A |u|``; admissible with tau = 1 since ``|u| <= d``."""
    _check_damping(a_prime, A, 1.0)
    return DampingTerm(a_prime, lambda x, t, u, u_x, u_t, u_xx, d: A * np.abs(u),
                       A, 1.0, "abs_u")


def norm_power_damping(a_prime=0.0, A=1.0, tau=0.5):
    """``a = A d^tau``, uniform in x."""
    _check_damping(a_prime, A, tau)
    return DampingTerm(a_prime, lambda x, t, u, u_x, u_t, u_xx, d: np.full_like(u, A * d ** tau),
                       A, tau, "norm_power")


# ---------------------------------------------------------------------------
# coefficient families

@dataclass(frozen=True)
class CoefficientFamily:
    """Coefficients ``eps(t)``, ``C(t)`` with derivatives and declared bounds.

    Bounds follow the overline convention: ``*_inf`` is an infimum,
    ``*_sup`` a supremum over ``t > 0``. ``None`` means undeclared.
    """

    eps: Callable
    eps_dot: Callable
    eps_ddot: Callable
    C: Callable
    C_dot: Callable
    eps_inf: Optional[float] = None
    eps_sup: Optional[float] = None
    eps_dot_inf: Optional[float] = None
    eps_dot_sup: Optional[float] = None
    eps_ddot_inf: Optional[float] = None
    C_inf: Optional[float] = None
    mu: Optional[float] = None
    g_sup: Optional[float] = None
    C_dot_class: str = "neither"
    g_reciprocal_integral_diverges: bool = False
    name: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.C_dot_class not in C_DOT_CLASSES:
            raise ConfigurationError(f"C_dot_class must be one of {C_DOT_CLASSES}")

    def g(self, t):
        """``g(t) = C(t) - eps_dot(t)/2 + 1``."""
        return self.C(t) - 0.5 * self.eps_dot(t) + 1.0

    def describe(self):
        keys = ("eps_inf", "eps_sup", "eps_dot_inf", "eps_dot_sup", "eps_ddot_inf",
                "C_inf", "mu", "g_sup")
        out = {"name": self.name, **self.params, "C_dot_class": self.C_dot_class,
               "g_reciprocal_integral_diverges": self.g_reciprocal_integral_diverges}
        out.update({key: getattr(self, key) for key in keys})
        return out


@dataclass(frozen=True)
class Problem:
    family: CoefficientFamily
    forcing: ForcingTerm
    damping: DampingTerm
    name: str = "problem"

    def describe(self):
        return {"name": self.name, "family": self.family.describe(),
                "forcing": self.forcing.describe(), "damping": self.damping.describe()}


def _const(value):
    return lambda t: np.full_like(np.asarray(t, dtype=float), value)


def constant_family(eps0=0.0, C0=1.0, mu=None, **declared):
    """Constant ``eps = eps0``, ``C = C0``. Declared bounds default to the constants."""
    if eps0 < 0 or C0 <= 0:
        raise ConfigurationError("constant family needs eps0 >= 0 and C0 > 0")
    values = dict(eps_inf=eps0, eps_sup=eps0, eps_dot_inf=0.0, eps_dot_sup=0.0,
                  eps_ddot_inf=0.0, C_inf=C0, mu=C0 / (1.0 + eps0) if mu is None else mu,
                  g_sup=C0 + 1.0)
    values.update(declared)
    return CoefficientFamily(
        eps=_const(eps0), eps_dot=_const(0.0), eps_ddot=_const(0.0),
        C=_const(C0), C_dot=_const(0.0),
        C_dot_class="nonpositive", g_reciprocal_integral_diverges=True,
        name="constant", params={"eps0": eps0, "C0": C0}, **values,
    )


@dataclass(frozen=True)
class EpsProfile:
    """A dissipation profile ``eps(t)`` with its closed-form bounds."""

    eps: Callable
    eps_dot: Callable
    eps_ddot: Callable
    eps_inf: float
    eps_sup: float
    eps_dot_inf: float
    eps_dot_sup: float
    eps_ddot_inf: float
    params: dict = field(default_factory=dict)


def periodic_eps(mean=0.5, amp=0.5, freq=1.0):
    """``eps(t) = mean (1 + amp sin(freq t))`` with ``0 <= amp <= 1``."""
    if mean < 0 or not 0 <= amp <= 1 or freq < 0:
        raise ConfigurationError("periodic eps needs mean >= 0, 0 <= amp <= 1, freq >= 0")
    c = mean * amp
    return EpsProfile(
        eps=lambda t: mean * (1.0 + amp * np.sin(freq * np.asarray(t, dtype=float))),
        eps_dot=lambda t: c * freq * np.cos(freq * np.asarray(t, dtype=float)),
        eps_ddot=lambda t: -c * freq ** 2 * np.sin(freq * np.asarray(t, dtype=float)),
        eps_inf=mean * (1.0 - amp), eps_sup=mean * (1.0 + amp),
        eps_dot_inf=-c * freq, eps_dot_sup=c * freq, eps_ddot_inf=-c * freq ** 2,
        params={"eps_mean": mean, "eps_amp": amp, "eps_freq": freq},
    )


def _strict(lhs, rhs, text):
    if not lhs > rhs:
        raise ConfigurationError(f"example precondition violated: {text} ({lhs!r} <= {rhs!r})")


def make_example1(eps0, p, C0, forcing, damping):
    """``eps = eps0 (1+t)^-p``, ``C = C0``: dissipation fading in time."""
    if eps0 < 0 or p < 0:
        raise ConfigurationError("example 1 needs eps0 >= 0 and p >= 0")
    k = forcing.k
    _strict(C0, 4.0 * (1.0 + eps0) * k / (3.0 + eps0), "C0 > 4(1+eps0)k/(3+eps0)")

    def eps(t):
        return eps0 * (1.0 + np.asarray(t, dtype=float)) ** (-p)

    def eps_dot(t):
        return -p * eps0 * (1.0 + np.asarray(t, dtype=float)) ** (-p - 1.0)

    def eps_ddot(t):
        return p * (p + 1.0) * eps0 * (1.0 + np.asarray(t, dtype=float)) ** (-p - 2.0)

    fading = p > 0 and eps0 > 0
    family = CoefficientFamily(
        eps=eps, eps_dot=eps_dot, eps_ddot=eps_ddot, C=_const(C0), C_dot=_const(0.0),
        eps_inf=0.0 if fading else eps0, eps_sup=eps0,
        eps_dot_inf=-p * eps0, eps_dot_sup=0.0, eps_ddot_inf=0.0,
        C_inf=C0, mu=C0 / (1.0 + eps0), g_sup=C0 + p * eps0 + 1.0,
        C_dot_class="nonpositive", g_reciprocal_integral_diverges=True,
        name="example1", params={"eps0": eps0, "p": p, "C0": C0},
    )
    return Problem(family, forcing, damping, name="example1")


def make_example2(eps0, p, C0, q, forcing, damping):
    """``eps = eps0 (1+t)^p``, ``C = C0 (1+t)^q`` with ``1 >= q >= p >= 0``."""
    if not 1.0 >= q >= p >= 0.0:
        raise ConfigurationError(f"example precondition violated: 1 >= q >= p >= 0 (q={q}, p={p})")
    if eps0 < 0:
        raise ConfigurationError("example 2 needs eps0 >= 0")
    k = forcing.k
    _strict(C0, p * eps0, "C0 > p eps0")
    _strict(C0, (4.0 * (1.0 + eps0) * k + 2.0 * p * eps0) / (3.0 + eps0),
            "C0 > [4(1+eps0)k + 2 p eps0]/(3+eps0)")

    def tt(t):
        return 1.0 + np.asarray(t, dtype=float)

    if q == 0:
        C_dot_class = "nonpositive"
    elif q < 1:
        C_dot_class = "vanishing"
    else:
        # q = 1 gives C_dot = C0, which does not vanish
        C_dot_class = "neither"
    if q > 0:
        g_sup = INF
    else:
        g_sup = C0 + 1.0  # eps_dot >= 0 here
    family = CoefficientFamily(
        eps=lambda t: eps0 * tt(t) ** p,
        eps_dot=lambda t: p * eps0 * tt(t) ** (p - 1.0),
        eps_ddot=lambda t: p * (p - 1.0) * eps0 * tt(t) ** (p - 2.0),
        C=lambda t: C0 * tt(t) ** q,
        C_dot=lambda t: q * C0 * tt(t) ** (q - 1.0),
        eps_inf=eps0, eps_sup=INF if (p > 0 and eps0 > 0) else eps0,
        eps_dot_inf=p * eps0 if p >= 1 else 0.0, eps_dot_sup=p * eps0,
        eps_ddot_inf=p * (p - 1.0) * eps0,
        C_inf=C0, mu=(C0 - p * eps0) / (1.0 + eps0), g_sup=g_sup,
        C_dot_class=C_dot_class, g_reciprocal_integral_diverges=True,
        name="example2", params={"eps0": eps0, "p": p, "C0": C0, "q": q},
    )
    return Problem(family, forcing, damping, name="example2")


def make_example3(eps_spec, C0, C1, q, forcing, damping):
    """Bounded ``eps`` (e.g. periodic) and ``C = C0 + C1 (1+t)^-q``."""
    if not C1 > 0 or q < 0:
        raise ConfigurationError("example precondition violated: C1 > 0 and q >= 0")
    k = forcing.k
    es, eds, edi = eps_spec.eps_sup, eps_spec.eps_dot_sup, eps_spec.eps_dot_inf
    _strict(C0, max(0.0, eds, (4.0 * (1.0 + es) * k + 2.0 * eds) / (3.0 + es)),
            "C0 > max{0, sup eps_dot, [4(1+sup eps)k + 2 sup eps_dot]/(3 + sup eps)}")
    if not C0 >= k:
        raise ConfigurationError(f"example precondition violated: C0 >= k ({C0!r} < {k!r})")

    def tt(t):
        return 1.0 + np.asarray(t, dtype=float)

    family = CoefficientFamily(
        eps=eps_spec.eps, eps_dot=eps_spec.eps_dot, eps_ddot=eps_spec.eps_ddot,
        C=lambda t: C0 + C1 * tt(t) ** (-q),
        C_dot=lambda t: -q * C1 * tt(t) ** (-q - 1.0),
        eps_inf=eps_spec.eps_inf, eps_sup=es, eps_dot_inf=edi, eps_dot_sup=eds,
        eps_ddot_inf=eps_spec.eps_ddot_inf,
        C_inf=C0 if q > 0 else C0 + C1, mu=(C0 - eds) / (1.0 + es),
        g_sup=C0 + C1 - edi + 1.0,
        C_dot_class="nonpositive", g_reciprocal_integral_diverges=True,
        name="example3", params={"C0": C0, "C1": C1, "q": q, **eps_spec.params},
    )
    return Problem(family, forcing, damping, name="example3")


# ---------------------------------------------------------------------------
# audits and hypothesis checks

def sample_times(t_max, n_samples):
    """Grid on ``[0, t_max]`` uniform in ``log(1 + t)``."""
    if not t_max > 0 or n_samples < 2:
        raise ConfigurationError("audit needs t_max > 0 and n_samples >= 2")
    return np.expm1(np.linspace(0.0, math.log1p(t_max), n_samples))


def _evaluate(fn, t, label):
    vals = np.broadcast_to(np.asarray(fn(t), dtype=float), t.shape)
    bad = ~np.isfinite(vals)
    if bad.any():
        t_bad = float(t[np.argmax(bad)])
        raise EvaluationError(f"{label}(t) is not finite at t={t_bad!r}", t=t_bad)
    return vals


@dataclass(frozen=True)
class BoundAudit:
    name: str
    kind: str  # "inf" or "sup"
    declared: float
    sampled: float
    n_violations: int
    first_violation_t: Optional[float]

    @property
    def violated(self):
        return self.n_violations > 0


@dataclass(frozen=True)
class AuditReport:
    t_max: float
    n_samples: int
    entries: tuple

    @property
    def violations(self):
        return [e for e in self.entries if e.violated]

    @property
    def ok(self):
        return not self.violations

    def __getitem__(self, name):
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)


def audit_bounds(family, t_max=1e4, n_samples=10_000, tol=SAMPLE_MARGIN):
    """Check declared inf/sup values of ``family`` against samples on ``[0, t_max]``."""
    t = sample_times(t_max, n_samples)
    series = {
        "eps": _evaluate(family.eps, t, "eps"),
        "eps_dot": _evaluate(family.eps_dot, t, "eps_dot"),
        "eps_ddot": _evaluate(family.eps_ddot, t, "eps_ddot"),
        "C": _evaluate(family.C, t, "C"),
        "C_dot": _evaluate(family.C_dot, t, "C_dot"),
    }
    series["g"] = series["C"] - 0.5 * series["eps_dot"] + 1.0
    checks = [
        ("eps_inf", "eps", "inf"), ("eps_sup", "eps", "sup"),
        ("eps_dot_inf", "eps_dot", "inf"), ("eps_dot_sup", "eps_dot", "sup"),
        ("eps_ddot_inf", "eps_ddot", "inf"), ("C_inf", "C", "inf"), ("g_sup", "g", "sup"),
    ]
    entries = []
    for name, key, kind in checks:
        declared = getattr(family, name)
        if declared is None:
            continue
        vals = series[key]
        slack = tol * max(1.0, abs(declared)) if math.isfinite(declared) else 0.0
        if kind == "inf":
            bad = vals < declared - slack
            sampled = float(vals.min())
        else:
            bad = vals > declared + slack
            sampled = float(vals.max())
        entries.append(BoundAudit(name, kind, float(declared), sampled, int(bad.sum()),
                                  float(t[np.argmax(bad)]) if bad.any() else None))
    if family.C_dot_class == "nonpositive":
        vals = series["C_dot"]
        bad = vals > tol
        entries.append(BoundAudit("C_dot_nonpositive", "sup", 0.0, float(vals.max()),
                                  int(bad.sum()), float(t[np.argmax(bad)]) if bad.any() else None))
    return AuditReport(float(t_max), int(n_samples), tuple(entries))


@dataclass(frozen=True)
class HypothesisCheck:
    name: str
    status: str  # "pass", "fail" or "skipped"
    detail: str = ""

    @property
    def passed(self):
        return self.status != "fail"


@dataclass(frozen=True)
class HypothesisReport:
    checks: tuple

    @property
    def ok(self):
        return all(c.passed for c in self.checks)

    @property
    def failed(self):
        return [c.name for c in self.checks if not c.passed]

    def __getitem__(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self):
        return {c.name: {"status": c.status, "detail": c.detail} for c in self.checks}


def _require(obj, names):
    for name in names:
        if getattr(obj, name) is None:
            raise ConfigurationError(f"missing declared bound: {name}")


def _status(ok):
    return "pass" if ok else "fail"


def validate_hypotheses(family, forcing, damping, t_max=1e4, n_samples=2001,
                        n_states=64, n_modes=16, seed=0):
    """Check the standing hypotheses on ``F``, ``eps``, ``C`` and ``a``.

    Declared constants are compared exactly; pointwise conditions are
    sampled with slack :data:`SAMPLE_MARGIN`.
    """
    from .field import SineGrid, eval_norm_d, random_state

    _require(family, ("C_inf", "mu", "eps_inf", "eps_ddot_inf"))
    k, C_inf, mu = forcing.k, family.C_inf, family.mu
    a_prime, eps_inf = damping.a_prime, family.eps_inf
    checks = []

    checks.append(HypothesisCheck("C_inf_positive", _status(C_inf > 0), f"C_inf={C_inf!r}"))
    checks.append(HypothesisCheck("C_inf_ge_k", _status(C_inf >= k), f"C_inf={C_inf!r}, k={k!r}"))

    t = sample_times(t_max, n_samples)
    eps_t = _evaluate(family.eps, t, "eps")
    C_t = _evaluate(family.C, t, "C")
    lhs = C_t - _evaluate(family.eps_dot, t, "eps_dot")
    rhs = mu * (1.0 + eps_t)
    gap = float(np.min(lhs - rhs))
    checks.append(HypothesisCheck("C_minus_eps_dot_ge_mu", _status(gap >= -SAMPLE_MARGIN),
                                  f"min[C - eps_dot - mu(1+eps)]={gap:.6g} (mu={mu!r})"))
    checks.append(HypothesisCheck("eps_nonnegative", _status(eps_t.min() >= -SAMPLE_MARGIN),
                                  f"min eps={eps_t.min():.6g}"))
    checks.append(HypothesisCheck("C_ge_C_inf", _status(C_t.min() >= C_inf - SAMPLE_MARGIN),
                                  f"min C={C_t.min():.6g}"))

    margin3 = mu + C_inf / 2.0 - 2.0 * k
    replaced = forcing.antiderivative_nonpositive or forcing.z_times_F_nonpositive
    if margin3 > 0:
        status = "pass"
    else:
        status = "skipped" if replaced else "fail"
    checks.append(HypothesisCheck("mu_plus_half_C_minus_2k_positive", status,
                                  f"mu + C_inf/2 - 2k = {margin3!r}"))
    checks.append(HypothesisCheck("eps_ddot_inf_finite",
                                  _status(family.eps_ddot_inf > -INF),
                                  f"eps_ddot_inf={family.eps_ddot_inf!r}"))
    checks.append(HypothesisCheck("a_prime_plus_half_eps_inf_positive",
                                  _status(a_prime + eps_inf / 2.0 > 0),
                                  f"a' + eps_inf/2 = {a_prime + eps_inf / 2.0!r}"))

    # 0 <= a <= A d^tau on random states
    rng = np.random.default_rng(seed)
    grid = SineGrid(n_modes)
    worst_low, worst_high = INF, -INF
    for i in range(n_states):
        ti = float(t[rng.integers(len(t))])
        e = float(family.eps(ti))
        state = random_state(n_modes, rng, eps=e, d=float(rng.uniform(0.0, 2.0)), t=ti)
        d = eval_norm_d(state, e)
        f = grid.fields(state)
        a = np.asarray(damping.a_eval(grid.x, ti, f["u"], f["u_x"], f["u_t"], f["u_xx"], d),
                       dtype=float)
        worst_low = min(worst_low, float(a.min()))
        env = damping.A * d ** damping.tau
        worst_high = max(worst_high, float((a - env).max()))
    ok = worst_low >= -SAMPLE_MARGIN and worst_high <= SAMPLE_MARGIN
    checks.append(HypothesisCheck("a_between_0_and_A_d_tau", _status(ok),
                                  f"min a={worst_low:.3g}, max(a - A d^tau)={worst_high:.3g}"))

    F0 = float(forcing.eval(np.array([0.0]))[0])
    checks.append(HypothesisCheck("F_zero_at_zero", _status(abs(F0) <= 1e-12), f"F(0)={F0!r}"))
    zmax = min(forcing.rho, 10.0) * (1.0 - 1e-9)
    z = np.linspace(-zmax, zmax, 4001)
    excess = float(np.max(np.asarray(forcing.slope(z), dtype=float) - k))
    checks.append(HypothesisCheck("F_slope_le_k", _status(excess <= SAMPLE_MARGIN),
                                  f"max(F_z - k) on |z|<{zmax:.3g} = {excess:.3g}"))
    return HypothesisReport(tuple(checks))
