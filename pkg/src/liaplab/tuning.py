"""Certificate constants and the theorem decision tree.

Every constant the stability proofs construct is computed here from the
declared problem data, and :func:`certify` assembles them into a
:class:`StabilityCertificate`.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Optional

import numpy as np
from scipy import integrate, optimize

from .coefficients import INF, validate_hypotheses
from .errors import CertificateError, ConfigurationError, DomainError, HypothesisError
from .liapunov import eval_B, eval_g, eval_m, invert_B

VERDICTS = (
    "stable",
    "uniformly-stable",
    "asymptotically-stable",
    "uniformly-exponential-asymptotically-stable",
    "uniformly-bounded",
    "eventually-uniformly-bounded",
    "bounded",
    "exponential-asymptotically-stable-in-the-large",
    "eventually-exponential-asymptotically-stable-in-the-large",
    "asymptotically-stable-in-the-large",
)

# verdict -> weaker verdicts it implies
IMPLIES = {
    "uniformly-stable": ("stable",),
    "asymptotically-stable": ("stable",),
    "uniformly-exponential-asymptotically-stable": ("asymptotically-stable", "stable"),
    "uniformly-bounded": ("eventually-uniformly-bounded", "bounded"),
    "exponential-asymptotically-stable-in-the-large": (
        "eventually-exponential-asymptotically-stable-in-the-large",
        "asymptotically-stable-in-the-large"),
}


def _finite(x):
    return x is not None and math.isfinite(x)


# ---------------------------------------------------------------------------
# theta, gamma, chi, eta

class ThetaChoice(NamedTuple):
    theta1: float
    theta2: float
    theta: float
    k_effective: float
    k_lower: float


def compute_theta(problem, margin=0.01):
    """Thresholds ``theta1 <= theta2`` and the chosen ``theta > theta2``."""
    if not margin > 0:
        raise ConfigurationError("margin must be positive")
    fam, forcing, ap = problem.family, problem.forcing, problem.damping.a_prime
    mu, C_inf, eps_inf, eps_ddot_inf = fam.mu, fam.C_inf, fam.eps_inf, fam.eps_ddot_inf
    k = forcing.k
    k_eff = 0.0 if (forcing.antiderivative_nonpositive or forcing.z_times_F_nonpositive) else k
    k_low = 0.0 if forcing.antiderivative_nonpositive else k
    denom = mu + C_inf / 2.0 - 2.0 * k_eff
    if not denom > 0:
        raise HypothesisError(f"mu + C_inf/2 - 2k = {denom!r} must be positive")
    if not math.isfinite(eps_ddot_inf):
        raise HypothesisError("eps_ddot_inf must be finite")
    theta1 = max(2.0 * ap, 2.0 * k_eff / mu - ap,
                 (5.0 - eps_ddot_inf - ap * (mu - C_inf)) / denom)
    lower_denom = ap + eps_inf / 2.0
    if not lower_denom > 0:
        raise HypothesisError("a' + eps_inf/2 must be positive")
    theta2 = max(theta1, (k_low + 1.25) / lower_denom)
    theta = (1.0 + margin) * theta2 if theta2 > 0 else margin
    return ThetaChoice(theta1, theta2, theta, k_eff, k_low)


class GammaChoice(NamedTuple):
    gamma31: float
    gamma32: float
    gamma3: float
    gamma1: float
    gamma2: float


def compute_gamma3(sigma, theta, problem):
    """``gamma3(sigma) = gamma31 + gamma32 sigma^(2 tau)``, with gamma1, gamma2 for reference."""
    if sigma < 0:
        raise DomainError("sigma must be nonnegative")
    fam, damp = problem.family, problem.damping
    ap, A, tau = damp.a_prime, damp.A, damp.tau
    mu, C_inf, eps_inf = fam.mu, fam.C_inf, fam.eps_inf
    base = ap + eps_inf
    if not base > 0:
        raise HypothesisError("a' + eps_inf must be positive")
    gamma32 = A ** 2 * (1.0 / mu + theta / C_inf) / base
    growth = gamma32 * sigma ** (2.0 * tau)
    gamma1 = (1.0 + theta) / base + growth
    gamma2 = gamma1 + theta ** 2 + 1.0
    gamma31 = (1.0 + theta) / base + theta ** 2 + 2.0 + (ap + theta) / mu + (ap + 1.0) * theta
    return GammaChoice(gamma31, gamma32, gamma31 + growth, gamma1, gamma2)


def compute_chi_eta(theta, gamma, problem, k_lower=None):
    """Lower-bound constant ``chi`` (never above 1/4) and decay rate ``eta``."""
    fam, ap = problem.family, problem.damping.a_prime
    if k_lower is None:
        k_lower = 0.0 if problem.forcing.antiderivative_nonpositive else problem.forcing.k
    second = (fam.C_inf - k_lower) * gamma + fam.mu + (fam.mu + ap + theta / 2.0) * fam.eps_inf
    chi = 0.5 * min(0.5, second)
    eta = min(1.0, 0.75 * fam.mu)
    return chi, eta


# ---------------------------------------------------------------------------
# r(sigma) and its inverse

@dataclass(frozen=True)
class RMap:
    """``r(sigma) = sigma / sqrt(1 + gamma31 + gamma32 sigma^(2 tau))`` on ``[0, sigma_M)``."""

    gamma31: float
    gamma32: float
    tau: float
    sigma_M: float
    r_M: float

    @property
    def constant_gamma(self):
        return self.gamma32 == 0.0 or self.tau == 0.0

    def __call__(self, sigma):
        if sigma < 0:
            raise DomainError("r(sigma) needs sigma >= 0")
        if math.isinf(sigma):
            return self.r_M
        return sigma / math.sqrt(1.0 + self.gamma31 + self.gamma32 * sigma ** (2.0 * self.tau))

    def inverse(self, y):
        if y < 0:
            raise DomainError("r^-1 needs y >= 0")
        if y == 0:
            return 0.0
        if y >= self.r_M:
            raise DomainError(f"r^-1 defined only below r_M = {self.r_M!r}")
        if self.constant_gamma:
            return y * math.sqrt(1.0 + self.gamma31 + (self.gamma32 if self.tau == 0 else 0.0))
        hi = self.sigma_M if math.isfinite(self.sigma_M) else max(y, 1.0)
        if math.isinf(self.sigma_M):
            while self(hi) < y:
                hi *= 2.0
        f = lambda s: self(s) - y  # noqa: E731
        return optimize.brentq(f, 0.0, hi, xtol=1e-15 * hi, rtol=4 * np.finfo(float).eps, maxiter=500)


def compute_r_sigmaM(theta, gamma31, gamma32, tau):
    """Build ``r``, its supremum point ``sigma_M`` and range bound ``r_M``."""
    if gamma32 == 0.0 or tau < 1.0:
        sigma_M, r_M = INF, INF
    elif tau == 1.0:
        sigma_M, r_M = INF, 1.0 / math.sqrt(gamma32)
    else:
        sigma_M = ((1.0 + gamma31) / (gamma32 * (tau - 1.0))) ** (1.0 / (2.0 * tau))
        r_M = (((tau - 1.0) / (1.0 + gamma31)) ** ((tau - 1.0) / (2.0 * tau))
               / (math.sqrt(tau) * gamma32 ** (1.0 / (2.0 * tau))))
    return RMap(gamma31, gamma32, tau, sigma_M, r_M)


# ---------------------------------------------------------------------------
# t_bar

def compute_t_bar(gamma, family, horizon=1e6, n_scan=4096):
    """Last time at which ``C_dot(t) (1 + gamma) >= 1``; 0 when ``C_dot <= 0``."""
    if family.C_dot_class == "nonpositive":
        return 0.0
    if family.C_dot_class != "vanishing":
        raise HypothesisError("t_bar needs C_dot <= 0 or C_dot -> 0")
    f = lambda t: float(family.C_dot(t)) * (1.0 + gamma) - 1.0  # noqa: E731
    t = np.expm1(np.linspace(0.0, math.log1p(horizon), n_scan))
    vals = np.asarray(family.C_dot(t), dtype=float) * (1.0 + gamma) - 1.0
    above = np.nonzero(vals >= 0.0)[0]
    if above.size == 0:
        return 0.0
    i = int(above[-1])
    if i == n_scan - 1:
        raise CertificateError(f"C_dot (1+gamma) >= 1 still at t={horizon:g}: increase horizon")
    if vals[i] == 0.0:
        return float(t[i])
    return optimize.brentq(f, t[i], t[i + 1], xtol=1e-12 * max(1.0, t[i + 1]), rtol=1e-15)


# ---------------------------------------------------------------------------
# the assembled tuning

@dataclass(frozen=True)
class TuningParameters:
    theta: float
    theta1: float
    theta2: float
    gamma31: float
    gamma32: float
    k_effective: float
    k_lower: float
    eta: float
    chi: float
    tau: float
    rmap: RMap
    xi: float
    kappa: Optional[float]
    h_xi: float
    D: Optional[float] = None
    E: Optional[float] = None
    delta_exp: Optional[float] = None
    margin: float = 0.01
    t_bar_horizon: float = 1e6

    @property
    def sigma_M(self):
        return self.rmap.sigma_M

    @property
    def r_M(self):
        return self.rmap.r_M

    def gamma3(self, sigma):
        return self.gamma31 + self.gamma32 * sigma ** (2.0 * self.tau)

    def r(self, sigma):
        return self.rmap(sigma)

    def r_inv(self, y):
        return self.rmap.inverse(y)

    def to_dict(self):
        keys = ("theta", "theta1", "theta2", "gamma31", "gamma32", "k_effective", "k_lower",
                "eta", "chi", "tau", "xi", "kappa", "h_xi", "D", "E", "delta_exp", "margin")
        out = {key: getattr(self, key) for key in keys}
        out.update(sigma_M=self.sigma_M, r_M=self.r_M)
        return out


def effective_tau(problem):
    """``tau`` of the damping bound; irrelevant (taken as 0) when ``A = 0``."""
    damp = problem.damping
    return 0.0 if damp.A == 0.0 else damp.tau


def tune(problem, margin=0.01, xi=None, t_bar_horizon=1e6):
    """Compute theta, gamma31/32, chi, eta, r, xi, kappa and the uniform decay constants."""
    th = compute_theta(problem, margin)
    gm = compute_gamma3(0.0, th.theta, problem)
    tau = effective_tau(problem)
    # chi grows with gamma, so its value at gamma31 is valid for every sigma
    chi, eta = compute_chi_eta(th.theta, gm.gamma31, problem, k_lower=th.k_lower)
    rmap = compute_r_sigmaM(th.theta, gm.gamma31, gm.gamma32, tau)
    cap = min(rmap.sigma_M, problem.forcing.rho)
    if xi is None:
        xi = cap if math.isfinite(cap) else 1.0
    elif not 0 < xi <= cap:
        raise ConfigurationError(f"xi must lie in (0, {cap!r}]")
    gamma_xi = gm.gamma31 + gm.gamma32 * xi ** (2.0 * tau)
    kappa = None
    if problem.family.C_dot_class != "neither":
        kappa = compute_t_bar(gamma_xi, problem.family, t_bar_horizon)
    h_xi = (1.0 + gamma_xi) * (1.0 + eval_m(xi, problem.forcing))
    tuning = TuningParameters(
        theta=th.theta, theta1=th.theta1, theta2=th.theta2,
        gamma31=gm.gamma31, gamma32=gm.gamma32, k_effective=th.k_effective, k_lower=th.k_lower,
        eta=eta, chi=chi, tau=tau, rmap=rmap, xi=xi, kappa=kappa, h_xi=h_xi,
        margin=margin, t_bar_horizon=t_bar_horizon,
    )
    decay = compute_decay_constants(xi, tuning, problem)
    if decay is not None:
        tuning = replace(tuning, delta_exp=decay[0], D=decay[1], E=decay[2])
    return tuning


# ---------------------------------------------------------------------------
# stability thresholds

def compute_delta(sigma, t0, tuning, problem):
    """Stability threshold ``delta(sigma, t0)`` in ``(0, sigma)``."""
    if not 0 < sigma < tuning.xi:
        raise DomainError(f"sigma must lie in (0, xi={tuning.xi!r})")
    if tuning.kappa is None:
        raise HypothesisError("no kappa: C_dot is neither nonpositive nor vanishing")
    if t0 < tuning.kappa:
        raise DomainError(f"t0={t0!r} precedes kappa={tuning.kappa!r}")
    y = tuning.r(sigma) * math.sqrt(tuning.chi) / math.sqrt(eval_g(t0, problem.family))
    return invert_B(y, problem.forcing)


def compute_delta_uniform(sigma, tuning, problem):
    """``t0``-independent threshold using ``g_sup``; needs a finite ``g_sup``."""
    g_sup = problem.family.g_sup
    if not _finite(g_sup):
        raise CertificateError("uniform threshold needs a finite g_sup")
    if not 0 < sigma < tuning.xi:
        raise DomainError(f"sigma must lie in (0, xi={tuning.xi!r})")
    return invert_B(tuning.r(sigma) * math.sqrt(tuning.chi) / math.sqrt(g_sup), problem.forcing)


def compute_decay_constants(xi, tuning, problem):
    """``(delta, D, E)`` for the uniform exponential bound, or ``None`` if ``g_sup`` is infinite."""
    g_sup = problem.family.g_sup
    if not _finite(g_sup):
        return None
    h = (1.0 + tuning.gamma3(xi)) * (1.0 + eval_m(xi, problem.forcing))
    delta = invert_B(tuning.r(xi) * math.sqrt(tuning.chi) / math.sqrt(g_sup), problem.forcing)
    D = math.sqrt(h * g_sup / tuning.chi)
    E = tuning.eta / (2.0 * h * g_sup)
    return delta, D, E


class BetaChoice(NamedTuple):
    beta: float
    delta_M: float
    s: float
    h: float
    D: float
    E: float


def compute_delta_M(tuning, problem):
    g_sup = problem.family.g_sup
    if math.isinf(tuning.r_M):
        return INF
    return invert_B(tuning.r_M * math.sqrt(tuning.chi) / math.sqrt(g_sup), problem.forcing)


def compute_beta_s(delta, tuning, problem):
    """Boundedness radius ``beta(delta) > delta``, onset time ``s(delta)`` and the
    in-the-large exponential constants built on ``h(delta)``.

    ``h(delta)`` is taken as ``[1 + gamma3(beta)][1 + m(beta)]`` with
    ``beta = beta(delta)``, the analogue of ``h(xi)``.
    """
    g_sup = problem.family.g_sup
    if not _finite(g_sup):
        raise CertificateError("beta(delta) needs a finite g_sup")
    if not delta > 0:
        raise DomainError("delta must be positive")
    delta_M = compute_delta_M(tuning, problem)
    if delta >= delta_M:
        raise DomainError(f"delta must be below delta_M = {delta_M!r}")
    beta = tuning.r_inv(math.sqrt(g_sup) * eval_B(delta, problem.forcing) / math.sqrt(tuning.chi))
    gamma_beta = tuning.gamma3(beta)
    s = compute_t_bar(gamma_beta, problem.family, tuning.t_bar_horizon)
    h = (1.0 + gamma_beta) * (1.0 + eval_m(beta, problem.forcing))
    D = math.sqrt(h * g_sup / tuning.chi)
    E = tuning.eta / (2.0 * h * g_sup)
    return BetaChoice(beta, delta_M, s, h, D, E)


def reciprocal_g_integral(t0, t, family):
    """``G(t) = int_t0^t dz / g(z)``."""
    if t <= t0:
        return 0.0
    val, _ = integrate.quad(lambda z: 1.0 / float(family.g(z)), t0, t, limit=400,
                            epsabs=0.0, epsrel=1e-12)
    return val


class TChoice(NamedTuple):
    T: float
    beta_tilde: float
    h_tilde: float
    G_target: float
    gamma: float


def compute_T(alpha, nu, t0, tuning, problem, horizon=1e12):
    """Attractivity time ``T(alpha, nu, t0)`` for the in-the-large statement."""
    if not (alpha > 0 and nu > 0):
        raise DomainError("alpha and nu must be positive")
    if tuning.tau != 0.0:
        raise HypothesisError("T(alpha, nu, t0) needs tau = 0")
    if math.isfinite(problem.forcing.rho):
        raise HypothesisError("T(alpha, nu, t0) needs rho = infinity")
    if not problem.family.g_reciprocal_integral_diverges:
        raise HypothesisError("T(alpha, nu, t0) needs a divergent integral of 1/g")
    if tuning.kappa is None or t0 < tuning.kappa:
        raise DomainError(f"t0={t0!r} precedes kappa={tuning.kappa!r}")
    fam, forcing = problem.family, problem.forcing
    gamma = tuning.gamma3(1.0)
    beta_tilde = eval_B(alpha, forcing) * math.sqrt(eval_g(t0, fam) * (1.0 + gamma)) / math.sqrt(tuning.chi)
    h_tilde = (1.0 + gamma) * (1.0 + eval_m(beta_tilde, forcing))
    nu0 = min(nu, alpha)
    target = -(h_tilde / tuning.eta) * math.log(tuning.chi * nu0 ** 2 / (h_tilde * alpha ** 2))

    # march G over geometrically growing segments until it passes the target
    lo, G_lo, width = t0, 0.0, 1.0
    while True:
        hi = lo + width
        if hi - t0 > horizon:
            raise CertificateError(f"G(t) stays below {target!r} up to t0 + {horizon:g}")
        G_hi = G_lo + reciprocal_g_integral(lo, hi, fam)
        if G_hi >= target:
            break
        lo, G_lo, width = hi, G_hi, width * 2.0
    f = lambda t: G_lo + reciprocal_g_integral(lo, t, fam) - target  # noqa: E731
    t_star = optimize.brentq(f, lo, hi, xtol=1e-12 * max(1.0, hi), rtol=1e-15)
    return TChoice(t_star - t0, beta_tilde, h_tilde, target, gamma)


# ---------------------------------------------------------------------------
# certificate

@dataclass(frozen=True)
class CertifyConfig:
    margin: float = 0.01
    xi: Optional[float] = None
    sigma: float = 0.5
    t0: Optional[float] = None
    delta: Optional[float] = None
    alpha: Optional[float] = None
    nu: Optional[float] = None
    t_bar_horizon: float = 1e6
    T_horizon: float = 1e12
    audit_t_max: float = 1e4
    seed: int = 0


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.floating, np.integer)):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return "inf" if value > 0 else ("-inf" if value < 0 else "nan")
    return value


def dumps(obj):
    """Deterministic JSON (sorted keys, non-finite floats as strings)."""
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n"


@dataclass(frozen=True)
class StabilityCertificate:
    problem: dict
    verdicts: tuple
    theorems: dict
    hypotheses: dict
    constants: dict
    tuning: Optional[TuningParameters] = None
    implied: tuple = ()
    failed_hypotheses: tuple = ()
    notes: tuple = ()
    hypothesis_report: dict = field(default_factory=dict)

    def __contains__(self, verdict):
        return verdict in self.implied

    def to_dict(self):
        return {
            "problem": self.problem,
            "verdicts": list(self.verdicts),
            "implied": list(self.implied),
            "theorems": self.theorems,
            "hypotheses": self.hypotheses,
            "constants": self.constants,
            "tuning": self.tuning.to_dict() if self.tuning is not None else None,
            "failed_hypotheses": list(self.failed_hypotheses),
            "notes": list(self.notes),
            "hypothesis_report": self.hypothesis_report,
        }

    def to_json(self):
        return dumps(self.to_dict())


def reduce_verdicts(verdicts):
    """Drop verdicts implied by stronger ones in the set."""
    implied = set()
    for v in verdicts:
        implied.update(IMPLIES.get(v, ()))
    return tuple(v for v in VERDICTS if v in verdicts and v not in implied)


def _closure(verdicts):
    out = set(verdicts)
    for v in verdicts:
        out.update(IMPLIES.get(v, ()))
    return tuple(v for v in VERDICTS if v in out)


def certify(problem, config=None):
    """Decide which stability statements the theorems deliver for ``problem``."""
    config = config or CertifyConfig()
    fam, forcing = problem.family, problem.forcing
    report = validate_hypotheses(fam, forcing, problem.damping, t_max=config.audit_t_max,
                                 seed=config.seed)
    base = dict(problem=problem.describe(), hypothesis_report=report.to_dict())
    if not report.ok:
        return StabilityCertificate(verdicts=(), theorems={}, hypotheses={}, constants={},
                                    failed_hypotheses=tuple(report.failed), **base)
    try:
        tuning = tune(problem, config.margin, config.xi, config.t_bar_horizon)
    except (HypothesisError, CertificateError) as exc:
        return StabilityCertificate(verdicts=(), theorems={}, hypotheses={}, constants={},
                                    failed_hypotheses=(str(exc),), **base)

    standing = ["standing_hypotheses"]
    cdot1 = fam.C_dot_class == "nonpositive"
    cdot2 = fam.C_dot_class == "vanishing"
    cdot = "C_dot_nonpositive" if cdot1 else "C_dot_vanishing"
    g_bounded = _finite(fam.g_sup)
    diverges = fam.g_reciprocal_integral_diverges or g_bounded
    rho_inf = math.isinf(forcing.rho)
    tau = tuning.tau

    found, theorems, used, constants, notes, failed = {}, {}, {}, {}, [], []

    def grant(verdict, theorem, hyps):
        found[verdict] = True
        theorems[verdict] = theorem
        used[verdict] = standing + hyps

    if not (cdot1 or cdot2):
        failed.append("C_dot neither nonpositive nor vanishing at infinity")
    else:
        t0 = tuning.kappa if config.t0 is None else max(config.t0, tuning.kappa)
        sigma = config.sigma if config.sigma < tuning.xi else 0.5 * tuning.xi
        th1 = dict(sigma=sigma, t0=t0, xi=tuning.xi, kappa=tuning.kappa,
                   gamma3_sigma=tuning.gamma3(sigma), theta=tuning.theta, chi=tuning.chi,
                   eta=tuning.eta, delta_sigma_t0=compute_delta(sigma, t0, tuning, problem))
        grant("stable", "theorem1", [cdot])
        if g_bounded:
            th1["delta_uniform"] = compute_delta_uniform(sigma, tuning, problem)
            grant("uniformly-stable", "theorem1", [cdot, "g_sup_finite"])
        if diverges:
            th1["delta_t0"] = invert_B(tuning.r(tuning.xi) * math.sqrt(tuning.chi)
                                       / math.sqrt(eval_g(t0, fam)), forcing)
            th1["h_xi"] = tuning.h_xi
            grant("asymptotically-stable", "theorem1", [cdot, "reciprocal_g_integral_diverges"])
        if g_bounded:
            th1.update(delta_exp=tuning.delta_exp, D=tuning.D, E=tuning.E)
            grant("uniformly-exponential-asymptotically-stable", "theorem1", [cdot, "g_sup_finite"])
        constants["theorem1"] = th1

        delta_q = config.delta if config.delta is not None else th1.get("delta_uniform", th1["delta_sigma_t0"])
        if rho_inf and tau < 1.0 and g_bounded:
            bc = compute_beta_s(delta_q, tuning, problem)
            constants["theorem2"] = dict(delta=delta_q, beta=bc.beta, delta_M=bc.delta_M, s=bc.s,
                                         h_delta=bc.h, D_delta=bc.D, E_delta=bc.E,
                                         gamma3_beta=tuning.gamma3(bc.beta))
            hyps = [cdot, "rho_infinite", "tau_below_1", "g_sup_finite"]
            if cdot1:
                grant("uniformly-bounded", "theorem2", hyps)
                grant("exponential-asymptotically-stable-in-the-large", "theorem2", hyps)
            else:
                grant("eventually-uniformly-bounded", "theorem2", hyps)
                grant("eventually-exponential-asymptotically-stable-in-the-large", "theorem2", hyps)
        if rho_inf and tau == 0.0 and diverges:
            alpha = config.alpha if config.alpha is not None else delta_q
            nu = config.nu if config.nu is not None else 0.1 * alpha
            th3 = dict(alpha=alpha, nu=nu, t0=t0)
            try:
                tc = compute_T(alpha, nu, t0, tuning, problem, config.T_horizon)
                th3.update(T=tc.T, beta_tilde=tc.beta_tilde, h_tilde=tc.h_tilde,
                           G_target=tc.G_target, gamma=tc.gamma)
            except CertificateError as exc:
                notes.append(f"T(alpha, nu, t0) not realized: {exc}")
            constants["theorem3"] = th3
            hyps = [cdot, "rho_infinite", "tau_zero", "reciprocal_g_integral_diverges"]
            grant("bounded", "theorem3", hyps)
            grant("asymptotically-stable-in-the-large", "theorem3", hyps)

    verdicts = reduce_verdicts(found)
    return StabilityCertificate(
        verdicts=verdicts, implied=_closure(found),
        theorems={v: theorems[v] for v in found}, hypotheses={v: used[v] for v in found},
        constants=constants, tuning=tuning, failed_hypotheses=tuple(failed), notes=tuple(notes),
        **base,
    )
