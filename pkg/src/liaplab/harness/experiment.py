"""Experiment orchestration: certify, integrate, check envelopes, write artifacts."""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import BlowUpError, ConfigurationError, LiapLabError
from ..field import SpectralState, eval_norm_d
from ..liapunov import LiapunovParams
from ..solver import Trajectory, integrate
from ..tuning import StabilityCertificate, certify, dumps
from . import envelopes as env
from .config import RunConfig

EXIT_PASS, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_ERROR = 0, 1, 2, 3
ERROR = "error"


@dataclass
class Bundle:
    """Everything one run produced; ``paths`` lists the files written."""

    name: str
    verdict: str
    certificate: Optional[StabilityCertificate] = None
    trajectory: Optional[Trajectory] = None
    reports: list = field(default_factory=list)
    children: list = field(default_factory=list)
    paths: dict = field(default_factory=dict)
    info: dict = field(default_factory=dict)

    @property
    def exit_code(self):
        return exit_code(self.verdict)

    def report(self, name):
        for r in self.reports:
            if r.name == name:
                return r
        raise KeyError(name)

    def summary(self):
        info = {k: v for k, v in self.info.items() if not k.startswith("_")}
        out = {"name": self.name, "verdict": self.verdict, **info,
               "checks": {r.name: r.verdict for r in self.reports}}
        if self.certificate is not None:
            out["verdicts"] = list(self.certificate.verdicts)
            out["failed_hypotheses"] = list(self.certificate.failed_hypotheses)
        if self.children:
            out["runs"] = [c.summary() for c in self.children]
        return out


def exit_code(verdict):
    return {env.PASS: EXIT_PASS, env.FAIL: EXIT_FAIL,
            env.INCONCLUSIVE: EXIT_INCONCLUSIVE}.get(verdict, EXIT_ERROR)


def combine(verdicts):
    verdicts = list(verdicts)
    if ERROR in verdicts:
        return ERROR
    if env.FAIL in verdicts:
        return env.FAIL
    if env.INCONCLUSIVE in verdicts:
        return env.INCONCLUSIVE
    return env.PASS


# ---------------------------------------------------------------------------
# initial data

def initial_modes(initial, n_modes, seed):
    """Unscaled ``(u0, u1)`` mode vectors for an ``[initial]`` table."""
    n = np.arange(1, n_modes + 1, dtype=float)
    preset = initial["preset"]
    u, v = np.zeros(n_modes), np.zeros(n_modes)
    if preset == "first-mode":
        u[0] = 1.0
    elif preset == "smooth":
        # geometric spectrum keeps the top-mode energy negligible
        u = 4.0 ** (1.0 - n)
        v = -0.5 * 5.0 ** (1.0 - n)
    elif preset == "random":
        rng = np.random.default_rng(seed)
        u = rng.standard_normal(n_modes) * 4.0 ** (1.0 - n)
        v = rng.standard_normal(n_modes) * 4.0 ** (1.0 - n)
    elif preset == "modes":
        for dst, src in ((u, initial["u_modes"]), (v, initial["v_modes"])):
            src = np.asarray(src or [], dtype=float).ravel()
            if src.size > n_modes:
                raise ConfigurationError(f"{src.size} initial modes exceed n_modes={n_modes}")
            dst[:src.size] = src
    return u, v


def _thresholds(cert):
    """Initial-norm thresholds behind every granted statement."""
    c = cert.constants
    out = {}
    th1 = c.get("theorem1", {})
    for key in ("delta_sigma_t0", "delta_uniform", "delta_t0", "delta_exp"):
        if key in th1:
            out[f"theorem1.{key}"] = th1[key]
    if "theorem2" in c:
        out["theorem2.delta"] = c["theorem2"]["delta"]
    if "theorem3" in c:
        out["theorem3.alpha"] = c["theorem3"]["alpha"]
    return out


def scaled_initial(cfg, cert, problem, t0):
    u, v = initial_modes(cfg.initial, cfg.solver["n_modes"], cfg.seed)
    scale = cfg.initial["scale"]
    if scale == "none":
        return u, v, None
    th = _thresholds(cert)
    if not th:
        raise ConfigurationError("initial scaling needs certified thresholds")
    target = th["theorem1.delta_sigma_t0"] if scale == "delta" else min(th.values())
    target *= cfg.initial["fraction"]
    d = eval_norm_d(SpectralState(u, v, t0), float(problem.family.eps(t0)))
    if d == 0.0:
        return u, v, target
    return u * (target / d), v * (target / d), target


# ---------------------------------------------------------------------------
# envelope selection

def liapunov_params(cert, functional="certified"):
    th1 = cert.constants["theorem1"]
    if functional == "remark1":
        return LiapunovParams(th1["gamma3_sigma"], 0.0, functional_a_prime=0.0)
    return LiapunovParams(th1["gamma3_sigma"], th1["theta"])


def envelope_checks(traj, cert, problem):
    """Run the check attached to each reported statement, plus the diagnostics."""
    c = cert.constants
    th1 = c.get("theorem1", {})
    verdicts = set(cert.verdicts)
    reports = []
    if "stable" in verdicts:
        reports.append(env.check_stability_envelope(traj, th1["sigma"], th1["delta_sigma_t0"]))
    if "uniformly-stable" in verdicts:
        r = env.check_stability_envelope(traj, th1["sigma"], th1["delta_uniform"])
        reports.append(env.EnvelopeReport("uniform-stability", r.verdict, r.worst_margin,
                                          r.time_of_worst, r.details))
    if "asymptotically-stable" in verdicts:
        reports.append(env.check_integral_envelope(
            traj, th1["h_xi"], th1["chi"], th1["eta"], problem.family, th1["delta_t0"]))
    if "uniformly-exponential-asymptotically-stable" in verdicts:
        reports.append(env.check_exponential_envelope(traj, th1["D"], th1["E"], th1["delta_exp"]))
    th2 = c.get("theorem2")
    if th2 is not None and verdicts & {"uniformly-bounded", "eventually-uniformly-bounded"}:
        s = th2["s"] if "eventually-uniformly-bounded" in verdicts else None
        reports.append(env.check_boundedness(traj, th2["beta"], th2["delta"], s))
    if th2 is not None and verdicts & {"exponential-asymptotically-stable-in-the-large",
                                       "eventually-exponential-asymptotically-stable-in-the-large"}:
        reports.append(env.check_exponential_envelope(
            traj, th2["D_delta"], th2["E_delta"], th2["delta"], name="exponential-in-the-large"))
    th3 = c.get("theorem3")
    if th3 is not None and "bounded" in verdicts:
        reports.append(env.check_boundedness(traj, th3["beta_tilde"], th3["alpha"],
                                             name="boundedness-tilde"))
    if th3 is not None and "asymptotically-stable-in-the-large" in verdicts:
        if "T" in th3:
            reports.append(env.check_attractivity(traj, th3["nu"], th3["T"], th3["alpha"]))
        reports.append(env.check_integral_envelope(
            traj, th3["h_tilde"], th1["chi"], th1["eta"], problem.family, th3["alpha"],
            name="integral-envelope-tilde"))
    reports.append(env.check_decay_inequality(traj, th1["eta"], th1["kappa"]))
    reports.append(env.check_wdot_consistency(traj))
    reports.append(env.check_mode_resolution(traj))
    return reports


def csv_envelope(traj, cert, problem):
    c = cert.constants
    th1 = c.get("theorem1", {})
    if "D" in th1:
        return env.envelope_bound(traj, th1["D"], th1["E"])
    if "theorem2" in c:
        return env.envelope_bound(traj, c["theorem2"]["D_delta"], c["theorem2"]["E_delta"])
    if "h_xi" in th1:
        return env.integral_envelope_bound(traj, th1["h_xi"], th1["chi"], th1["eta"], problem.family)
    return None


# ---------------------------------------------------------------------------
# artifacts

def _write(path, text):
    try:
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def write_bundle(bundle, outdir, cfg=None, plots=False):
    paths = {}
    try:
        os.makedirs(outdir, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {outdir}: {exc}") from exc
    if bundle.certificate is not None:
        paths["certificate"] = _write(os.path.join(outdir, "certificate.json"),
                                      bundle.certificate.to_json())
    if bundle.trajectory is not None:
        path = os.path.join(outdir, "trajectory.csv")
        try:
            bundle.trajectory.to_csv(path, bundle.info.get("_envelope"))
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc}") from exc
        paths["trajectory"] = path
    doc = {"name": bundle.name, "verdict": bundle.verdict,
           "reports": [r.to_dict() for r in bundle.reports],
           **{k: v for k, v in bundle.info.items() if not k.startswith("_")}}
    if cfg is not None:
        doc["config"] = cfg.to_dict()
    paths["envelopes"] = _write(os.path.join(outdir, "envelopes.json"), dumps(doc))
    if plots and bundle.trajectory is not None:
        from .plots import plot_bundle

        paths.update(plot_bundle(bundle, outdir))
    bundle.paths = paths
    return paths


# ---------------------------------------------------------------------------
# runs

def run_experiment(cfg, mode="verify", outdir=None, write=True):
    """Certify, integrate and (for ``mode="verify"``) check the envelopes.

    ``mode`` is ``"certify"``, ``"simulate"`` or ``"verify"``. Certification
    failure returns a bundle carrying the failed hypotheses and no checks.
    """
    if mode not in ("certify", "simulate", "verify"):
        raise ConfigurationError(f"unknown mode {mode!r}")
    if isinstance(cfg, dict):
        cfg = RunConfig.from_dict(cfg)
    name = cfg.output["name"] or cfg.problem["name"]
    outdir = outdir or os.path.join(cfg.output_dir(), name)
    problem = cfg.build_problem()

    t0_req = cfg.initial["t0"]
    cert = certify(problem, cfg.certify_config(None if t0_req == "kappa" else t0_req))
    info = {"seed": cfg.seed, "mode": mode}
    certified = bool(cert.verdicts) and not cert.failed_hypotheses
    if not certified:
        bundle = Bundle(name, ERROR, cert, info=info)
        if write:
            write_bundle(bundle, outdir, cfg)
        return bundle
    if mode == "certify":
        bundle = Bundle(name, env.PASS, cert, info=info)
        if write:
            write_bundle(bundle, outdir, cfg)
        return bundle

    t0 = cert.constants["theorem1"]["t0"]
    u0, u1, target = scaled_initial(cfg, cert, problem, t0)
    info.update(t0=t0, initial_norm=target)
    params = liapunov_params(cert, cfg.tuning["functional"])
    try:
        traj = integrate(problem, u0, u1, t0, cfg.solver_config(t0), params)
    except BlowUpError as exc:
        info["blow_up_time"] = exc.last_valid_time
        bundle = Bundle(name, env.FAIL, cert, info=info)
        if write:
            write_bundle(bundle, outdir, cfg)
        return bundle

    reports = envelope_checks(traj, cert, problem) if mode == "verify" else []
    verdict = env.overall(reports) if reports else env.PASS
    info["_envelope"] = csv_envelope(traj, cert, problem)
    bundle = Bundle(name, verdict, cert, traj, reports, info=info)
    if write:
        write_bundle(bundle, outdir, cfg, plots=cfg.output["plots"])
    return bundle


# pinned desk-scale examples
_BASE = {"solver": {"duration": 40.0}, "initial": {"preset": "smooth", "t0": "kappa"}}

EXAMPLES = {
    "example1": [
        ("zero", {"problem": {"family": "example1", "eps0": 1.0, "p": 2.0, "C0": 4.0},
                  "forcing": {"kind": "zero"}, "damping": {"kind": "none", "a_prime": 1.0}}),
        ("sine", {"problem": {"family": "example1", "eps0": 1.0, "p": 2.0, "C0": 4.0},
                  "forcing": {"kind": "sine", "b": 0.5, "omega": 1.0},
                  "damping": {"kind": "none", "a_prime": 1.0}}),
    ],
    "example2": [
        # at t0 = kappa, C ~ 114 and eps ~ 5.3: a finer step and low-mode data keep
        # the finite-difference check clear of stiff transients
        ("zero", {"problem": {"family": "example2", "eps0": 1.0, "p": 0.25, "C0": 4.0, "q": 0.5},
                  "forcing": {"kind": "zero"}, "damping": {"kind": "none", "a_prime": 1.0},
                  "solver": {"dt": 5e-4, "duration": 20.0, "sample_every": 20},
                  "initial": {"preset": "modes", "u_modes": [1.0, 0.25], "v_modes": [-0.5]}}),
    ],
    "example3": [
        ("zero", {"problem": {"family": "example3", "eps_mean": 0.5, "eps_amp": 0.5,
                              "eps_freq": 1.0, "C0": 4.0, "C1": 1.0, "q": 1.0},
                  "forcing": {"kind": "zero"}, "damping": {"kind": "none", "a_prime": 1.0},
                  "tuning": {"delta": 0.02}}),
    ],
}


def example_config(which, variant=None):
    """Pinned :class:`RunConfig` for ``example1|example2|example3``."""
    key = which if isinstance(which, str) else f"example{which}"
    if key not in EXAMPLES:
        raise ConfigurationError(f"unknown example {which!r}")
    runs = EXAMPLES[key]
    if variant is None:
        variant = runs[0][0]
    for name, doc in runs:
        if name == variant:
            merged = {s: dict(v) for s, v in _BASE.items()}
            for s, v in doc.items():
                merged.setdefault(s, {}).update(v)
            merged["output"] = {"name": f"{key}-{name}"}
            return RunConfig.from_dict(merged)
    raise ConfigurationError(f"unknown variant {variant!r} of {key}")


def reproduce_example(which, outdir=None, write=True, plots=False):
    """Run the pinned example (``1|2|3`` or ``"remark1"``) and check every envelope."""
    key = which if isinstance(which, str) else f"example{which}"
    if key == "remark1":
        return reproduce_remark1(outdir, write, plots)
    if key not in EXAMPLES:
        raise ConfigurationError(f"unknown example {which!r}")
    base = outdir or os.path.join(os.environ.get("LIAPLAB_OUT") or "liaplab-out", key)
    children = []
    for variant, _ in EXAMPLES[key]:
        cfg = example_config(key, variant)
        if plots:
            cfg = cfg.with_value("output.plots", True)
        children.append(run_experiment(cfg, "verify", os.path.join(base, variant), write))
    verdict_sets = {c.name: list(c.certificate.verdicts) for c in children}
    bundle = Bundle(key, combine(c.verdict for c in children), children=children,
                    info={"verdict_sets": verdict_sets})
    if write:
        bundle.paths["summary"] = _write(os.path.join(base, "summary.json"), dumps(bundle.summary()))
    return bundle


def reproduce_remark1(outdir=None, write=True, plots=False):
    """Example 1 (p = 2) checked with certified and with ``theta = 0 = a'`` functionals.

    The demonstration succeeds when the certified decay check passes and the
    single-parameter one fails somewhere.
    """
    base = outdir or os.path.join(os.environ.get("LIAPLAB_OUT") or "liaplab-out", "remark1")
    cfg = example_config("example1", "zero")
    run = run_experiment(cfg, "verify", os.path.join(base, "certified"), write)
    if run.trajectory is None:
        return Bundle("remark1", ERROR, children=[run])
    th1 = run.certificate.constants["theorem1"]
    traj0 = run.trajectory.with_params(liapunov_params(run.certificate, "remark1"))
    certified = run.report("decay-inequality")
    single = env.check_decay_inequality(traj0, th1["eta"], th1["kappa"],
                                        name="decay-inequality-theta0")
    demonstrated = certified.verdict == env.PASS and single.verdict == env.FAIL
    info = {"demonstrated": demonstrated, "certified_decay": certified.verdict,
            "theta0_decay": single.verdict}
    bundle = Bundle("remark1", env.PASS if demonstrated else env.FAIL, run.certificate, traj0,
                    [certified, single], children=[run], info=info)
    if write:
        write_bundle(bundle, os.path.join(base, "theta0"), plots=plots)
        bundle.paths["summary"] = _write(os.path.join(base, "summary.json"), dumps(bundle.summary()))
    return bundle


def _sweep_one(args):
    cfg, mode, outdir = args
    try:
        b = run_experiment(cfg, mode, outdir)
        return b.verdict, b.summary()
    except (LiapLabError, ValueError) as exc:
        return ERROR, {"error": str(exc)}


def parse_value(text):
    """A TOML literal (``0.5``, ``3``, ``true``, ``"sine"``); bare words stay strings."""
    from .config import tomllib

    try:
        return tomllib.loads(f"v = {text.strip()}")["v"]
    except tomllib.TOMLDecodeError:
        return text.strip()


def run_sweep(cfg, path, values, mode="verify", outdir=None, workers=None):
    """Run one experiment per value of ``path`` (``section.key``), concurrently."""
    base = outdir or os.path.join(cfg.output_dir(), cfg.output["name"] or cfg.problem["name"], "sweep")
    jobs = []
    for value in values:
        if isinstance(value, str):
            value = parse_value(value)
        sub = cfg.with_value(path, value)
        label = f"{path}={value}".replace(os.sep, "_")
        jobs.append((sub, mode, os.path.join(base, label)))
    if workers == 1 or len(jobs) <= 1:
        results = [_sweep_one(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_one, jobs))
    runs = [{"value": j[0].to_dict()[path.split(".")[0]][path.split(".")[1]], "verdict": v,
             "outdir": j[2], "summary": s} for j, (v, s) in zip(jobs, results)]
    bundle = Bundle("sweep", combine(v for v, _ in results), info={"param": path, "runs": runs})
    bundle.paths["summary"] = _write(os.path.join(base, "sweep.json"), dumps(bundle.summary()))
    return bundle


def format_reports(bundle):
    """Human-readable lines for the CLI."""
    lines = []
    for child in bundle.children or ():
        if child is not bundle:
            lines.extend(format_reports(child))
    if bundle.certificate is not None and not bundle.children:
        cert = bundle.certificate
        lines.append(f"[{bundle.name}] verdicts: {', '.join(cert.verdicts) or '(none)'}")
        for h in cert.failed_hypotheses:
            lines.append(f"[{bundle.name}] failed hypothesis: {h}")
    for r in bundle.reports:
        margin = "" if math.isnan(r.worst_margin) else f" worst margin {r.worst_margin:.3e} at t={r.time_of_worst:.4g}"
        extra = f" ({r.details['reason']})" if "reason" in r.details else ""
        lines.append(f"[{bundle.name}] {r.name}: {r.verdict}{margin}{extra}")
    lines.append(f"[{bundle.name}] overall: {bundle.verdict}")
    return lines
