"""TOML run configuration.

A run is described by seven tables::

    [problem]   family = "example1" | "example2" | "example3" | "constant" + its constants
    [forcing]   kind = "zero" | "sine" | "restoring_power" | "repulsive_power"
    [damping]   kind = "none" | "constant" | "abs_u" | "norm_power", a_prime, A, tau
    [solver]    n_modes, dt, scheme, duration, sample_every, grid_factor
    [tuning]    margin, xi, sigma, delta, alpha, nu, horizons, functional
    [initial]   preset, u_modes, v_modes, t0, scale, fraction, seed
    [output]    dir, name, plots

Unknown tables or keys raise :class:`ConfigurationError`.
"""
from __future__ import annotations

import copy
import math
import os
from dataclasses import dataclass, field

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .. import coefficients as co
from ..errors import ConfigurationError
from ..solver import SolverConfig
from ..tuning import CertifyConfig

FAMILY_KEYS = {
    "example1": {"eps0": 1.0, "p": 2.0, "C0": 4.0},
    "example2": {"eps0": 1.0, "p": 0.25, "C0": 4.0, "q": 0.5},
    "example3": {"eps_mean": 0.5, "eps_amp": 0.5, "eps_freq": 1.0, "C0": 4.0, "C1": 1.0, "q": 1.0},
    "constant": {"eps0": 1.0, "C0": 4.0},
}

FORCING_KEYS = {
    "zero": {},
    "sine": {"b": 1.0, "omega": 1.0},
    "restoring_power": {"b": 1.0, "q": 1.0},
    "repulsive_power": {"b": 1.0, "q": 1.0, "rho": 1.0},
}

DAMPING_KEYS = {
    "none": {"a_prime": 0.0},
    "constant": {"a_prime": 0.0, "A": 1.0},
    "abs_u": {"a_prime": 0.0, "A": 1.0},
    "norm_power": {"a_prime": 0.0, "A": 1.0, "tau": 0.5},
}

SOLVER_DEFAULTS = {"n_modes": 64, "dt": 1e-3, "scheme": "imex2", "duration": 40.0,
                   "sample_every": 10, "grid_factor": 2}
TUNING_DEFAULTS = {"margin": 0.01, "xi": None, "sigma": 0.5, "delta": None, "alpha": None,
                   "nu": None, "t_bar_horizon": 1e6, "T_horizon": 1e12, "audit_t_max": 1e4,
                   "functional": "certified"}
INITIAL_DEFAULTS = {"preset": "smooth", "u_modes": None, "v_modes": None, "t0": "kappa",
                    "scale": "min-delta", "fraction": 0.9, "seed": 0}
OUTPUT_DEFAULTS = {"dir": "liaplab-out", "name": None, "plots": False}

PRESETS = ("zero", "first-mode", "smooth", "random", "modes")
SCALES = ("none", "delta", "min-delta")
FUNCTIONALS = ("certified", "remark1")
SECTIONS = ("problem", "forcing", "damping", "solver", "tuning", "initial", "output")


def _merge(section, given, defaults, extra=()):
    allowed = set(defaults) | set(extra)
    unknown = sorted(set(given) - allowed)
    if unknown:
        raise ConfigurationError(f"unknown key(s) in [{section}]: {', '.join(unknown)}")
    out = dict(defaults)
    out.update({k: v for k, v in given.items() if k not in extra})
    return out


def _kind(section, given, table, key, default):
    kind = given.get(key, default)
    if kind not in table:
        raise ConfigurationError(f"[{section}] {key} = {kind!r} is not one of {sorted(table)}")
    return kind


def _number(section, key, value, allow_none=False):
    if value is None and allow_none:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigurationError(f"[{section}] {key} must be a number, got {value!r}")
    return float(value)


@dataclass(frozen=True)
class RunConfig:
    """Validated run description (plain data, picklable)."""

    problem: dict
    forcing: dict
    damping: dict
    solver: dict
    tuning: dict
    initial: dict
    output: dict = field(default_factory=lambda: dict(OUTPUT_DEFAULTS))

    @classmethod
    def from_dict(cls, doc):
        unknown = sorted(set(doc) - set(SECTIONS))
        if unknown:
            raise ConfigurationError(f"unknown table(s): {', '.join(unknown)}")
        doc = copy.deepcopy(doc)

        prob = doc.get("problem", {})
        fam = _kind("problem", prob, FAMILY_KEYS, "family", "example1")
        problem = _merge("problem", prob, FAMILY_KEYS[fam], extra=("family", "name"))
        for k in FAMILY_KEYS[fam]:
            problem[k] = _number("problem", k, problem[k])
        problem = {"family": fam, "name": prob.get("name", fam), **problem}

        forc = doc.get("forcing", {})
        kind = _kind("forcing", forc, FORCING_KEYS, "kind", "zero")
        forcing = _merge("forcing", forc, FORCING_KEYS[kind], extra=("kind",))
        for k in FORCING_KEYS[kind]:
            forcing[k] = _number("forcing", k, forcing[k])
        forcing = {"kind": kind, **forcing}

        damp = doc.get("damping", {})
        kind = _kind("damping", damp, DAMPING_KEYS, "kind", "none")
        damping = _merge("damping", damp, DAMPING_KEYS[kind], extra=("kind",))
        for k in DAMPING_KEYS[kind]:
            damping[k] = _number("damping", k, damping[k])
        damping = {"kind": kind, **damping}

        solver = _merge("solver", doc.get("solver", {}), SOLVER_DEFAULTS)
        for k in ("n_modes", "sample_every", "grid_factor"):
            if isinstance(solver[k], bool) or not isinstance(solver[k], int):
                raise ConfigurationError(f"[solver] {k} must be an integer")
        for k in ("dt", "duration"):
            solver[k] = _number("solver", k, solver[k])
        if not solver["duration"] > 0:
            raise ConfigurationError("[solver] duration must be positive")

        tuning = _merge("tuning", doc.get("tuning", {}), TUNING_DEFAULTS)
        for k, v in tuning.items():
            if k != "functional":
                tuning[k] = _number("tuning", k, v, allow_none=True)
        if tuning["functional"] not in FUNCTIONALS:
            raise ConfigurationError(f"[tuning] functional must be one of {FUNCTIONALS}")
        if tuning["xi"] is not None and not tuning["sigma"] < tuning["xi"]:
            raise ConfigurationError("[tuning] sigma < xi is required when both are set")

        initial = _merge("initial", doc.get("initial", {}), INITIAL_DEFAULTS)
        if initial["preset"] not in PRESETS:
            raise ConfigurationError(f"[initial] preset must be one of {PRESETS}")
        if initial["preset"] == "modes" and initial["u_modes"] is None and initial["v_modes"] is None:
            raise ConfigurationError("[initial] preset 'modes' needs u_modes and/or v_modes")
        if initial["preset"] != "modes" and (initial["u_modes"] or initial["v_modes"]):
            raise ConfigurationError("[initial] u_modes/v_modes need preset = 'modes'")
        if initial["scale"] not in SCALES:
            raise ConfigurationError(f"[initial] scale must be one of {SCALES}")
        if initial["t0"] != "kappa":
            initial["t0"] = _number("initial", "t0", initial["t0"])
            if initial["t0"] < 0:
                raise ConfigurationError("[initial] t0 must be >= 0")
        initial["fraction"] = _number("initial", "fraction", initial["fraction"])
        if not 0 < initial["fraction"] < 1:
            raise ConfigurationError("[initial] fraction must lie in (0, 1)")
        if isinstance(initial["seed"], bool) or not isinstance(initial["seed"], int):
            raise ConfigurationError("[initial] seed must be an integer")

        output = _merge("output", doc.get("output", {}), OUTPUT_DEFAULTS)
        cfg = cls(problem, forcing, damping, solver, tuning, initial, output)
        cfg.solver_config(0.0)  # surface solver errors early
        return cfg

    @classmethod
    def from_toml(cls, path):
        try:
            with open(path, "rb") as fh:
                doc = tomllib.load(fh)
        except OSError as exc:
            raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise ConfigurationError(f"invalid TOML in {path}: {exc}") from exc
        return cls.from_dict(doc)

    def to_dict(self):
        return {s: dict(getattr(self, s)) for s in SECTIONS}

    def with_value(self, path, value):
        """Copy with one ``section.key`` replaced (re-validated)."""
        try:
            section, key = path.split(".")
        except ValueError:
            raise ConfigurationError(f"parameter path must be 'section.key', got {path!r}") from None
        if section not in SECTIONS:
            raise ConfigurationError(f"unknown table {section!r}")
        doc = self.to_dict()
        if key not in doc[section]:
            raise ConfigurationError(f"unknown key {key!r} in [{section}]")
        doc[section][key] = value
        return RunConfig.from_dict(doc)

    @property
    def seed(self):
        return self.initial["seed"]

    def output_dir(self):
        return os.environ.get("LIAPLAB_OUT") or self.output["dir"]

    def build_problem(self):
        p, f, d = self.problem, self.forcing, self.damping
        forcing = {
            "zero": lambda: co.zero_forcing(),
            "sine": lambda: co.sine_forcing(f["b"], f["omega"]),
            "restoring_power": lambda: co.restoring_power_forcing(f["b"], f["q"]),
            "repulsive_power": lambda: co.repulsive_power_forcing(f["b"], f["q"], f["rho"]),
        }[f["kind"]]()
        damping = {
            "none": lambda: co.no_damping(d["a_prime"]),
            "constant": lambda: co.constant_damping(d["a_prime"], d["A"]),
            "abs_u": lambda: co.abs_u_damping(d["a_prime"], d["A"]),
            "norm_power": lambda: co.norm_power_damping(d["a_prime"], d["A"], d["tau"]),
        }[d["kind"]]()
        fam = p["family"]
        if fam == "example1":
            prob = co.make_example1(p["eps0"], p["p"], p["C0"], forcing, damping)
        elif fam == "example2":
            prob = co.make_example2(p["eps0"], p["p"], p["C0"], p["q"], forcing, damping)
        elif fam == "example3":
            eps = co.periodic_eps(p["eps_mean"], p["eps_amp"], p["eps_freq"])
            prob = co.make_example3(eps, p["C0"], p["C1"], p["q"], forcing, damping)
        else:
            family = co.constant_family(p["eps0"], p["C0"])
            prob = co.Problem(family, forcing, damping, name="constant")
        return prob

    def certify_config(self, t0=None):
        t = self.tuning
        return CertifyConfig(margin=t["margin"], xi=t["xi"], sigma=t["sigma"], t0=t0,
                             delta=t["delta"], alpha=t["alpha"], nu=t["nu"],
                             t_bar_horizon=t["t_bar_horizon"], T_horizon=t["T_horizon"],
                             audit_t_max=t["audit_t_max"], seed=self.seed)

    def solver_config(self, t0):
        s = self.solver
        if not math.isfinite(t0):
            raise ConfigurationError("initial time must be finite")
        return SolverConfig(n_modes=s["n_modes"], dt=s["dt"], scheme=s["scheme"],
                            t_end=t0 + s["duration"], sample_every=s["sample_every"],
                            grid_factor=s["grid_factor"])


def load_config(path):
    return RunConfig.from_toml(path)
