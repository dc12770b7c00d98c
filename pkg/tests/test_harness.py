import json
import math
import os
from pathlib import Path

import numpy as np
import pytest

from liaplab import coefficients as co
from liaplab.errors import ConfigurationError
from liaplab.field import SpectralState
from liaplab.harness import envelopes as env
from liaplab.harness.cli import main
from liaplab.harness.config import RunConfig, load_config
from liaplab.harness.experiment import (EXIT_ERROR, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_PASS,
                                        example_config, initial_modes, parse_value,
                                        run_experiment, run_sweep)
from liaplab.liapunov import LiapunovParams
from liaplab.solver import Trajectory

ROOT = Path(__file__).resolve().parents[1]
CONFIGS = ROOT / "configs"


def synthetic(times, d, W_dot=None, W_dot_fd=None, top=None):
    """Trajectory carrying only the sampled diagnostics the checks read."""
    times = np.asarray(times, float)
    d = np.asarray(d, float)
    n = len(times)
    zeros = np.zeros(n)
    states = tuple(SpectralState([0.0], [0.0], t) for t in times)
    W_dot = zeros if W_dot is None else np.asarray(W_dot, float)
    return Trajectory(times, states, d, zeros, W_dot,
                      W_dot.copy() if W_dot_fd is None else np.asarray(W_dot_fd, float),
                      zeros, zeros, zeros if top is None else np.asarray(top, float),
                      LiapunovParams(1.0, 1.0))


def short_cfg(**sections):
    doc = {"problem": {"family": "example1", "eps0": 1.0, "p": 2.0, "C0": 4.0},
           "forcing": {"kind": "sine", "b": 0.5},
           "damping": {"kind": "none", "a_prime": 1.0},
           "solver": {"n_modes": 16, "dt": 2e-3, "duration": 2.0, "sample_every": 25},
           "output": {"name": "short"}}
    for s, v in sections.items():
        doc.setdefault(s, {}).update(v)
    return RunConfig.from_dict(doc)


# envelope checks on synthetic trajectories

T = np.linspace(0.0, 10.0, 101)
ZERO = synthetic(T, np.zeros_like(T))


def test_zero_trajectory_passes_everything():
    reports = [env.check_stability_envelope(ZERO, 0.5, 0.02),
               env.check_exponential_envelope(ZERO, 25.0, 1e-3, 0.02),
               env.check_boundedness(ZERO, 0.5, 0.02),
               env.check_attractivity(ZERO, 0.01, 5.0, 0.1),
               env.check_decay_inequality(ZERO, 1.0),
               env.check_wdot_consistency(ZERO),
               env.check_mode_resolution(ZERO)]
    assert [r.verdict for r in reports] == [env.PASS] * len(reports)
    assert reports[0].details["max_d"] == 0.0
    assert env.overall(reports) == env.PASS


def test_stability_margin_and_failure():
    d = 0.01 + 0.3 * np.sin(T / 10 * math.pi)
    ok = env.check_stability_envelope(synthetic(T, d), 0.5, 0.02)
    assert ok.verdict == env.PASS
    assert ok.worst_margin == pytest.approx(0.5 - d.max())
    assert ok.time_of_worst == pytest.approx(5.0)
    bad = env.check_stability_envelope(synthetic(T, d), 0.2, 0.02)
    assert bad.verdict == env.FAIL and bad.worst_margin < 0


def test_unmet_antecedent_is_inconclusive_not_fail():
    traj = synthetic(T, np.full_like(T, 0.1))
    for r in (env.check_stability_envelope(traj, 0.05, 0.02),
              env.check_exponential_envelope(traj, 1.0, 1.0, delta=0.02),
              env.check_boundedness(traj, 0.05, 0.02),
              env.check_attractivity(traj, 0.01, 1.0, alpha=0.02)):
        assert r.verdict == env.INCONCLUSIVE


def test_eventual_boundedness_needs_onset():
    r = env.check_boundedness(ZERO, 0.5, 0.02, s=3.0)
    assert r.verdict == env.INCONCLUSIVE
    assert "s(delta)" in r.details["reason"]


def test_attractivity_horizon_hint():
    r = env.check_attractivity(ZERO, 0.01, 75.0)
    assert r.verdict == env.INCONCLUSIVE
    assert r.details["required_t_end"] == 75.0
    assert "75" in r.details["hint"]


def test_attractivity_checks_only_late_samples():
    d = np.where(T < 5.0, 1.0, 0.001)
    assert env.check_attractivity(synthetic(T, d), 0.01, 5.0).verdict == env.PASS
    assert env.check_attractivity(synthetic(T, d), 0.01, 4.0).verdict == env.FAIL


def test_exponential_envelope_and_fitted_rate():
    traj = synthetic(T, 0.01 * np.exp(-0.5 * T))
    r = env.check_exponential_envelope(traj, 1.0, 0.4)
    assert r.verdict == env.PASS
    assert r.details["fitted_rate"] == pytest.approx(0.5, rel=1e-12)
    assert r.details["rate_conservative"]
    assert env.check_exponential_envelope(traj, 1.0, 0.6).verdict == env.FAIL


def test_integral_envelope_reduces_to_exponential_for_constant_g():
    fam = co.constant_family(0.0, 4.0)
    traj = synthetic(T, 0.01 * np.exp(-0.01 * T))
    h, chi, eta = 10.0, 0.25, 0.5
    bound = env.integral_envelope_bound(traj, h, chi, eta, fam)
    closed = math.sqrt(h * 5.0 / chi) * np.exp(-eta * T / (2 * h * 5.0)) * 0.01
    np.testing.assert_allclose(bound, closed, rtol=1e-12)
    assert env.check_integral_envelope(traj, h, chi, eta, fam).verdict == env.PASS


def test_decay_inequality_counts_violations():
    d = np.full_like(T, 0.1)
    W_dot = np.where(T > 7.0, 0.0, -0.02)
    r = env.check_decay_inequality(synthetic(T, d, W_dot), 1.0)
    assert r.verdict == env.FAIL
    assert r.details["violations"] == int(np.sum(T > 7.0))
    late = env.check_decay_inequality(synthetic(T, d, W_dot), 1.0, kappa=20.0)
    assert late.verdict == env.INCONCLUSIVE


def test_wdot_consistency_detects_mismatch():
    W_dot = -np.ones_like(T)
    assert env.check_wdot_consistency(synthetic(T, ZERO.d, W_dot, W_dot * (1 + 5e-5))).passed
    assert not env.check_wdot_consistency(synthetic(T, ZERO.d, W_dot, W_dot * (1 + 5e-4))).passed


def test_mode_resolution_flags_underresolved():
    r = env.check_mode_resolution(synthetic(T, ZERO.d, top=np.full_like(T, 1e-6)))
    assert r.verdict == env.FAIL


def test_overall_precedence():
    p = env.EnvelopeReport("a", env.PASS)
    i = env.EnvelopeReport("b", env.INCONCLUSIVE)
    f = env.EnvelopeReport("c", env.FAIL)
    assert env.overall([p, i]) == env.INCONCLUSIVE
    assert env.overall([p, i, f]) == env.FAIL


# experiment runs

@pytest.fixture(scope="module")
def short_run():
    return run_experiment(short_cfg(), "verify", write=False)


def test_short_verify_run_passes(short_run):
    assert short_run.verdict == env.PASS, [r.to_dict() for r in short_run.reports]
    names = {r.name for r in short_run.reports}
    assert {"uniform-stability", "exponential", "boundedness",
            "exponential-in-the-large", "decay-inequality", "wdot-consistency",
            "mode-resolution"} <= names
    assert short_run.trajectory.d[0] < short_run.info["initial_norm"] / 0.9 + 1e-15


def test_every_verdict_is_exercised(short_run):
    checked = {r.name for r in short_run.reports}
    mapping = {"uniformly-stable": "uniform-stability",
               "uniformly-exponential-asymptotically-stable": "exponential",
               "uniformly-bounded": "boundedness",
               "exponential-asymptotically-stable-in-the-large": "exponential-in-the-large"}
    for verdict in short_run.certificate.verdicts:
        assert mapping[verdict] in checked


def test_mutation_inflated_rate_fails(short_run):
    traj, th1 = short_run.trajectory, short_run.certificate.constants["theorem1"]
    base = env.check_exponential_envelope(traj, th1["D"], th1["E"])
    assert base.passed
    # a doubled E is still far below the observed rate: the envelope is loose by construction
    assert env.check_exponential_envelope(traj, th1["D"], 2 * th1["E"]).passed
    fitted = base.details["fitted_rate"]
    assert fitted >= th1["E"]
    assert not env.check_exponential_envelope(traj, 1.0, 2 * fitted).passed


def test_certification_failure_bundle(tmp_path):
    cfg = load_config(CONFIGS / "blowup.toml")
    b = run_experiment(cfg, "verify", str(tmp_path))
    assert b.verdict == "error" and b.exit_code == EXIT_ERROR
    assert b.reports == [] and b.trajectory is None
    doc = json.loads((tmp_path / "certificate.json").read_text())
    assert doc["failed_hypotheses"]


def test_bundle_files_and_determinism(tmp_path):
    cfg = short_cfg(initial={"preset": "random", "seed": 11})
    a = run_experiment(cfg, "verify", str(tmp_path / "a"))
    b = run_experiment(cfg, "verify", str(tmp_path / "b"))
    for name in ("certificate.json", "trajectory.csv", "envelopes.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    doc = json.loads((tmp_path / "a" / "envelopes.json").read_text())
    assert doc["seed"] == 11
    header = (tmp_path / "a" / "trajectory.csv").read_text().splitlines()[0]
    assert header == "t,d,W,W_dot_analytic,W_dot_fd,H,sup_abs_u,envelope_bound"
    assert a.verdict == b.verdict


def test_random_preset_depends_on_seed():
    init = {"preset": "random", "u_modes": None, "v_modes": None}
    u1, _ = initial_modes(init, 8, 1)
    u2, _ = initial_modes(init, 8, 2)
    u1b, _ = initial_modes(init, 8, 1)
    assert not np.array_equal(u1, u2)
    np.testing.assert_array_equal(u1, u1b)


def test_remark1_functional_config(short_run):
    b = run_experiment(short_cfg(tuning={"functional": "remark1"}), "verify", write=False)
    r = b.report("decay-inequality")
    assert r.details["theta"] == 0.0 and r.details["functional_a_prime"] == 0.0


# configuration

def test_config_parses_shipped_files():
    cfg = load_config(CONFIGS / "example1_sine.toml")
    assert cfg.forcing == {"kind": "sine", "b": 0.5, "omega": 1.0}
    assert cfg.seed == 7
    assert cfg.build_problem().family.mu == 2.0


@pytest.mark.parametrize("doc,match", [
    ({"problme": {}}, "unknown table"),
    ({"problem": {"family": "example1", "eps": 1.0}}, "eps"),
    ({"forcing": {"kind": "cosine"}}, "cosine"),
    ({"tuning": {"sigma": 0.5, "xi": 0.4}}, "sigma < xi"),
    ({"solver": {"n_modes": 1.5}}, "integer"),
    ({"initial": {"fraction": 1.0}}, "fraction"),
    ({"initial": {"u_modes": [1.0]}}, "preset"),
])
def test_config_errors(doc, match):
    with pytest.raises(ConfigurationError, match=match):
        RunConfig.from_dict(doc)


def test_with_value_revalidates():
    cfg = short_cfg()
    assert cfg.with_value("forcing.b", 0.25).forcing["b"] == 0.25
    assert cfg.forcing["b"] == 0.5
    with pytest.raises(ConfigurationError):
        cfg.with_value("forcing.bb", 1.0)
    with pytest.raises(ConfigurationError):
        cfg.with_value("forcing", 1.0)


def test_round_trip_dict():
    cfg = example_config("example2")
    assert RunConfig.from_dict(cfg.to_dict()) == cfg


def test_parse_value():
    assert parse_value("0.5") == 0.5
    assert parse_value("3") == 3
    assert parse_value("true") is True
    assert parse_value('"sine"') == "sine"
    assert parse_value("sine") == "sine"


def test_output_dir_env(monkeypatch):
    cfg = short_cfg()
    monkeypatch.delenv("LIAPLAB_OUT", raising=False)
    assert cfg.output_dir() == "liaplab-out"
    monkeypatch.setenv("LIAPLAB_OUT", "/somewhere")
    assert cfg.output_dir() == "/somewhere"


# CLI

def _write_short(tmp_path, **sections):
    lines = []
    for section, table in short_cfg(**sections).to_dict().items():
        lines.append(f"[{section}]")
        for k, v in table.items():
            if v is not None:
                lines.append(f"{k} = {json.dumps(v)}")
    path = tmp_path / "short.toml"
    path.write_text("\n".join(lines) + "\n")
    return path


def test_cli_certify_and_verify(tmp_path, capsys):
    path = _write_short(tmp_path)
    assert main(["certify", str(path), "--out", str(tmp_path / "c")]) == EXIT_PASS
    assert "uniformly-stable" in capsys.readouterr().out
    assert main(["verify", str(path), "--out", str(tmp_path / "v")]) == EXIT_PASS
    assert (tmp_path / "v" / "trajectory.csv").exists()


def test_cli_error_exit_codes(tmp_path, capsys):
    assert main(["verify", str(CONFIGS / "blowup.toml"), "--out", str(tmp_path)]) == EXIT_ERROR
    assert main(["certify", str(tmp_path / "missing.toml")]) == EXIT_ERROR
    bad = tmp_path / "bad.toml"
    bad.write_text("[problem]\nfamily = 'nope'\n")
    assert main(["certify", str(bad)]) == EXIT_ERROR
    assert "nope" in capsys.readouterr().err


def test_cli_inconclusive_exit_code(tmp_path):
    # example 2's attraction time is far beyond a two-unit horizon
    cfg = example_config("example2").with_value("solver.duration", 2.0)
    lines = []
    for section, table in cfg.to_dict().items():
        lines.append(f"[{section}]")
        lines += [f"{k} = {json.dumps(v)}" for k, v in table.items() if v is not None]
    path = tmp_path / "e2.toml"
    path.write_text("\n".join(lines) + "\n")
    assert main(["verify", str(path), "--out", str(tmp_path / "o")]) == EXIT_INCONCLUSIVE


def test_cli_fail_exit_code(tmp_path):
    # an impossible mode-resolution budget: too few modes for the smooth preset
    path = _write_short(tmp_path, solver={"n_modes": 3})
    assert main(["verify", str(path), "--out", str(tmp_path / "o")]) == EXIT_FAIL


def test_cli_liaplab_out(tmp_path, monkeypatch):
    path = _write_short(tmp_path)
    monkeypatch.setenv("LIAPLAB_OUT", str(tmp_path / "env"))
    assert main(["simulate", str(path)]) == EXIT_PASS
    assert (tmp_path / "env" / "short" / "trajectory.csv").exists()


def test_cli_sweep(tmp_path, capsys):
    path = _write_short(tmp_path)
    code = main(["sweep", str(path), "--param", "forcing.b", "--values", "0.25,0.5",
                 "--workers", "2", "--out", str(tmp_path / "sw")])
    assert code == EXIT_PASS
    doc = json.loads((tmp_path / "sw" / "sweep.json").read_text())
    assert [r["value"] for r in doc["runs"]] == [0.25, 0.5]
    assert os.path.isdir(tmp_path / "sw" / "forcing.b=0.25")


def test_sweep_reports_error_runs(tmp_path):
    # b = 10 breaks the example-1 precondition: that run errors, the other passes
    b = run_sweep(short_cfg(), "forcing.b", ["0.5", "10.0"], "certify", str(tmp_path), workers=1)
    assert [r["verdict"] for r in b.info["runs"]] == ["pass", "error"]
    assert b.exit_code == EXIT_ERROR
