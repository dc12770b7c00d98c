"""Configuration, experiment orchestration, envelope checks and the CLI."""
from .config import RunConfig, load_config
from .envelopes import (EnvelopeReport, check_attractivity, check_boundedness,
                        check_decay_inequality, check_exponential_envelope,
                        check_integral_envelope, check_mode_resolution,
                        check_stability_envelope, check_wdot_consistency)
from .experiment import (Bundle, example_config, reproduce_example, run_experiment,
                         run_sweep)

__all__ = [
    "Bundle", "EnvelopeReport", "RunConfig", "check_attractivity", "check_boundedness",
    "check_decay_inequality", "check_exponential_envelope", "check_integral_envelope",
    "check_mode_resolution", "check_stability_envelope", "check_wdot_consistency",
    "example_config", "load_config", "reproduce_example", "run_experiment", "run_sweep",
]
