"""Experiment orchestration, reports, persistence and the command line."""

from .experiment import (
    ExperimentConfig,
    PhaseOneReport,
    PhaseTwoReport,
    PipelineError,
    prepare,
    run_phase_one,
    run_phase_two,
    term_profile,
)
from .persistence import ContainerError, load, load_bundle, save
from .synthetic import SyntheticSpec, acceptance_spec, make_corpus

__all__ = [
    "ContainerError",
    "ExperimentConfig",
    "PhaseOneReport",
    "PhaseTwoReport",
    "PipelineError",
    "SyntheticSpec",
    "acceptance_spec",
    "load",
    "load_bundle",
    "make_corpus",
    "prepare",
    "run_phase_one",
    "run_phase_two",
    "save",
    "term_profile",
]
