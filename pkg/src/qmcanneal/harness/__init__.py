"""Experiment configuration, replication runner, verification suites and CLI."""
from .config import ConfigError, ExperimentConfig, load_config, parse_config
from .experiment import nearest_rank, run_experiment, run_replication, summarize

__all__ = ["ConfigError", "ExperimentConfig", "load_config", "parse_config", "nearest_rank",
           "run_experiment", "run_replication", "summarize"]
