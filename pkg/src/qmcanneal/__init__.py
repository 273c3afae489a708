"""Simulated annealing driven by (t,s)_R-sequences.

Submodules: ``sequences`` (drivers, nets, block indices), ``kernels``
(proposals, scale schedules, condition checks), ``annealer`` (the chain),
``objectives`` (benchmark registry) and ``harness`` (CLI and experiments).
"""
from . import _backend
from .annealer import ChainState, ChainTrace, HypothesisWarning, StepRecord, accept_prob, run, step
from .cooling import CoolingSchedule, check_cooling, temperature_at
from .kernels import KernelSpec, ScaleSchedule, check_conditions
from .objectives import Objective, get_objective, list_objectives
from .sequences import DriverConfig, DriverPoint, SequenceDriver

BACKEND = _backend.NAME
__version__ = "0.1.0"

__all__ = [
    "BACKEND", "ChainState", "ChainTrace", "CoolingSchedule", "DriverConfig", "DriverPoint",
    "HypothesisWarning", "KernelSpec", "Objective", "ScaleSchedule", "SequenceDriver", "StepRecord",
    "accept_prob", "check_conditions", "check_cooling", "get_objective", "list_objectives", "run",
    "step", "temperature_at",
]
