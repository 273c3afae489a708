"""Experiment configuration: a flat JSON object with documented keys.

``R`` accepts an integer or the string ``"inf"``. Unknown keys are rejected.
``ExperimentConfig.effective()`` fills every default (including the digit
table's ``t`` and the centre ``x0``) so the echoed file reproduces a run.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields
from typing import List, Optional

from ..cooling import CoolingSchedule
from ..kernels import KernelSpec, ScaleSchedule
from ..objectives import Objective, get_objective
from ..sequences import DigitTable, DriverConfig, SequenceDriver, parse_level


class ConfigError(ValueError):
    """The configuration cannot be parsed or names something unknown."""


@dataclass
class ExperimentConfig:
    objective: str = "multicos"
    d: int = 2
    kernel: str = "student"          # student | asa
    nu: object = 1                   # integer >= 1 or "inf"
    schedule: str = "power"          # power | power-log | exp-power
    sigma0: float = 1.0
    beta: float = 0.5
    gamma: float = 0.0
    rate: float = 1.0
    root: int = 1
    adaptation: str = "every-step"   # every-step | blocks
    R: object = 0                    # integer >= 0 or "inf"
    b: int = 2
    t: Optional[int] = None
    cooling: str = "power"           # power | power-log
    T0: float = 1.0
    a: float = 2.0
    c: float = 3.0
    N: int = 1000
    replications: int = 1
    base_seed: int = 0
    x0: Optional[List[float]] = None
    checkpoints: Optional[List[int]] = None
    out: str = "out"
    stride: int = 1
    backend: Optional[str] = None

    def __post_init__(self):
        try:
            self._validate()
        except ConfigError:
            raise
        except (KeyError, ValueError, TypeError) as exc:
            raise ConfigError(str(exc)) from None

    def _validate(self):
        try:
            self.R = parse_level(self.R)
        except (TypeError, ValueError) as exc:
            raise ConfigError("R: %s" % exc) from None
        if isinstance(self.nu, str):
            if self.nu.strip().lower() != "inf":
                raise ConfigError("nu must be an integer or 'inf'")
            self.nu = math.inf
        if int(self.N) != self.N or self.N < 0:
            raise ConfigError("N must be a non-negative integer")
        if int(self.replications) != self.replications or self.replications < 1:
            raise ConfigError("replications must be >= 1")
        if self.stride < 1:
            raise ConfigError("stride must be >= 1")
        if self.backend not in (None, "cython", "python"):
            raise ConfigError("backend must be 'cython', 'python' or null")
        self.N = int(self.N)
        self.replications = int(self.replications)
        self.build_objective()
        self.build_cooling()
        self.build_kernel(self.t if self.t is not None else 0)
        DriverConfig(self.d, self.R, self.b, self.t, self.base_seed)
        if self.x0 is not None and len(self.x0) != self.d:
            raise ConfigError("x0 must have d=%d coordinates" % self.d)

    # -- builders -------------------------------------------------------------------

    def build_objective(self) -> Objective:
        return get_objective(self.objective, self.d)

    def build_cooling(self) -> CoolingSchedule:
        return CoolingSchedule(self.cooling, self.T0, self.a, self.c)

    def build_schedule(self) -> ScaleSchedule:
        return ScaleSchedule(self.schedule, self.sigma0, self.beta, self.gamma, self.rate, self.root)

    def build_kernel(self, t: int) -> KernelSpec:
        scheds = [self.build_schedule()] * self.d
        block = (self.b, self.d, self.R, t) if self.adaptation == "blocks" else None
        if self.kernel == "student":
            return KernelSpec.student(self.nu, scheds, adaptation=self.adaptation, block=block)
        if self.kernel == "asa":
            return KernelSpec.asa(scheds, adaptation=self.adaptation, block=block)
        raise ConfigError("unknown kernel %r" % self.kernel)

    def driver(self, replication: int) -> SequenceDriver:
        return SequenceDriver(DriverConfig(self.d, self.R, self.b, self.t, self.base_seed + replication))

    def table_t(self) -> int:
        if self.t is not None:
            return self.t
        return DigitTable.shipped(self.d, skip=1).t

    def start_point(self) -> List[float]:
        return list(self.x0) if self.x0 is not None else [0.5] * self.d

    def checkpoint_list(self) -> List[int]:
        raw = self.checkpoints if self.checkpoints is not None else [100, 1000, 10000, self.N]
        return sorted({int(c) for c in raw if 0 <= int(c) <= self.N} | {self.N})

    def effective(self) -> "ExperimentConfig":
        cfg = ExperimentConfig(**{f.name: getattr(self, f.name) for f in fields(self)})
        cfg.t = self.table_t()
        cfg.x0 = self.start_point()
        cfg.checkpoints = self.checkpoint_list()
        return cfg

    def to_dict(self) -> dict:
        out = asdict(self)
        out["R"] = "inf" if math.isinf(self.R) else int(self.R)
        out["nu"] = "inf" if math.isinf(float(self.nu)) else int(self.nu)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


KEYS = tuple(f.name for f in fields(ExperimentConfig))


def parse_config(text: str) -> ExperimentConfig:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("not valid JSON: %s" % exc) from None
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(raw) - set(KEYS))
    if unknown:
        raise ConfigError("unknown keys: %s" % ", ".join(unknown))
    nested = [k for k, v in raw.items() if isinstance(v, dict)]
    if nested:
        raise ConfigError("config must be flat; nested values for %s" % ", ".join(nested))
    try:
        return ExperimentConfig(**raw)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def load_config(path) -> ExperimentConfig:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError("cannot read %s: %s" % (path, exc)) from None
    return parse_config(text)
