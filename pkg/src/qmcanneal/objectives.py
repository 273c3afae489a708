"""Benchmark objectives on [0,1]^d with known maxima.

All registered objectives have phi* = 0 attained at the centre of the cube.
``tag`` records which smoothness assumption the objective meets:
``"D1-global"`` (continuous everywhere, level sets of bounded Minkowski
content) or ``"Thm1-local"`` (continuous on a ball around the maximiser only).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

THM1_LOCAL = "Thm1-local"
D1_GLOBAL = "D1-global"

# builtin codes understood by the compiled core
SPHERE_CODE, MULTICOS_CODE, STEPMAX_CODE = 0, 1, 2


@dataclass(frozen=True)
class Objective:
    name: str
    d: int
    evaluator: Callable[[np.ndarray], np.ndarray]
    phi_star: float = 0.0
    argmax: Tuple[Tuple[float, ...], ...] = ()
    tag: str = D1_GLOBAL
    code: int = -1
    description: str = ""

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("d must be >= 1")
        if self.tag not in (THM1_LOCAL, D1_GLOBAL):
            raise ValueError("unknown assumption tag %r" % self.tag)
        if not self.argmax:
            object.__setattr__(self, "argmax", ((0.5,) * self.d,))

    def __call__(self, x) -> float:
        return eval_objective(self, x)

    def batch(self, xs) -> np.ndarray:
        """Evaluate on an ``(m, d)`` array of points in the cube."""
        xs = np.asarray(xs, dtype=np.float64)
        if xs.ndim != 2 or xs.shape[1] != self.d:
            raise ValueError("expected an (m, %d) array" % self.d)
        if np.any((xs < 0.0) | (xs > 1.0)) or not np.all(np.isfinite(xs)):
            raise ValueError("points outside [0,1]^%d" % self.d)
        return np.asarray(self.evaluator(xs), dtype=np.float64)


def eval_objective(obj: Objective, x) -> float:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (obj.d,):
        raise ValueError("expected a point of dimension %d, got shape %s" % (obj.d, x.shape))
    if not np.all(np.isfinite(x)) or np.any((x < 0.0) | (x > 1.0)):
        raise ValueError("point %s lies outside [0,1]^%d" % (x.tolist(), obj.d))
    return float(obj.evaluator(x[None, :])[0])


def _sphere(xs):
    z = xs - 0.5
    return -np.sum(z * z, axis=1)


def _multicos(xs):
    z = xs - 0.5
    return -np.sum(z * z - 0.1 * np.cos(6.0 * math.pi * z) + 0.1, axis=1)


def _stepmax(xs):
    dist = np.max(np.abs(xs - 0.5), axis=1)
    # discontinuous penalty away from the maximiser
    odd = (np.floor(10.0 * xs).astype(np.int64) % 2 == 1).sum(axis=1)
    pen = 0.1 * (xs[:, 0] > 0.75) + 0.05 * odd
    return np.where(dist <= 0.1, -dist, -0.2 - pen)


_REGISTRY: Dict[str, dict] = {
    "sphere": dict(evaluator=_sphere, tag=D1_GLOBAL, code=SPHERE_CODE,
                   description="-sum (x_i - 1/2)^2"),
    "multicos": dict(evaluator=_multicos, tag=D1_GLOBAL, code=MULTICOS_CODE,
                     description="-sum [(x_i - 1/2)^2 - 0.1 cos(6 pi (x_i - 1/2)) + 0.1], separable multimodal"),
    "step-near-max": dict(evaluator=_stepmax, tag=THM1_LOCAL, code=STEPMAX_CODE,
                          description="-|x - c|_inf within 0.1 of the centre, piecewise constant below -0.2 elsewhere"),
}


def list_objectives() -> List[dict]:
    return [dict(name=k, phi_star=0.0, argmax="centre", tag=v["tag"], description=v["description"])
            for k, v in _REGISTRY.items()]


def get_objective(name: str, d: int) -> Objective:
    try:
        entry = _REGISTRY[name]
    except KeyError:
        raise KeyError("unknown objective %r; known: %s" % (name, ", ".join(_REGISTRY))) from None
    return Objective(name=name, d=int(d), **entry)


def custom_objective(func: Callable[[np.ndarray], float], d: int, phi_star: float,
                     argmax: Optional[Tuple[Tuple[float, ...], ...]] = None,
                     tag: str = D1_GLOBAL, name: str = "custom") -> Objective:
    """Wrap a pointwise callable. Runs through the Python callback path of the core."""
    def evaluator(xs):
        return np.array([func(row) for row in xs], dtype=np.float64)
    return Objective(name=name, d=d, evaluator=evaluator, phi_star=phi_star,
                     argmax=tuple(argmax or ()), tag=tag)
