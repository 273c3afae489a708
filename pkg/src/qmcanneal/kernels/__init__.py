"""Proposal kernels, scale schedules and the convergence-condition checker."""
from .conditions import ConditionReport, ConditionResult, check_conditions
from .proposals import (
    ASA,
    STUDENT,
    KernelSpec,
    asa_density,
    asa_generator,
    asa_inv_cdf,
    density,
    effective_index,
    inv_rosenblatt,
    lipschitz_constant,
    rosenblatt,
    student_constant,
    student_density,
    student_inv_cdf,
    tilde_K_coord,
    tilde_K_lower,
)
from .schedules import SIGMA_MIN, ScaleSchedule, sigma_at

__all__ = [
    "ASA", "STUDENT", "SIGMA_MIN", "ConditionReport", "ConditionResult", "KernelSpec",
    "ScaleSchedule", "asa_density", "asa_generator", "asa_inv_cdf", "check_conditions",
    "density", "effective_index", "inv_rosenblatt", "lipschitz_constant", "rosenblatt",
    "sigma_at", "student_constant", "student_density", "student_inv_cdf", "tilde_K_coord",
    "tilde_K_lower",
]
