"""Rigid-motion group arithmetic and the correntropy kernel."""

from src.lie.kernel import KernelWidth, correntropy_loss, correntropy_terms, gaussian_kernel
from src.lie.se3 import (
    Motion,
    MotionValidation,
    Twist,
    compose,
    exp_twist,
    frobenius_residual,
    inverse,
    log_motion,
    validate_motion,
)

__all__ = [
    "Motion",
    "Twist",
    "MotionValidation",
    "compose",
    "inverse",
    "validate_motion",
    "log_motion",
    "exp_twist",
    "frobenius_residual",
    "KernelWidth",
    "gaussian_kernel",
    "correntropy_loss",
    "correntropy_terms",
]
