from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from src.core.config import settings


@dataclass(frozen=True)
class KernelWidth:
    """Gaussian kernel width, clamped below at `floor`."""

    sigma: float
    floor: float = field(default_factory=lambda: settings.sigma_floor)

    def __post_init__(self):
        if not math.isfinite(self.sigma):
            raise ValueError(f"kernel width must be finite, got {self.sigma}")
        if self.floor <= 0:
            raise ValueError(f"sigma floor must be positive, got {self.floor}")
        if self.sigma < self.floor:
            object.__setattr__(self, "sigma", float(self.floor))
        else:
            object.__setattr__(self, "sigma", float(self.sigma))

    @classmethod
    def adaptive(cls, alpha: float, residual_error: float, floor: float | None = None) -> KernelWidth:
        """sigma_k = alpha * e_{M,k}."""
        return cls(alpha * residual_error, settings.sigma_floor if floor is None else floor)


def _width(sigma: KernelWidth | float) -> float:
    return sigma.sigma if isinstance(sigma, KernelWidth) else KernelWidth(float(sigma)).sigma


def gaussian_kernel(e, sigma: KernelWidth | float):
    """G_sigma(e) = exp(-e^2 / (2 sigma^2)); scalar in, float out."""
    s = _width(sigma)
    value = np.exp(-np.square(e) / (2.0 * s * s))
    if np.ndim(value) == 0:
        return float(value)
    return value


def correntropy_terms(residuals, sigma: KernelWidth | float) -> np.ndarray:
    """Per-residual summands sigma^2 (1 - G_sigma(e)), each bounded by sigma^2."""
    s = _width(sigma)
    e = np.asarray(residuals, dtype=np.float64).reshape(-1)
    return s * s * (1.0 - np.exp(-np.square(e) / (2.0 * s * s)))


def correntropy_loss(residuals, sigma: KernelWidth | float) -> float:
    return math.fsum(correntropy_terms(residuals, sigma).tolist())
