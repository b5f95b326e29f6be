from __future__ import annotations

from typing import Literal

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="MCC_", env_file=".env", env_file_encoding="utf-8")

    # Solver defaults (alpha = 1 is the recommended kernel-width multiplier)
    alpha: float = 1.0
    max_iterations: int = 50
    change_tolerance: float = 1e-10
    sigma_floor: float = 1e-12
    mode: Literal["mcc", "plain", "fixed_weights"] = "mcc"
    gauge: Literal["discard", "anchor"] = "discard"

    # Numeric guards
    angle_guard: float = 1e-6
    motion_tolerance: float = 1e-9
    quaternion_tolerance: float = 1e-3

    # Dense rank-revealing solve up to this many unknowns, sparse LSMR beyond
    dense_solve_max_columns: int = 600

    # Scenario defaults
    views: int = 15
    density: float = 0.45
    rot_noise_deg: float = 0.3
    trans_noise: float = 0.05
    outliers: float = 0.15
    seed: int = 0

    workers: int = 1


settings = Settings()
