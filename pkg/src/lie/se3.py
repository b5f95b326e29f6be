"""
SE(3) motions, se(3) twists and the exponential / logarithm maps between them.

Closed forms are used throughout: Rodrigues for the rotation block and the
left Jacobian V(theta) (and its inverse) for the translation block. Below
SMALL_ANGLE the trigonometric coefficients switch to their Taylor series.

Twists are packed rotation first: [omega; u].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from src.core.config import settings
from src.core.errors import AngleNearPi

SMALL_ANGLE = 1e-6

_I3 = np.eye(3)


def _frozen(a: np.ndarray | list | tuple, shape: tuple[int, ...], name: str) -> np.ndarray:
    arr = np.array(a, dtype=np.float64)
    if arr.shape != shape:
        raise ValueError(f"{name} must have shape {shape}, got {arr.shape}")
    arr.setflags(write=False)
    return arr


def hat(w: np.ndarray) -> np.ndarray:
    """Skew-symmetric matrix of a 3-vector."""
    return np.array(
        [
            [0.0, -w[2], w[1]],
            [w[2], 0.0, -w[0]],
            [-w[1], w[0], 0.0],
        ]
    )


def vee(m: np.ndarray) -> np.ndarray:
    return np.array([m[2, 1], m[0, 2], m[1, 0]])


@dataclass(frozen=True, eq=False)
class Motion:
    """Rigid transformation x -> r @ x + t."""

    r: np.ndarray
    t: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        object.__setattr__(self, "r", _frozen(self.r, (3, 3), "r"))
        object.__setattr__(self, "t", _frozen(self.t, (3,), "t"))

    @classmethod
    def identity(cls) -> Motion:
        return cls(_I3, np.zeros(3))

    @classmethod
    def translation(cls, x: float, y: float, z: float) -> Motion:
        return cls(_I3, np.array([x, y, z], dtype=np.float64))

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> Motion:
        m = np.asarray(m, dtype=np.float64)
        if m.shape != (4, 4):
            raise ValueError(f"homogeneous matrix must be 4x4, got {m.shape}")
        return cls(m[:3, :3], m[:3, 3])

    @property
    def matrix(self) -> np.ndarray:
        out = np.eye(4)
        out[:3, :3] = self.r
        out[:3, 3] = self.t
        return out

    def __matmul__(self, other: Motion) -> Motion:
        return compose(self, other)

    def __repr__(self) -> str:
        return f"Motion(r={self.r.tolist()}, t={self.t.tolist()})"


@dataclass(frozen=True, eq=False)
class Twist:
    """Element of se(3) as its 6 parameters."""

    omega: np.ndarray
    u: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        object.__setattr__(self, "omega", _frozen(self.omega, (3,), "omega"))
        object.__setattr__(self, "u", _frozen(self.u, (3,), "u"))

    @classmethod
    def zero(cls) -> Twist:
        return cls(np.zeros(3), np.zeros(3))

    @classmethod
    def from_vector(cls, v: np.ndarray) -> Twist:
        v = np.asarray(v, dtype=np.float64)
        if v.shape != (6,):
            raise ValueError(f"twist vector must have shape (6,), got {v.shape}")
        return cls(v[:3], v[3:])

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([self.omega, self.u])

    @property
    def angle(self) -> float:
        return float(np.linalg.norm(self.omega))

    def __repr__(self) -> str:
        return f"Twist(omega={self.omega.tolist()}, u={self.u.tolist()})"


@dataclass(frozen=True)
class MotionValidation:
    ok: bool
    failures: tuple[str, ...] = ()

    @property
    def reason(self) -> str:
        return "ok" if self.ok else ", ".join(self.failures)


def compose(a: Motion, b: Motion) -> Motion:
    """Homogeneous product a * b."""
    return Motion(a.r @ b.r, a.r @ b.t + a.t)


def inverse(m: Motion) -> Motion:
    rt = m.r.T
    return Motion(rt, -(rt @ m.t))


def validate_motion(m: Motion, tol: float | None = None) -> MotionValidation:
    """Check finiteness, orthonormality and det(r) = +1 without raising."""
    tol = settings.motion_tolerance if tol is None else tol

    if not (np.all(np.isfinite(m.r)) and np.all(np.isfinite(m.t))):
        return MotionValidation(ok=False, failures=("non-finite",))

    failures: list[str] = []
    if float(np.max(np.abs(m.r.T @ m.r - _I3))) > tol:
        failures.append("orthonormality")
    if abs(float(np.linalg.det(m.r)) - 1.0) > tol:
        failures.append("determinant")

    return MotionValidation(ok=not failures, failures=tuple(failures))


def _rotation_coefficients(theta: float) -> tuple[float, float, float]:
    # sin(t)/t, (1 - cos t)/t^2, (t - sin t)/t^3
    if theta < SMALL_ANGLE:
        t2 = theta * theta
        return 1.0 - t2 / 6.0, 0.5 - t2 / 24.0, 1.0 / 6.0 - t2 / 120.0
    half = math.sin(theta / 2.0)
    return (
        math.sin(theta) / theta,
        2.0 * half * half / (theta * theta),
        (theta - math.sin(theta)) / theta**3,
    )


def exp_twist(x: Twist) -> Motion:
    theta = x.angle
    w = hat(x.omega)
    w2 = w @ w
    a, b, c = _rotation_coefficients(theta)

    r = _I3 + a * w + b * w2
    v = _I3 + b * w + c * w2
    return Motion(r, v @ x.u)


def log_motion(m: Motion, angle_guard: float | None = None) -> Twist:
    """
    Inverse of exp_twist for rotations below pi - angle_guard.

    The angle comes from atan2(|sin|, cos) rather than arccos of the trace,
    which keeps full precision near 0.
    """
    guard = settings.angle_guard if angle_guard is None else angle_guard

    s_vec = 0.5 * vee(m.r - m.r.T)
    cos_theta = 0.5 * (float(np.trace(m.r)) - 1.0)
    sin_theta = float(np.linalg.norm(s_vec))
    theta = math.atan2(sin_theta, cos_theta)

    if theta >= math.pi - guard:
        raise AngleNearPi(theta, guard)

    if theta < SMALL_ANGLE:
        omega = (1.0 + theta * theta / 6.0) * s_vec
        d = 1.0 / 12.0 + theta * theta / 720.0
    else:
        omega = (theta / sin_theta) * s_vec
        half = 0.5 * theta
        d = (1.0 - half / math.tan(half)) / (theta * theta)

    w = hat(omega)
    v_inv = _I3 - 0.5 * w + d * (w @ w)
    return Twist(omega, v_inv @ m.t)


def frobenius_residual(rel: Motion, mi: Motion, mj: Motion) -> float:
    """|| rel - mi^-1 mj ||_F over the full 4x4 homogeneous matrices."""
    predicted = compose(inverse(mi), mj)
    return float(np.linalg.norm(rel.matrix - predicted.matrix))
