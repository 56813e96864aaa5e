"""Configuration-space edge metrics and 1-D time-optimal motion profiles.

Three metrics price a move between two joint vectors: a weighted Euclidean
joint distance, the bottleneck joint displacement scaled by velocity limits
(seconds), and the duration of a synchronized straight-line joint move under
velocity and acceleration limits (seconds). All three ignore obstacles by
design; they exist to be cheap enough to evaluate on every edge of the
selection graph. The ideal edge cost, the duration of a time-optimal
collision-free trajectory, is intentionally not implemented here; the linear
interpolation duration is its obstacle-free surrogate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .model import Configuration, RobotModel


class MetricKind(str, Enum):
    """The three supported configuration-space metrics."""

    WEIGHTED_EUCLIDEAN = "weighted_euclidean"
    MAX_JOINT_DIFFERENCE = "max_joint_difference"
    LINEAR_INTERP_DURATION = "linear_interp_duration"


@dataclass(frozen=True)
class MetricParams:
    """Per-joint weights and limits consumed by the metrics."""

    weights: np.ndarray
    vel_max: np.ndarray
    acc_max: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))
        object.__setattr__(self, "vel_max", np.asarray(self.vel_max, dtype=float))
        object.__setattr__(self, "acc_max", np.asarray(self.acc_max, dtype=float))
        sizes = {self.weights.size, self.vel_max.size, self.acc_max.size}
        if len(sizes) != 1:
            raise ValueError(f"weights/vel_max/acc_max length mismatch: {sizes}")

    @classmethod
    def from_robot(cls, robot: RobotModel) -> "MetricParams":
        """Derive params from a robot; weights default to link reach (planar) or 1."""
        if robot.weights is not None:
            weights = robot.weights
        elif robot.is_planar:
            weights = default_weights(robot)
        else:
            weights = np.ones(robot.dof)
        return cls(weights=weights, vel_max=robot.vel_max, acc_max=robot.acc_max)


def _deltas(q: Configuration, q_to: Configuration) -> np.ndarray:
    a = np.asarray(q, dtype=float)
    b = np.asarray(q_to, dtype=float)
    if a.size != b.size:
        raise ValueError(f"configuration length mismatch: {a.size} vs {b.size}")
    return b - a


def weighted_euclidean(q: Configuration, q_to: Configuration, weights) -> float:
    """sqrt(sum_k w_k (q'_k - q_k)^2); weights multiply the squared difference."""
    delta = _deltas(q, q_to)
    weights = np.asarray(weights, dtype=float)
    if weights.size != delta.size:
        raise ValueError(f"weights length mismatch: {weights.size} vs {delta.size}")
    total = 0.0
    for k in range(delta.size):
        total += weights[k] * delta[k] * delta[k]
    return math.sqrt(total)


def max_joint_difference(q: Configuration, q_to: Configuration, vel_max) -> float:
    """Bottleneck travel time max_k |q'_k - q_k| / vel_max_k (seconds)."""
    delta = _deltas(q, q_to)
    vel_max = np.asarray(vel_max, dtype=float)
    if vel_max.size != delta.size:
        raise ValueError(f"vel_max length mismatch: {vel_max.size} vs {delta.size}")
    return float(np.max(np.abs(delta) / vel_max))


def trapezoid_duration_1d(delta: float, vmax: float, amax: float) -> float:
    """Minimal time to move a single joint by ``delta`` under speed/accel caps.

    Long moves follow a trapezoidal speed profile, short ones a triangular
    profile that never reaches ``vmax``; the two agree at the boundary
    distance vmax^2/amax.
    """
    if vmax <= 0.0 or amax <= 0.0:
        raise ValueError("vmax and amax must be positive")
    dist = abs(delta)
    if dist >= vmax * vmax / amax:
        return dist / vmax + vmax / amax
    return 2.0 * math.sqrt(dist / amax)


def linear_interp_duration(q: Configuration, q_to: Configuration, vel_max, acc_max) -> float:
    """Duration of a synchronized straight joint-space move (slowest joint paces all)."""
    delta = _deltas(q, q_to)
    vel_max = np.asarray(vel_max, dtype=float)
    acc_max = np.asarray(acc_max, dtype=float)
    if vel_max.size != delta.size or acc_max.size != delta.size:
        raise ValueError("vel_max/acc_max length mismatch")
    return max(
        trapezoid_duration_1d(float(delta[k]), float(vel_max[k]), float(acc_max[k]))
        for k in range(delta.size)
    )


def default_weights(robot: RobotModel) -> np.ndarray:
    """Joint weights proportional to the reach moved by each joint: w_k = sum_{j>=k} L_j."""
    if robot.planar_links is None:
        raise ValueError("default_weights needs a planar arm")
    return np.cumsum(robot.planar_links[::-1])[::-1].copy()


def edge_cost(kind: MetricKind, params: MetricParams, q: Configuration, q_to: Configuration) -> float:
    """Dispatch to the metric selected by ``kind``."""
    kind = MetricKind(kind)
    if kind is MetricKind.WEIGHTED_EUCLIDEAN:
        return weighted_euclidean(q, q_to, params.weights)
    if kind is MetricKind.MAX_JOINT_DIFFERENCE:
        return max_joint_difference(q, q_to, params.vel_max)
    return linear_interp_duration(q, q_to, params.vel_max, params.acc_max)


def pairwise_cost(kind: MetricKind, params: MetricParams, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Cost matrix between configuration stacks ``a`` (ma x dof) and ``b`` (mb x dof).

    Vectorized companion of :func:`edge_cost`, used to price whole graph
    layers at once; entries match the scalar metric bit for bit (same
    formulas, same branch conditions).
    """
    kind = MetricKind(kind)
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    diff = a[:, None, :] - b[None, :, :]
    if kind is MetricKind.WEIGHTED_EUCLIDEAN:
        return np.sqrt(np.sum(params.weights * diff * diff, axis=-1))
    if kind is MetricKind.MAX_JOINT_DIFFERENCE:
        return np.max(np.abs(diff) / params.vel_max, axis=-1)
    dist = np.abs(diff)
    vel, acc = params.vel_max, params.acc_max
    times = np.where(
        dist >= vel * vel / acc,
        dist / vel + vel / acc,
        2.0 * np.sqrt(dist / acc),
    )
    return np.max(times, axis=-1)
