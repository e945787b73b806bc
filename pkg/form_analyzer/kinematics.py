"""
Joint angles, speed estimation and moving-average smoothing.

Angles are measured on raw positions; smoothing is applied to the resulting
angle and speed series, never to the positions themselves.
"""

import logging
from typing import Dict, List, Mapping, NamedTuple, Sequence, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from pydantic import BaseModel, ConfigDict, Field

from form_analyzer.exceptions import (
    DegenerateGeometryError,
    EmptySeriesError,
    NoAdjacencyError,
    TooFewSamplesError,
)
from form_analyzer.skeleton import Frame, JointId, MotionStream, Position3

logger = logging.getLogger("form_analyzer.kinematics")

MIN_VECTOR_NORM_M = 1e-9

AdjacencyMap = Mapping[JointId, Tuple[JointId, JointId]]

DEFAULT_ADJACENCY: Dict[JointId, Tuple[JointId, JointId]] = {
    JointId.ELBOW_LEFT: (JointId.SHOULDER_LEFT, JointId.WRIST_LEFT),
    JointId.ELBOW_RIGHT: (JointId.SHOULDER_RIGHT, JointId.WRIST_RIGHT),
    JointId.KNEE_LEFT: (JointId.HIP_LEFT, JointId.ANKLE_LEFT),
    JointId.KNEE_RIGHT: (JointId.HIP_RIGHT, JointId.ANKLE_RIGHT),
    JointId.SHOULDER_LEFT: (JointId.SPINE_SHOULDER, JointId.ELBOW_LEFT),
    JointId.SHOULDER_RIGHT: (JointId.SPINE_SHOULDER, JointId.ELBOW_RIGHT),
    JointId.HIP_LEFT: (JointId.SPINE_BASE, JointId.KNEE_LEFT),
    JointId.HIP_RIGHT: (JointId.SPINE_BASE, JointId.KNEE_RIGHT),
    JointId.ANKLE_LEFT: (JointId.KNEE_LEFT, JointId.FOOT_LEFT),
    JointId.ANKLE_RIGHT: (JointId.KNEE_RIGHT, JointId.FOOT_RIGHT),
    JointId.SPINE_MID: (JointId.SPINE_SHOULDER, JointId.SPINE_BASE),
}


def build_adjacency(entries: Mapping[JointId, Tuple[JointId, JointId]]) -> Dict[JointId, Tuple[JointId, JointId]]:
    """Validate and copy an adjacency map; upper, lower and target must be distinct."""
    adjacency = {}
    for target, (upper, lower) in entries.items():
        target, upper, lower = JointId(target), JointId(upper), JointId(lower)
        if len({target, upper, lower}) != 3:
            raise ValueError(f"Adjacency for {target} must name three distinct joints")
        adjacency[target] = (upper, lower)
    return adjacency


class FilterConfig(BaseModel):
    """Centered moving average: window of 2n+1 samples, applied ``passes`` times."""

    model_config = ConfigDict(frozen=True)

    half_width: int = Field(default=2, ge=0)
    passes: int = Field(default=2, ge=1)


class AngleSample(NamedTuple):
    t: float
    value: float


class SpeedSample(NamedTuple):
    t: float
    value: float


def _angle_between(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    # atan2 of |u x v| and u.v stays accurate near 0 and 180 degrees
    cross = np.linalg.norm(np.cross(u, v), axis=-1)
    dot = np.einsum("...i,...i->...", u, v)
    return np.degrees(np.arctan2(cross, dot))


def _usable(vectors: np.ndarray) -> np.ndarray:
    """Limb vectors with a finite length above MIN_VECTOR_NORM_M."""
    norm = np.linalg.norm(vectors, axis=-1)
    return np.isfinite(norm) & (norm > MIN_VECTOR_NORM_M)


def _adjacent(target: JointId, adjacency: AdjacencyMap) -> Tuple[JointId, JointId]:
    try:
        return adjacency[target]
    except KeyError:
        raise NoAdjacencyError(target) from None


def joint_angle(frame: Frame, target: JointId, adjacency: AdjacencyMap = DEFAULT_ADJACENCY) -> float:
    """
    Angle at ``target`` between the vectors to its adjacent upper and lower joints.

    Args:
        frame (Frame): The frame to measure.
        target (JointId): The joint at the vertex of the angle.
        adjacency (AdjacencyMap): Map of target joint to its (upper, lower) joints.

    Returns:
        float: The angle in degrees, in [0, 180].

    Raises:
        NoAdjacencyError: If ``target`` has no adjacency entry.
        MissingJointError: If any of the three joints is absent from the frame.
        DegenerateGeometryError: If either limb vector is shorter than 1e-9 m
            or has a non-finite length.
    """
    upper, lower = _adjacent(target, adjacency)
    vertex = np.asarray(frame.position(target))
    u = np.asarray(frame.position(upper)) - vertex
    v = np.asarray(frame.position(lower)) - vertex
    if not (_usable(u) and _usable(v)):
        raise DegenerateGeometryError(target)
    return float(_angle_between(u, v))


def angle_profile(stream: MotionStream, target: JointId, adjacency: AdjacencyMap = DEFAULT_ADJACENCY) -> np.ndarray:
    """Unsmoothed per-frame angles at ``target``, shape (N,)."""
    upper, lower = _adjacent(target, adjacency)
    stream.require_joints([target, upper, lower])

    vertex = stream.joint_positions(target)
    u = stream.joint_positions(upper) - vertex
    v = stream.joint_positions(lower) - vertex
    degenerate = ~(_usable(u) & _usable(v))
    if degenerate.any():
        raise DegenerateGeometryError(target, int(np.argmax(degenerate)))
    return _angle_between(u, v)


def smooth_array(values: np.ndarray, config: FilterConfig = FilterConfig()) -> np.ndarray:
    """
    Centered moving average along axis 0, repeated ``config.passes`` times.

    The window is clipped to the series bounds, so edge samples average fewer
    neighbours and the output keeps the input length.
    """
    values = np.asarray(values, dtype=float)
    if values.shape[0] == 0:
        raise EmptySeriesError("Cannot smooth an empty series")

    n = config.half_width
    if n == 0:
        return values.copy()

    length = values.shape[0]
    index = np.arange(length)
    counts = np.minimum(index + n, length - 1) - np.maximum(index - n, 0) + 1
    counts = counts.reshape((length,) + (1,) * (values.ndim - 1))

    pad = [(n, n)] + [(0, 0)] * (values.ndim - 1)
    result = values
    for _ in range(config.passes):
        windows = sliding_window_view(np.pad(result, pad), 2 * n + 1, axis=0)
        result = windows.sum(axis=-1) / counts
    return result


def smooth_series(values: Sequence[float], config: FilterConfig = FilterConfig()) -> List[float]:
    """List form of :func:`smooth_array` for a scalar series."""
    return smooth_array(np.asarray(values, dtype=float), config).tolist()


def speed_profile(times: np.ndarray, positions: np.ndarray, config: FilterConfig = FilterConfig()) -> np.ndarray:
    """
    Smoothed speed magnitudes from positions sampled at ``times``.

    Args:
        times (np.ndarray): Strictly increasing timestamps, shape (N,).
        positions (np.ndarray): Positions of shape (N, 3) or (N, J, 3).
        config (FilterConfig): Smoothing applied to the raw speeds.

    Returns:
        np.ndarray: Speeds in m/s with shape (N,) or (N, J).

    Raises:
        TooFewSamplesError: If fewer than two samples are given.
    """
    times = np.asarray(times, dtype=float)
    positions = np.asarray(positions, dtype=float)
    if len(times) < 2:
        raise TooFewSamplesError(len(times), 2)

    velocity = np.empty_like(positions)
    dt_shape = (-1,) + (1,) * (positions.ndim - 1)
    velocity[1:-1] = (positions[2:] - positions[:-2]) / (times[2:] - times[:-2]).reshape(dt_shape)
    velocity[0] = (positions[1] - positions[0]) / (times[1] - times[0])
    velocity[-1] = (positions[-1] - positions[-2]) / (times[-1] - times[-2])
    return smooth_array(np.linalg.norm(velocity, axis=-1), config)


def speed_series(samples: Sequence[Tuple[float, Position3]], config: FilterConfig = FilterConfig()) -> List[SpeedSample]:
    """Smoothed speed of a single joint trajectory given as (t, position) samples."""
    if len(samples) < 2:
        raise TooFewSamplesError(len(samples), 2)
    times = np.array([t for t, _ in samples], dtype=float)
    positions = np.array([tuple(p) for _, p in samples], dtype=float)
    speeds = speed_profile(times, positions, config)
    return [SpeedSample(t, s) for t, s in zip(times.tolist(), speeds.tolist())]


def angle_series(
    stream: MotionStream,
    target: JointId,
    adjacency: AdjacencyMap = DEFAULT_ADJACENCY,
    config: FilterConfig = FilterConfig(),
) -> List[AngleSample]:
    """Smoothed per-frame angle at ``target`` over a whole stream."""
    if len(stream) == 0:
        raise EmptySeriesError("Cannot compute angles of an empty stream")
    angles = smooth_array(angle_profile(stream, target, adjacency), config)
    return [AngleSample(t, a) for t, a in zip(stream.times.tolist(), angles.tolist())]
