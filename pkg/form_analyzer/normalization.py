"""
Normalization of a test stream against a reference stream.

Three stages make streams from different subjects and recordings comparable:
height scaling, body-centered re-coordinatization and resampling to the
reference frame count.
"""

import logging
import math
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from form_analyzer.exceptions import (
    FormAnalyzerError,
    NonPositiveHeightError,
    NormalizationStageError,
    TooFewSamplesError,
)
from form_analyzer.skeleton import JOINT_INDEX, JointId, MotionStream, resolve_height

logger = logging.getLogger("form_analyzer.normalization")

SNAP_FRACTION = 1e-9


class NormalizationConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    origin_joint: JointId = JointId.SPINE_BASE
    scale_enabled: bool = True
    recenter_enabled: bool = True
    resample_enabled: bool = True


class ScaleFactor(BaseModel):
    """Ratio of reference to test subject height."""

    model_config = ConfigDict(frozen=True)

    sf: float = Field(gt=0, allow_inf_nan=False)

    def __float__(self):
        return self.sf


def height_scale_factor(h_ref: float, h_test: float) -> ScaleFactor:
    """
    Scale factor mapping the test subject onto the reference subject's size.

    Raises:
        NonPositiveHeightError: If either height is not strictly positive.
    """
    for height in (h_ref, h_test):
        if not height > 0 or not math.isfinite(height):
            raise NonPositiveHeightError(height)
    return ScaleFactor(sf=h_ref / h_test)


def apply_scale(stream: MotionStream, sf: ScaleFactor) -> MotionStream:
    """Multiply every coordinate by the scale factor; timestamps are untouched."""
    factor = float(sf)
    return stream.replace(
        positions=stream.positions * factor,
        meta=stream.meta.with_note(f"scaled x{factor!r}"),
    )


def recenter(stream: MotionStream, origin_joint: JointId = JointId.SPINE_BASE) -> MotionStream:
    """Express every frame relative to ``origin_joint``, which lands on (0, 0, 0)."""
    stream.require_joints([origin_joint])
    origin = stream.positions[:, JOINT_INDEX[origin_joint], :]
    return stream.replace(
        positions=stream.positions - origin[:, np.newaxis, :],
        meta=stream.meta.with_note(f"recentered on {origin_joint.value}"),
    )


def resample(stream: MotionStream, target_count: int) -> MotionStream:
    """
    Resample a stream to ``target_count`` frames uniformly spaced in time.

    Each joint is linearly interpolated between the two bracketing input frames;
    the first and last frames, and any output instant that coincides with an
    input sample up to rounding, are carried over exactly. A joint counts as
    tracked in an output frame only if it was tracked in both bracketing frames.

    Raises:
        TooFewSamplesError: If the stream or the target has fewer than 2 frames.
    """
    count = len(stream)
    if count < 2:
        raise TooFewSamplesError(count, 2)
    if target_count < 2:
        raise TooFewSamplesError(target_count, 2)

    times = stream.times
    new_times = np.linspace(times[0], times[-1], target_count)

    left = np.clip(np.searchsorted(times, new_times, side="right") - 1, 0, count - 2)
    right = left + 1
    weight = (new_times - times[left]) / (times[right] - times[left])

    # output instants within SNAP_FRACTION of an input sample take that sample exactly
    weight[np.abs(weight) < SNAP_FRACTION] = 0.0
    weight[np.abs(weight - 1.0) < SNAP_FRACTION] = 1.0
    new_times = np.where(weight == 0.0, times[left], np.where(weight == 1.0, times[right], new_times))

    w = weight[:, np.newaxis, np.newaxis]
    positions = stream.positions[left] * (1.0 - w) + stream.positions[right] * w
    present = stream.present[left] & stream.present[right]
    for on_sample, source in ((weight == 0.0, left), (weight == 1.0, right)):
        positions[on_sample] = stream.positions[source[on_sample]]
        present[on_sample] = stream.present[source[on_sample]]

    logger.debug(f"Resampled {count} frames to {target_count}")
    return stream.replace(
        times=new_times,
        positions=positions,
        present=present,
        meta=stream.meta.with_note(f"resampled {count}->{target_count}"),
    )


def _run_stage(stage: str, func, *args):
    try:
        return func(*args)
    except FormAnalyzerError as e:
        error_msg = f"Normalization stage '{stage}' failed: {str(e)}"
        logger.error(error_msg)
        raise NormalizationStageError(stage, e) from e


def normalize_pair(
    ref: MotionStream,
    test: MotionStream,
    config: NormalizationConfig = NormalizationConfig(),
) -> Tuple[MotionStream, MotionStream]:
    """
    Normalize a reference/test pair for frame-by-frame comparison.

    The reference is only recentered. The test stream is scaled by the height
    ratio, recentered and resampled to the reference frame count, in that
    order. Disabled stages are skipped.

    Returns:
        tuple: (normalized reference, normalized test).

    Raises:
        NormalizationStageError: Wrapping the failure of any stage, labelled
            "height", "scale", "recenter" or "resample".
    """
    logger.info(f"Normalizing test stream ({len(test)} frames) against reference ({len(ref)} frames)")

    if config.scale_enabled:
        h_ref = _run_stage("height", resolve_height, ref)
        h_test = _run_stage("height", resolve_height, test)
        sf = _run_stage("scale", height_scale_factor, h_ref, h_test)
        logger.debug(f"Height scale factor {sf.sf:.6f} (ref {h_ref:.3f} m, test {h_test:.3f} m)")
        test = _run_stage("scale", apply_scale, test, sf)

    if config.recenter_enabled:
        ref = _run_stage("recenter", recenter, ref, config.origin_joint)
        test = _run_stage("recenter", recenter, test, config.origin_joint)

    if config.resample_enabled:
        test = _run_stage("resample", resample, test, len(ref))

    return ref, test
