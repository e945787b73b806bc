"""Frame-by-frame comparison of a test stream with a reference stream."""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Tuple

import numpy as np

from form_analyzer.exceptions import EmptySeriesError, FrameCountMismatchError
from form_analyzer.kinematics import FilterConfig, speed_profile
from form_analyzer.normalization import NormalizationConfig, normalize_pair
from form_analyzer.skeleton import JOINT_INDEX, JOINTS, JointId, MotionStream

logger = logging.getLogger("form_analyzer.analysis.comparison")


@dataclass(frozen=True, eq=False)
class ErrorSeries:
    """
    Per-frame, per-joint error traces on the normalized time grid.

    ``axis_error`` has shape (N, J, 3) holding |dx|, |dy|, |dz| in meters;
    ``ref_speed`` and ``test_speed`` have shape (N, J) in m/s. ``joints`` gives
    the J joints in canonical order.
    """

    times: np.ndarray
    joints: Tuple[JointId, ...]
    axis_error: np.ndarray
    ref_speed: np.ndarray
    test_speed: np.ndarray

    @property
    def n_frames(self) -> int:
        return len(self.times)

    @cached_property
    def position_error(self) -> np.ndarray:
        """Coordinate-wise (L1) position error, shape (N, J)."""
        return self.axis_error.sum(axis=-1)

    @cached_property
    def speed_error(self) -> np.ndarray:
        return np.abs(self.test_speed - self.ref_speed)

    def column(self, joint: JointId) -> int:
        return self.joints.index(joint)


def compare_motion(
    ref: MotionStream,
    test: MotionStream,
    relevant_joints: Iterable[JointId],
    norm_config: NormalizationConfig = NormalizationConfig(),
    config: FilterConfig = FilterConfig(),
) -> ErrorSeries:
    """
    Normalize the pair and compute position and speed errors of the relevant joints.

    Speeds are estimated on each normalized stream with its own timestamps, so
    a test performed at a different tempo shows up as speed error.

    Raises:
        EmptySeriesError: If no relevant joints are given.
        MissingJointError: If a relevant joint is absent from either stream.
        FrameCountMismatchError: If resampling is disabled and frame counts differ.
        NormalizationStageError: If a normalization stage fails.
    """
    wanted = set(relevant_joints)
    joints = tuple(joint for joint in JOINTS if joint in wanted)
    if not joints:
        raise EmptySeriesError("No relevant joints selected for comparison")

    ref.require_joints(joints)
    test.require_joints(joints)

    norm_ref, norm_test = normalize_pair(ref, test, norm_config)
    if len(norm_ref) != len(norm_test):
        raise FrameCountMismatchError(len(norm_ref), len(norm_test))

    columns = [JOINT_INDEX[joint] for joint in joints]
    ref_positions = norm_ref.positions[:, columns]
    test_positions = norm_test.positions[:, columns]

    errors = ErrorSeries(
        times=norm_ref.times,
        joints=joints,
        axis_error=np.abs(test_positions - ref_positions),
        ref_speed=speed_profile(norm_ref.times, ref_positions, config),
        test_speed=speed_profile(norm_test.times, test_positions, config),
    )
    logger.info(f"Compared {errors.n_frames} frames over {len(joints)} joint(s)")
    return errors
