"""Static pose matching: compare joint angles of a frame against a reference frame."""

import logging
from typing import Dict, FrozenSet, List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from form_analyzer.kinematics import DEFAULT_ADJACENCY, AdjacencyMap, angle_profile, joint_angle
from form_analyzer.skeleton import JOINTS, Frame, JointId, MotionStream

logger = logging.getLogger("form_analyzer.analysis.pose")


class PoseMatchConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    joints: FrozenSet[JointId] = Field(default=frozenset(DEFAULT_ADJACENCY), min_length=1)
    tolerance_deg: float = Field(default=10.0, gt=0, allow_inf_nan=False)


class PoseMatchResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    per_joint_error_deg: Dict[JointId, float]
    matched: bool

    @property
    def max_error_deg(self) -> float:
        return max(self.per_joint_error_deg.values())


def match_pose(
    frame: Frame,
    reference: Frame,
    adjacency: AdjacencyMap = DEFAULT_ADJACENCY,
    config: PoseMatchConfig = PoseMatchConfig(),
) -> PoseMatchResult:
    """
    Compare the angles of the configured joints in ``frame`` with ``reference``.

    The pose matches when every absolute angle difference is within
    ``config.tolerance_deg``. Errors are reported in canonical joint order.
    """
    errors = {}
    for joint in JOINTS:
        if joint in config.joints:
            errors[joint] = abs(joint_angle(frame, joint, adjacency) - joint_angle(reference, joint, adjacency))
    matched = all(error <= config.tolerance_deg for error in errors.values())
    return PoseMatchResult(per_joint_error_deg=errors, matched=matched)


def match_stream(
    stream: MotionStream,
    reference: Frame,
    adjacency: AdjacencyMap = DEFAULT_ADJACENCY,
    config: PoseMatchConfig = PoseMatchConfig(),
) -> List[PoseMatchResult]:
    """
    Run :func:`match_pose` against every frame of ``stream``.

    Angles are computed column-wise over the stream, so a MissingJointError or
    DegenerateGeometryError in any frame fails the whole scan.
    """
    joints = [joint for joint in JOINTS if joint in config.joints]
    reference_angles = np.array([joint_angle(reference, joint, adjacency) for joint in joints])
    angles = np.column_stack([angle_profile(stream, joint, adjacency) for joint in joints])
    errors = np.abs(angles - reference_angles)
    matched = (errors <= config.tolerance_deg).all(axis=1)

    results = [
        PoseMatchResult(per_joint_error_deg=dict(zip(joints, row)), matched=bool(flag))
        for row, flag in zip(errors.tolist(), matched.tolist())
    ]
    logger.debug(f"Pose matched in {int(matched.sum())} of {len(results)} frames")
    return results
