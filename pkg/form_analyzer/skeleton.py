"""
Skeleton data model: joints, frames, motion streams, validation and height.

Coordinates follow the depth-sensor convention: y is vertical (up), z is depth
(away from the sensor) and x is lateral, all in meters.
"""

import dataclasses
import logging
import types
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator

from form_analyzer.exceptions import MissingJointError, NonPositiveHeightError

logger = logging.getLogger("form_analyzer.skeleton")

# The Head joint sits below the crown of the skull.
CROWN_OFFSET_FACTOR = 1.06


class JointId(str, Enum):
    """The 25 joints of the depth-sensor body skeleton; values are the canonical file names."""

    SPINE_BASE = "SpineBase"
    SPINE_MID = "SpineMid"
    SPINE_SHOULDER = "SpineShoulder"
    NECK = "Neck"
    HEAD = "Head"
    SHOULDER_LEFT = "ShoulderLeft"
    ELBOW_LEFT = "ElbowLeft"
    WRIST_LEFT = "WristLeft"
    HAND_LEFT = "HandLeft"
    HAND_TIP_LEFT = "HandTipLeft"
    THUMB_LEFT = "ThumbLeft"
    SHOULDER_RIGHT = "ShoulderRight"
    ELBOW_RIGHT = "ElbowRight"
    WRIST_RIGHT = "WristRight"
    HAND_RIGHT = "HandRight"
    HAND_TIP_RIGHT = "HandTipRight"
    THUMB_RIGHT = "ThumbRight"
    HIP_LEFT = "HipLeft"
    KNEE_LEFT = "KneeLeft"
    ANKLE_LEFT = "AnkleLeft"
    FOOT_LEFT = "FootLeft"
    HIP_RIGHT = "HipRight"
    KNEE_RIGHT = "KneeRight"
    ANKLE_RIGHT = "AnkleRight"
    FOOT_RIGHT = "FootRight"

    def __str__(self):
        return self.value


JOINTS: Tuple[JointId, ...] = tuple(JointId)
JOINT_COUNT = len(JOINTS)
JOINT_INDEX: Dict[JointId, int] = {joint: index for index, joint in enumerate(JOINTS)}

# Left/right homologous joints compared by balance analysis.
JOINT_PAIRS: Dict[str, Tuple[JointId, JointId]] = {
    "Shoulders": (JointId.SHOULDER_LEFT, JointId.SHOULDER_RIGHT),
    "Elbows": (JointId.ELBOW_LEFT, JointId.ELBOW_RIGHT),
    "Hips": (JointId.HIP_LEFT, JointId.HIP_RIGHT),
    "Knees": (JointId.KNEE_LEFT, JointId.KNEE_RIGHT),
    "Ankles": (JointId.ANKLE_LEFT, JointId.ANKLE_RIGHT),
}

HEIGHT_JOINTS = (JointId.HEAD, JointId.FOOT_LEFT, JointId.FOOT_RIGHT)


class Position3(NamedTuple):
    x: float
    y: float
    z: float


@dataclass(frozen=True)
class Frame:
    """One time sample: timestamp plus the positions of the joints tracked in it."""

    t: float
    joints: Mapping[JointId, Position3]

    def __post_init__(self):
        object.__setattr__(self, "joints", types.MappingProxyType(dict(self.joints)))

    def position(self, joint: JointId, frame_index: Optional[int] = None) -> Position3:
        try:
            return self.joints[joint]
        except KeyError:
            raise MissingJointError(joint, frame_index) from None


class StreamMeta(BaseModel):
    """Subject and recording metadata attached to a stream."""

    model_config = ConfigDict(frozen=True)

    subject_id: str = "unknown"
    height_m: Optional[float] = Field(default=None, allow_inf_nan=False)
    frame_rate_hz: float = Field(default=30.0, gt=0, allow_inf_nan=False)
    exercise_tag: str = ""
    provenance: Tuple[str, ...] = ()

    @field_validator("height_m")
    @classmethod
    def _height_in_range(cls, value):
        if value is not None and not 0.5 < value < 3.0:
            raise ValueError(f"height_m must lie in (0.5, 3.0), got {value}")
        return value

    def with_note(self, note: str) -> "StreamMeta":
        """Return a copy with a provenance note appended."""
        return self.model_copy(update={"provenance": self.provenance + (note,)})


class IssueCode(str, Enum):
    EMPTY_STREAM = "EmptyStream"
    NON_MONOTONE_TIME = "NonMonotoneTime"
    NEGATIVE_TIME = "NegativeTime"
    NON_FINITE_TIME = "NonFiniteTime"
    MISSING_JOINT = "MissingJoint"
    NON_FINITE_COORDINATE = "NonFiniteCoordinate"
    UNKNOWN_JOINT = "UnknownJoint"


class ValidationIssue(BaseModel):
    model_config = ConfigDict(frozen=True)

    frame_index: Optional[int]
    code: IssueCode
    detail: str = ""


class ValidationReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    issues: Tuple[ValidationIssue, ...] = ()

    @computed_field
    @property
    def ok(self) -> bool:
        return not self.issues


@dataclass(frozen=True, eq=False)
class MotionStream:
    """
    Timestamped sequence of skeleton frames plus subject metadata.

    Frames are stored column-wise: ``times`` has shape (N,), ``positions`` has
    shape (N, 25, 3) in ``JOINTS`` order and ``present`` marks which joints were
    tracked in each frame (untracked positions hold NaN). All arrays are
    read-only after construction.

    ``unknown_joints`` keeps (frame_index, name) for joint names the reader did
    not recognise so validation can report them.
    """

    meta: StreamMeta
    times: np.ndarray
    positions: np.ndarray
    present: Optional[np.ndarray] = None
    unknown_joints: Tuple[Tuple[int, str], ...] = ()

    def __post_init__(self):
        times = np.array(self.times, dtype=float).reshape(-1)
        positions = np.array(self.positions, dtype=float).reshape(len(times), JOINT_COUNT, 3)
        if self.present is None:
            present = np.ones((len(times), JOINT_COUNT), dtype=bool)
        else:
            present = np.array(self.present, dtype=bool).reshape(len(times), JOINT_COUNT)
        positions[~present] = np.nan

        for array in (times, positions, present):
            array.setflags(write=False)

        object.__setattr__(self, "times", times)
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "present", present)
        object.__setattr__(self, "unknown_joints", tuple(self.unknown_joints))

    @classmethod
    def from_frames(cls, meta: StreamMeta, frames: Sequence[Frame]) -> "MotionStream":
        """Build a stream from per-frame joint maps."""
        times = np.array([frame.t for frame in frames], dtype=float)
        positions = np.full((len(frames), JOINT_COUNT, 3), np.nan)
        present = np.zeros((len(frames), JOINT_COUNT), dtype=bool)
        for i, frame in enumerate(frames):
            for joint, position in frame.joints.items():
                j = JOINT_INDEX[JointId(joint)]
                positions[i, j] = position
                present[i, j] = True
        return cls(meta=meta, times=times, positions=positions, present=present)

    def __len__(self):
        return len(self.times)

    def __eq__(self, other):
        if not isinstance(other, MotionStream):
            return NotImplemented
        return (
            self.meta == other.meta
            and self.unknown_joints == other.unknown_joints
            and np.array_equal(self.times, other.times)
            and np.array_equal(self.present, other.present)
            and np.array_equal(self.positions, other.positions, equal_nan=True)
        )

    @cached_property
    def frames(self) -> Tuple[Frame, ...]:
        return tuple(self.frame(i) for i in range(len(self)))

    def frame(self, index: int) -> Frame:
        joints = {
            joint: Position3(*self.positions[index, j].tolist())
            for j, joint in enumerate(JOINTS)
            if self.present[index, j]
        }
        return Frame(t=float(self.times[index]), joints=joints)

    def joint_positions(self, joint: JointId) -> np.ndarray:
        """Positions of one joint over the stream, shape (N, 3)."""
        return self.positions[:, JOINT_INDEX[joint]]

    def first_missing(self, joint: JointId) -> Optional[int]:
        """Index of the first frame lacking ``joint``, or None if it is tracked throughout."""
        missing = np.flatnonzero(~self.present[:, JOINT_INDEX[joint]])
        return int(missing[0]) if missing.size else None

    def require_joints(self, joints) -> None:
        """Raise MissingJointError for the first joint absent from any frame."""
        for joint in joints:
            index = self.first_missing(joint)
            if index is not None:
                raise MissingJointError(joint, index)

    def replace(self, **changes) -> "MotionStream":
        return dataclasses.replace(self, **changes)


def validate_stream(stream: MotionStream) -> ValidationReport:
    """
    Check a stream for structural problems without raising.

    Reports an empty stream, non-finite, negative or non-increasing timestamps,
    untracked joints, non-finite coordinates and unrecognised joint names.
    """
    issues: List[ValidationIssue] = []
    times = stream.times

    if len(stream) == 0:
        issues.append(ValidationIssue(frame_index=None, code=IssueCode.EMPTY_STREAM, detail="stream has no frames"))

    for i in np.flatnonzero(~np.isfinite(times)):
        issues.append(ValidationIssue(frame_index=int(i), code=IssueCode.NON_FINITE_TIME, detail=f"t={times[i]}"))
    for i in np.flatnonzero(times < 0):
        issues.append(ValidationIssue(frame_index=int(i), code=IssueCode.NEGATIVE_TIME, detail=f"t={times[i]}"))
    for i in np.flatnonzero(~(np.diff(times) > 0)):
        issues.append(ValidationIssue(
            frame_index=int(i) + 1,
            code=IssueCode.NON_MONOTONE_TIME,
            detail=f"t={times[i + 1]} does not follow t={times[i]}",
        ))

    for i, j in np.argwhere(~stream.present):
        issues.append(ValidationIssue(frame_index=int(i), code=IssueCode.MISSING_JOINT, detail=JOINTS[j].value))

    non_finite = stream.present & ~np.isfinite(stream.positions).all(axis=2)
    for i, j in np.argwhere(non_finite):
        issues.append(ValidationIssue(frame_index=int(i), code=IssueCode.NON_FINITE_COORDINATE, detail=JOINTS[j].value))

    for i, name in stream.unknown_joints:
        issues.append(ValidationIssue(frame_index=i, code=IssueCode.UNKNOWN_JOINT, detail=name))

    issues.sort(key=lambda issue: -1 if issue.frame_index is None else issue.frame_index)
    if issues:
        logger.debug(f"Validation found {len(issues)} issue(s) in stream of {stream.meta.subject_id}")
    return ValidationReport(issues=tuple(issues))


def estimate_height(frame: Frame) -> float:
    """
    Estimate standing height from the head-to-lowest-foot vertical extent.

    Returns 0.0 for degenerate poses (head level with or below the feet); the
    caller must treat that as an unusable height.
    """
    head = frame.position(JointId.HEAD)
    foot_y = min(frame.position(JointId.FOOT_LEFT).y, frame.position(JointId.FOOT_RIGHT).y)
    return max((head.y - foot_y) * CROWN_OFFSET_FACTOR, 0.0)


def resolve_height(stream: MotionStream) -> float:
    """Subject height: the metadata value if present, otherwise estimated from the first usable frame."""
    if stream.meta.height_m is not None:
        return stream.meta.height_m

    columns = [JOINT_INDEX[joint] for joint in HEIGHT_JOINTS]
    usable = stream.present[:, columns].all(axis=1) & np.isfinite(stream.positions[:, columns]).all(axis=(1, 2))
    if not usable.any():
        for joint in HEIGHT_JOINTS:
            index = stream.first_missing(joint)
            if index is not None:
                raise MissingJointError(joint, index)
        raise MissingJointError(JointId.HEAD, 0)

    first = int(np.argmax(usable))
    height = estimate_height(stream.frame(first))
    if height <= 0:
        error_msg = f"Estimated height {height} from frame {first} is not usable"
        logger.error(error_msg)
        raise NonPositiveHeightError(height)
    logger.debug(f"Estimated height {height:.3f} m from frame {first}")
    return height


def joint_series(stream: MotionStream, joint: JointId) -> List[Tuple[float, Position3]]:
    """Timestamped positions of one joint, in frame order."""
    stream.require_joints([joint])
    return [
        (t, Position3(*position))
        for t, position in zip(stream.times.tolist(), stream.joint_positions(joint).tolist())
    ]
