"""
Base classes for parametric exercise templates and injectable form defects.

Templates build joint positions in a body frame (lateral, height above floor,
forward) scaled by subject height, then map them into sensor coordinates with
``to_world``. Only arm joints follow a trajectory; the rest of the body holds a
static pose.
"""

import logging
from abc import ABC, abstractmethod
from enum import Enum
from typing import ClassVar, Dict, FrozenSet, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from form_analyzer.exceptions import InvalidTemplateError
from form_analyzer.skeleton import CROWN_OFFSET_FACTOR, JOINT_INDEX, JOINTS, JointId

logger = logging.getLogger("form_analyzer.synthgen")

LEFT = -1.0
RIGHT = 1.0
SIDES = (LEFT, RIGHT)

SENSOR_DISTANCE_M = 2.5
DEFAULT_NOISE_SIGMA_M = 0.005

# Segment lengths as fractions of subject height.
UPPER_ARM = 0.186
FOREARM = 0.146
ARM_REACH = UPPER_ARM + FOREARM
HAND_LENGTH = 0.04
HAND_TIP_LENGTH = 0.09
THUMB_LENGTH = 0.05
THUMB_INSET = 0.02

# Rest pose in the body frame, fractions of subject height. Left side is -x.
_REST_POSE = {
    "SpineBase": (0.0, 0.53, 0.0),
    "SpineMid": (0.0, 0.63, 0.0),
    "SpineShoulder": (0.0, 0.80, 0.0),
    "Neck": (0.0, 0.85, 0.0),
    "Head": (0.0, 1.0 / CROWN_OFFSET_FACTOR, 0.0),
    "Shoulder": (0.12, 0.79, 0.0),
    "Elbow": (0.12, 0.79 - UPPER_ARM, 0.0),
    "Wrist": (0.12, 0.79 - UPPER_ARM - FOREARM, 0.0),
    "Hip": (0.05, 0.51, 0.0),
    "Knee": (0.05, 0.285, 0.0),
    "Ankle": (0.05, 0.039, 0.0),
    "Foot": (0.05, 0.0, 0.06),
}

HAND_STEMS = ("Wrist", "Hand", "HandTip", "Thumb")
ARM_STEMS = ("Shoulder", "Elbow") + HAND_STEMS


def side_joint(stem: str, side: float) -> JointId:
    return JointId(stem + ("Left" if side == LEFT else "Right"))


def both_sides(*stems: str) -> FrozenSet[JointId]:
    return frozenset(side_joint(stem, side) for stem in stems for side in SIDES)


class ExerciseKind(str, Enum):
    BICEP_CURL = "BicepCurl"
    PUSH_PRESS = "PushPress"
    BENCH_PRESS = "BenchPress"


class DefectKind(str, Enum):
    AMPLITUDE = "amplitude_error"
    LATERAL_DRIFT = "lateral_drift_m"
    TEMPO = "tempo_error"
    ASYMMETRY = "asymmetry_m"
    NOISE = "noise_sigma_m"


class DefectSpec(BaseModel):
    """
    Form faults injected into a template trajectory.

    amplitude_error: fractional overshoot of the far motion extreme.
    lateral_drift_m: peak sideways drift of the hands within each repetition.
    tempo_error: fraction by which the first half of a repetition is hurried.
    asymmetry_m: constant upward offset of the whole left arm.
    noise_sigma_m: standard deviation of per-coordinate Gaussian jitter.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    amplitude_error: float = Field(default=0.0, ge=0, allow_inf_nan=False)
    lateral_drift_m: float = Field(default=0.0, ge=0, allow_inf_nan=False)
    tempo_error: float = Field(default=0.0, ge=0, lt=1)
    asymmetry_m: float = Field(default=0.0, ge=0, allow_inf_nan=False)
    noise_sigma_m: float = Field(default=0.0, ge=0, allow_inf_nan=False)

    def with_magnitude(self, kind: DefectKind, magnitude: float) -> "DefectSpec":
        return self.model_validate({**self.model_dump(), kind.value: magnitude})


class ExerciseTemplate(BaseModel, ABC):
    """
    A parametric exercise performed for ``reps`` repetitions over ``duration_s``.

    Each repetition runs from the start position to the far extreme and back.
    ``up_fraction`` is the share of a repetition spent reaching the extreme.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: ClassVar[ExerciseKind]
    relevant_joints: ClassVar[FrozenSet[JointId]] = both_sides("Elbow", "Wrist", "Hand")
    working_joints: ClassVar[FrozenSet[JointId]] = both_sides(*HAND_STEMS)

    duration_s: float = Field(default=5.0, gt=0, allow_inf_nan=False)
    frame_rate_hz: float = Field(default=30.0, gt=0, allow_inf_nan=False)
    subject_height_m: float = Field(default=1.80, gt=0.5, lt=3.0)
    subject_id: str = "synthetic"
    reps: int = Field(default=1, ge=1)
    up_fraction: float = Field(default=0.5, gt=0, lt=1)

    @property
    def frame_count(self) -> int:
        return int(round(self.duration_s * self.frame_rate_hz))

    def check(self) -> None:
        """Raise InvalidTemplateError if the template cannot produce a stream."""
        if self.frame_count < 2:
            raise InvalidTemplateError(
                f"{self.kind.value}: duration {self.duration_s} s at {self.frame_rate_hz} Hz gives fewer than 2 frames"
            )
        self._check_parameters()

    def _check_parameters(self) -> None:
        pass

    def times(self) -> np.ndarray:
        return np.arange(self.frame_count) / self.frame_rate_hz

    def rep_fraction(self, times: np.ndarray) -> np.ndarray:
        """Position within the current repetition, in [0, 1)."""
        return np.mod(times * self.reps / self.duration_s, 1.0)

    def phase(self, times: np.ndarray, tempo_error: float = 0.0) -> np.ndarray:
        """
        Warped repetition phase: 0.5 is reached at ``up_fraction * (1 - tempo_error)``
        of the repetition, the remainder covers the return.
        """
        u = self.rep_fraction(times)
        turn = self.up_fraction * (1.0 - tempo_error)
        return np.where(u < turn, 0.5 * u / turn, 0.5 + 0.5 * (u - turn) / (1.0 - turn))

    @staticmethod
    def excursion(phase: np.ndarray) -> np.ndarray:
        """Fraction of the path travelled: 0 at the start, 1 at the far extreme."""
        return (1.0 - np.cos(2.0 * np.pi * phase)) / 2.0

    def rest_pose(self) -> np.ndarray:
        """Static body-frame pose in meters, shape (25, 3), ``JOINTS`` order."""
        pose = np.zeros((len(JOINTS), 3))
        for joint in JOINTS:
            name = joint.value
            if name in _REST_POSE:
                pose[JOINT_INDEX[joint]] = _REST_POSE[name]
                continue
            stem, side = (name[:-4], LEFT) if name.endswith("Left") else (name[:-5], RIGHT)
            if stem in _REST_POSE:
                x, h, f = _REST_POSE[stem]
                pose[JOINT_INDEX[joint]] = (side * x, h, f)
        pose *= self.subject_height_m

        # hanging hands continue straight down from the wrists
        for side in SIDES:
            wrist = pose[JOINT_INDEX[side_joint("Wrist", side)]]
            chain = self.hand_chain(wrist[np.newaxis], np.array([[0.0, -1.0, 0.0]]), side)
            for joint, positions in chain.items():
                pose[JOINT_INDEX[joint]] = positions[0]
        return pose

    def hand_chain(self, wrist: np.ndarray, direction: np.ndarray, side: float) -> Dict[JointId, np.ndarray]:
        """Hand, hand tip and thumb placed along the unit forearm ``direction`` from the wrist."""
        height = self.subject_height_m
        inset = np.array([-side * THUMB_INSET * height, 0.0, 0.0])
        return {
            side_joint("Hand", side): wrist + HAND_LENGTH * height * direction,
            side_joint("HandTip", side): wrist + HAND_TIP_LENGTH * height * direction,
            side_joint("Thumb", side): wrist + THUMB_LENGTH * height * direction + inset,
        }

    @abstractmethod
    def arm_pose(self, side: float, excursion: np.ndarray, amplitude_error: float) -> Tuple[np.ndarray, np.ndarray]:
        """
        Body-frame elbow and wrist trajectories for one arm.

        Args:
            side (float): LEFT or RIGHT.
            excursion (np.ndarray): Path fraction per frame, shape (N,).
            amplitude_error (float): Fractional overshoot of the far extreme.

        Returns:
            tuple: (elbow, wrist) positions in meters, each of shape (N, 3).
        """

    def to_world(self, body: np.ndarray) -> np.ndarray:
        """Upright subject facing the sensor: forward points toward the sensor (-z)."""
        world = np.empty_like(body)
        world[..., 0] = body[..., 0]
        world[..., 1] = body[..., 1]
        world[..., 2] = SENSOR_DISTANCE_M - body[..., 2]
        return world

    def affected_joints(self, defect: DefectKind) -> FrozenSet[JointId]:
        """Joints a defect of the given kind is allowed to move."""
        if defect in (DefectKind.AMPLITUDE, DefectKind.TEMPO):
            return self.working_joints
        if defect == DefectKind.LATERAL_DRIFT:
            return both_sides(*HAND_STEMS)
        if defect == DefectKind.ASYMMETRY:
            return frozenset(side_joint(stem, LEFT) for stem in ARM_STEMS)
        return frozenset(JOINTS)


class PressTemplate(ExerciseTemplate):
    """
    Straight-line press of the wrists from a start offset to a lockout offset.

    Offsets are body-frame fractions of subject height relative to the shoulder
    (lateral component pointing outward). The elbow is placed by two-link
    inverse kinematics, bending toward ``elbow_hint``.
    """

    working_joints: ClassVar[FrozenSet[JointId]] = both_sides("Elbow", *HAND_STEMS)
    elbow_hint: ClassVar[Tuple[float, float, float]]

    lockout_fraction: float = Field(default=0.72, gt=0, lt=1)

    @abstractmethod
    def start_offset(self) -> np.ndarray:
        """Wrist offset from the shoulder at the start of a repetition."""

    @abstractmethod
    def lockout_offset(self) -> np.ndarray:
        """Wrist offset from the shoulder at the far extreme."""

    def arm_pose(self, side, excursion, amplitude_error):
        height = self.subject_height_m
        mirror = np.array([side, 1.0, 1.0])
        shoulder = np.array(_REST_POSE["Shoulder"]) * mirror * height
        start = self.start_offset() * mirror * height
        path = (self.lockout_offset() - self.start_offset()) * mirror * height
        wrist = shoulder + start + ((1.0 + amplitude_error) * excursion)[:, np.newaxis] * path
        elbow = self._solve_elbow(shoulder, wrist, np.array(self.elbow_hint) * mirror)
        return elbow, wrist

    def _solve_elbow(self, shoulder: np.ndarray, wrist: np.ndarray, hint: np.ndarray) -> np.ndarray:
        upper = UPPER_ARM * self.subject_height_m
        fore = FOREARM * self.subject_height_m

        reach = wrist - shoulder
        distance = np.linalg.norm(reach, axis=1)
        distance = np.clip(distance, abs(upper - fore) * 1.001, (upper + fore) * 0.999)
        axis = reach / np.linalg.norm(reach, axis=1)[:, np.newaxis]

        along = (upper**2 - fore**2 + distance**2) / (2.0 * distance)
        across = np.sqrt(np.maximum(upper**2 - along**2, 0.0))

        bend = hint - (axis @ hint)[:, np.newaxis] * axis
        bend /= np.linalg.norm(bend, axis=1)[:, np.newaxis]
        return shoulder + along[:, np.newaxis] * axis + across[:, np.newaxis] * bend

    def _check_parameters(self):
        lockout = np.linalg.norm(self.lockout_offset())
        if lockout >= ARM_REACH:
            raise InvalidTemplateError(f"{self.kind.value}: lockout beyond arm reach")
