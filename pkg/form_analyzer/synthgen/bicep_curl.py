from typing import ClassVar

import numpy as np
from pydantic import Field

from form_analyzer.exceptions import InvalidTemplateError
from form_analyzer.skeleton import JOINT_INDEX
from form_analyzer.synthgen.base_template import FOREARM, ExerciseKind, ExerciseTemplate, side_joint


class BicepCurl(ExerciseTemplate):
    """
    Two-arm curl with the upper arms hanging still.

    The elbow angle sweeps ``min_deg`` -> ``max_deg`` -> ``min_deg`` along a
    cosine profile; the forearm swings in the sagittal plane.
    """

    kind: ClassVar[ExerciseKind] = ExerciseKind.BICEP_CURL

    min_deg: float = Field(default=10.0, ge=0, le=180)
    max_deg: float = Field(default=150.0, ge=0, le=180)

    def _check_parameters(self):
        if self.min_deg >= self.max_deg:
            raise InvalidTemplateError(f"BicepCurl: min_deg {self.min_deg} must be below max_deg {self.max_deg}")

    def elbow_angle(self, excursion: np.ndarray, amplitude_error: float = 0.0) -> np.ndarray:
        """Closed-form elbow angle in degrees, clipped to [0, 180]."""
        sweep = (self.max_deg - self.min_deg) * (1.0 + amplitude_error)
        return np.clip(self.min_deg + sweep * excursion, 0.0, 180.0)

    def arm_pose(self, side, excursion, amplitude_error):
        rest = self.rest_pose()
        elbow = np.tile(rest[JOINT_INDEX[side_joint("Elbow", side)]], (len(excursion), 1))

        theta = np.radians(self.elbow_angle(excursion, amplitude_error))
        direction = np.stack([np.zeros_like(theta), np.cos(theta), np.sin(theta)], axis=1)
        wrist = elbow + FOREARM * self.subject_height_m * direction
        return elbow, wrist
