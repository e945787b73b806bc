from typing import ClassVar, Tuple

import numpy as np
from pydantic import Field

from form_analyzer.synthgen.base_template import ARM_REACH, ExerciseKind, PressTemplate


class PushPress(PressTemplate):
    """Standing press from the front rack to overhead; the drive up is quicker than the descent."""

    kind: ClassVar[ExerciseKind] = ExerciseKind.PUSH_PRESS
    elbow_hint: ClassVar[Tuple[float, float, float]] = (0.3, -1.0, 0.0)

    up_fraction: float = Field(default=0.4, gt=0, lt=1)

    def start_offset(self):
        return np.array([0.04, 0.02, 0.10])

    def lockout_offset(self):
        return np.array([0.04, self.lockout_fraction * ARM_REACH, 0.02])
