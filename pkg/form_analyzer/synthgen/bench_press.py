from typing import ClassVar, Tuple

import numpy as np
from pydantic import Field

from form_analyzer.synthgen.base_template import ARM_REACH, SENSOR_DISTANCE_M, ExerciseKind, PressTemplate


class BenchPress(PressTemplate):
    """
    Supine press from the chest to straight arms.

    The subject lies on a bench along the depth axis, head away from the
    sensor, so the body's forward direction points up. Head-to-foot height
    estimation is meaningless in this pose; streams carry the height in
    metadata.
    """

    kind: ClassVar[ExerciseKind] = ExerciseKind.BENCH_PRESS
    elbow_hint: ClassVar[Tuple[float, float, float]] = (0.3, -0.3, -1.0)

    bench_height_m: float = Field(default=0.45, gt=0, lt=1.5)

    def start_offset(self):
        return np.array([0.05, -0.03, 0.06])

    def lockout_offset(self):
        return np.array([0.05, 0.0, self.lockout_fraction * ARM_REACH])

    def to_world(self, body):
        world = np.empty_like(body)
        world[..., 0] = body[..., 0]
        world[..., 1] = self.bench_height_m + body[..., 2]
        world[..., 2] = SENSOR_DISTANCE_M - 0.5 * self.subject_height_m + body[..., 1]
        return world
