"""Deterministic synthetic motion streams with injectable defects and seeded noise."""

import logging
from typing import List, Sequence

import numpy as np

from form_analyzer.exceptions import InvalidTemplateError
from form_analyzer.skeleton import JOINT_INDEX, MotionStream, StreamMeta
from form_analyzer.synthgen.base_template import (
    SIDES,
    DefectKind,
    DefectSpec,
    ExerciseTemplate,
    side_joint,
    HAND_STEMS,
)

logger = logging.getLogger("form_analyzer.synthgen.generator")

MAX_SEED = 2**64 - 1


def generate(template: ExerciseTemplate, defects: DefectSpec = DefectSpec(), seed: int = 0) -> MotionStream:
    """
    Generate a full 25-joint stream from a template.

    Defects are applied in a fixed order: tempo and amplitude shape the arm
    path, lateral drift moves the hands, asymmetry lifts the left arm, and
    noise is added last, drawn frame by frame in canonical joint order.

    Raises:
        InvalidTemplateError: If the template is invalid or the seed is not a
            64-bit unsigned integer.
    """
    template.check()
    if not 0 <= int(seed) <= MAX_SEED:
        raise InvalidTemplateError(f"Seed must be a 64-bit unsigned integer, got {seed}")

    times = template.times()
    count = len(times)
    excursion = template.excursion(template.phase(times, defects.tempo_error))

    body = np.tile(template.rest_pose(), (count, 1, 1))
    for side in SIDES:
        elbow, wrist = template.arm_pose(side, excursion, defects.amplitude_error)
        forearm = wrist - elbow
        direction = forearm / np.linalg.norm(forearm, axis=1)[:, np.newaxis]
        body[:, JOINT_INDEX[side_joint("Elbow", side)]] = elbow
        body[:, JOINT_INDEX[side_joint("Wrist", side)]] = wrist
        for joint, positions in template.hand_chain(wrist, direction, side).items():
            body[:, JOINT_INDEX[joint]] = positions

    if defects.lateral_drift_m > 0:
        envelope = np.sin(np.pi * template.rep_fraction(times))
        for side in SIDES:
            for stem in HAND_STEMS:
                body[:, JOINT_INDEX[side_joint(stem, side)], 0] += side * defects.lateral_drift_m * envelope

    world = template.to_world(body)

    if defects.asymmetry_m > 0:
        for joint in template.affected_joints(DefectKind.ASYMMETRY):
            world[:, JOINT_INDEX[joint], 1] += defects.asymmetry_m

    if defects.noise_sigma_m > 0:
        rng = np.random.default_rng(int(seed))
        world += rng.normal(0.0, defects.noise_sigma_m, size=world.shape)

    meta = StreamMeta(
        subject_id=template.subject_id,
        height_m=template.subject_height_m,
        frame_rate_hz=template.frame_rate_hz,
        exercise_tag=template.kind.value,
        provenance=(f"synthgen seed={int(seed)}",),
    )
    logger.debug(f"Generated {count} frames of {template.kind.value} with {defects.model_dump()}")
    return MotionStream(meta=meta, times=times, positions=world)


def defect_ladder(
    template: ExerciseTemplate,
    defect_kind: DefectKind,
    magnitudes: Sequence[float],
    seed: int = 0,
    base: DefectSpec = DefectSpec(),
) -> List[MotionStream]:
    """
    One stream per defect magnitude, all sharing the seed and every other defect setting.

    Raises:
        ValueError: If ``magnitudes`` is empty or not strictly increasing.
    """
    magnitudes = [float(m) for m in magnitudes]
    if not magnitudes or any(b <= a for a, b in zip(magnitudes, magnitudes[1:])):
        raise ValueError(f"Magnitudes must be a non-empty strictly increasing list, got {magnitudes}")

    defect_kind = DefectKind(defect_kind)
    logger.info(f"Building {defect_kind.value} ladder over {magnitudes}")
    return [generate(template, base.with_magnitude(defect_kind, m), seed) for m in magnitudes]
