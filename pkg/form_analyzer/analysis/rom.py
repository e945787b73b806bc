"""
Range of motion against population standards.

Standards for an average healthy adult (degrees):

    Lumbar spine   lateral flexion 35   hyperextension 20
    Elbow          flexion 140          hyperextension 10
    Shoulder       abduction 180        adduction 50
                   flexion 180          extension 50
    Ankle          dorsiflexion 20      plantar flexion 50

Each motion is measured with the adjacency angle at the selected joint, which
is a proxy for the anatomical plane of that motion.
"""

import logging
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from form_analyzer.exceptions import EmptySeriesError
from form_analyzer.kinematics import DEFAULT_ADJACENCY, AdjacencyMap, FilterConfig, angle_profile, smooth_array
from form_analyzer.skeleton import JointId, MotionStream

logger = logging.getLogger("form_analyzer.analysis.rom")


class JointRegion(str, Enum):
    LUMBAR_SPINE = "LumbarSpine"
    ELBOW = "Elbow"
    SHOULDER = "Shoulder"
    ANKLE = "Ankle"


class MotionType(str, Enum):
    LATERAL_FLEXION = "LateralFlexion"
    HYPER_EXTENSION = "HyperExtension"
    FLEXION = "Flexion"
    EXTENSION = "Extension"
    ABDUCTION = "Abduction"
    ADDUCTION = "Adduction"
    DORSIFLEXION = "Dorsiflexion"
    PLANTAR_FLEXION = "PlantarFlexion"


class RomStandard(BaseModel):
    model_config = ConfigDict(frozen=True)

    joint_region: JointRegion
    motion_type: MotionType
    standard_deg: float = Field(gt=0)


ROM_STANDARDS: Tuple[RomStandard, ...] = tuple(
    RomStandard(joint_region=region, motion_type=motion, standard_deg=degrees)
    for region, motion, degrees in (
        (JointRegion.LUMBAR_SPINE, MotionType.LATERAL_FLEXION, 35.0),
        (JointRegion.LUMBAR_SPINE, MotionType.HYPER_EXTENSION, 20.0),
        (JointRegion.ELBOW, MotionType.FLEXION, 140.0),
        (JointRegion.ELBOW, MotionType.HYPER_EXTENSION, 10.0),
        (JointRegion.SHOULDER, MotionType.ABDUCTION, 180.0),
        (JointRegion.SHOULDER, MotionType.ADDUCTION, 50.0),
        (JointRegion.SHOULDER, MotionType.FLEXION, 180.0),
        (JointRegion.SHOULDER, MotionType.EXTENSION, 50.0),
        (JointRegion.ANKLE, MotionType.DORSIFLEXION, 20.0),
        (JointRegion.ANKLE, MotionType.PLANTAR_FLEXION, 50.0),
    )
)

_REGION_BY_JOINT = {
    JointId.SPINE_MID: JointRegion.LUMBAR_SPINE,
    JointId.ELBOW_LEFT: JointRegion.ELBOW,
    JointId.ELBOW_RIGHT: JointRegion.ELBOW,
    JointId.SHOULDER_LEFT: JointRegion.SHOULDER,
    JointId.SHOULDER_RIGHT: JointRegion.SHOULDER,
    JointId.ANKLE_LEFT: JointRegion.ANKLE,
    JointId.ANKLE_RIGHT: JointRegion.ANKLE,
}


def region_for_joint(joint: JointId) -> Optional[JointRegion]:
    """Region of the standards table measured at ``joint``, or None."""
    return _REGION_BY_JOINT.get(joint)


def rom_standard(region: JointRegion, motion: MotionType) -> RomStandard:
    """
    Look up a standard range of motion.

    Raises:
        KeyError: If the table has no entry for the region/motion pair.
    """
    for standard in ROM_STANDARDS:
        if standard.joint_region == region and standard.motion_type == motion:
            return standard
    raise KeyError(f"No range-of-motion standard for {region.value} {motion.value}")


class RomReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    joint: JointId
    joint_region: JointRegion
    motion_type: MotionType
    min_angle_deg: float
    max_angle_deg: float
    observed_range_deg: float = Field(ge=0)
    standard_deg: float
    deviation_deg: float = Field(ge=0)


def rom_analyze(
    stream: MotionStream,
    target: JointId,
    standard: RomStandard,
    adjacency: AdjacencyMap = DEFAULT_ADJACENCY,
    config: FilterConfig = FilterConfig(),
) -> RomReport:
    """
    Measure the angular range travelled by ``target`` and compare it with a standard.

    The observed range is max - min of the smoothed angle series. Falling short
    of the standard is the deviation; exceeding it is not penalised.
    """
    if len(stream) == 0:
        raise EmptySeriesError("Cannot measure range of motion of an empty stream")

    angles = smooth_array(angle_profile(stream, target, adjacency), config)
    low, high = float(np.min(angles)), float(np.max(angles))
    observed = high - low
    deviation = max(0.0, standard.standard_deg - observed)

    logger.info(
        f"{target.value} {standard.motion_type.value}: observed {observed:.2f} deg, "
        f"standard {standard.standard_deg:.0f} deg, deviation {deviation:.2f} deg"
    )
    return RomReport(
        joint=target,
        joint_region=standard.joint_region,
        motion_type=standard.motion_type,
        min_angle_deg=low,
        max_angle_deg=high,
        observed_range_deg=observed,
        standard_deg=standard.standard_deg,
        deviation_deg=deviation,
    )
