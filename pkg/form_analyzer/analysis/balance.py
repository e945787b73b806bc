"""Balance: relative height and depth of paired left/right joints."""

import logging
from typing import Dict

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from form_analyzer.exceptions import EmptySeriesError, NonPositiveHeightError
from form_analyzer.skeleton import JOINT_PAIRS, MotionStream

logger = logging.getLogger("form_analyzer.analysis.balance")


class PairImbalance(BaseModel):
    model_config = ConfigDict(frozen=True)

    vertical_imbalance_m: float = Field(ge=0)
    depth_imbalance_m: float = Field(ge=0)


class BalanceReport(BaseModel):
    """
    Per-pair imbalance plus the height-normalized aggregate ``e_b``.

    ``e_b`` is the mean of all vertical and depth imbalances divided by the
    subject height, so it is dimensionless.
    """

    model_config = ConfigDict(frozen=True)

    height_m: float = Field(gt=0)
    pairs: Dict[str, PairImbalance]
    e_b: float = Field(ge=0)


def _aggregate(pairs: Dict[str, PairImbalance], height_m: float) -> float:
    values = [p.vertical_imbalance_m for p in pairs.values()] + [p.depth_imbalance_m for p in pairs.values()]
    return float(np.mean(values)) / height_m


def balance_analyze(stream: MotionStream, height_m: float) -> BalanceReport:
    """
    Mean absolute height (y) and depth (z) differences of each joint pair.

    Raises:
        NonPositiveHeightError: If ``height_m`` is not positive.
        MissingJointError: If a paired joint is absent from any frame.
    """
    if not height_m > 0:
        raise NonPositiveHeightError(height_m)
    if len(stream) == 0:
        raise EmptySeriesError("Cannot analyze balance of an empty stream")

    pairs = {}
    for name, (left, right) in JOINT_PAIRS.items():
        stream.require_joints([left, right])
        difference = np.abs(stream.joint_positions(left) - stream.joint_positions(right))
        pairs[name] = PairImbalance(
            vertical_imbalance_m=float(np.mean(difference[:, 1])),
            depth_imbalance_m=float(np.mean(difference[:, 2])),
        )

    report = BalanceReport(height_m=height_m, pairs=pairs, e_b=_aggregate(pairs, height_m))
    logger.debug(f"Balance aggregate {report.e_b:.6f} for {stream.meta.subject_id}")
    return report


def balance_difference(test: BalanceReport, reference: BalanceReport) -> BalanceReport:
    """
    Imbalance of ``test`` relative to ``reference``.

    Each pair holds the absolute difference of the two subjects'
    height-normalized imbalances, expressed in the test subject's meters.
    """
    ratio = test.height_m / reference.height_m
    pairs = {}
    for name, pair in test.pairs.items():
        ref_pair = reference.pairs[name]
        pairs[name] = PairImbalance(
            vertical_imbalance_m=abs(pair.vertical_imbalance_m - ref_pair.vertical_imbalance_m * ratio),
            depth_imbalance_m=abs(pair.depth_imbalance_m - ref_pair.depth_imbalance_m * ratio),
        )
    return BalanceReport(height_m=test.height_m, pairs=pairs, e_b=_aggregate(pairs, test.height_m))
