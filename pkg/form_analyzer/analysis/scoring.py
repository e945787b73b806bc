"""Weighted performance score over position, speed and balance errors."""

import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from form_analyzer.analysis.balance import BalanceReport
from form_analyzer.analysis.comparison import ErrorSeries
from form_analyzer.exceptions import EmptySeriesError

logger = logging.getLogger("form_analyzer.analysis.scoring")


class ScoreWeights(BaseModel):
    """
    Weights of the three error terms.

    The terms carry different units (m, m/s, dimensionless); the weights are
    the user's means of balancing them.
    """

    model_config = ConfigDict(frozen=True)

    w_p: float = Field(default=1.0, ge=0, allow_inf_nan=False)
    w_s: float = Field(default=1.0, ge=0, allow_inf_nan=False)
    w_b: float = Field(default=1.0, ge=0, allow_inf_nan=False)

    @model_validator(mode="after")
    def _not_all_zero(self):
        if self.w_p == 0 and self.w_s == 0 and self.w_b == 0:
            raise ValueError("At least one score weight must be positive")
        return self

    @classmethod
    def from_string(cls, text: str) -> "ScoreWeights":
        """Parse "wp,ws,wb"."""
        parts = [part.strip() for part in text.split(",")]
        if len(parts) != 3:
            raise ValueError(f"Expected three comma-separated weights, got {text!r}")
        w_p, w_s, w_b = (float(part) for part in parts)
        return cls(w_p=w_p, w_s=w_s, w_b=w_b)


class PerformanceScore(BaseModel):
    model_config = ConfigDict(frozen=True)

    e_p_m: float = Field(ge=0)
    e_s_mps: float = Field(ge=0)
    e_b: float = Field(ge=0)
    weights: ScoreWeights
    ps: float = Field(ge=0)


def score_components(e_p: float, e_s: float, e_b: float, weights: ScoreWeights = ScoreWeights()) -> PerformanceScore:
    """Combine averaged errors; the weighted sum is divided by 3 whatever the weights."""
    ps = (weights.w_p * e_p + weights.w_s * e_s + weights.w_b * e_b) / 3
    return PerformanceScore(e_p_m=e_p, e_s_mps=e_s, e_b=e_b, weights=weights, ps=ps)


def performance_score(
    errors: ErrorSeries,
    balance: BalanceReport,
    weights: ScoreWeights = ScoreWeights(),
) -> PerformanceScore:
    """
    Average the error traces over frames and joints and combine them with the balance error.

    Raises:
        EmptySeriesError: If the error series has no frames or no joints.
    """
    if errors.n_frames == 0 or not errors.joints:
        raise EmptySeriesError("Cannot score an empty error series")

    score = score_components(
        float(np.mean(errors.position_error)),
        float(np.mean(errors.speed_error)),
        balance.e_b,
        weights,
    )
    logger.info(
        f"Performance score {score.ps:.6f} (E_p={score.e_p_m:.6f} m, "
        f"E_s={score.e_s_mps:.6f} m/s, E_b={score.e_b:.6f})"
    )
    return score
