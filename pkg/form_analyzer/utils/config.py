"""
Defaults for the command-line analyses.

Settings come from built-in defaults, overridden by an INI file (section
``[form_analyzer]``) found via ``--config`` or the ``FORM_ANALYZER_CONFIG``
environment variable, overridden in turn by explicit flags.
"""

import configparser
import logging
import os
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from form_analyzer.analysis.scoring import ScoreWeights
from form_analyzer.kinematics import FilterConfig
from form_analyzer.skeleton import JointId
from form_analyzer.synthgen.base_template import DEFAULT_NOISE_SIGMA_M

logger = logging.getLogger("form_analyzer.config")

CONFIG_ENV_VAR = "FORM_ANALYZER_CONFIG"
CONFIG_SECTION = "form_analyzer"


class AnalyzerSettings(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    half_width: int = Field(default=2, ge=0)
    passes: int = Field(default=2, ge=1)
    tolerance_deg: float = Field(default=10.0, gt=0, allow_inf_nan=False)
    origin_joint: JointId = JointId.SPINE_BASE
    weights: ScoreWeights = ScoreWeights()
    noise_sigma_m: float = Field(default=DEFAULT_NOISE_SIGMA_M, ge=0, allow_inf_nan=False)
    seed: int = Field(default=0, ge=0, le=2**64 - 1)

    @field_validator("weights", mode="before")
    @classmethod
    def _parse_weights(cls, value):
        if isinstance(value, str):
            return ScoreWeights.from_string(value)
        return value

    @property
    def filter_config(self) -> FilterConfig:
        return FilterConfig(half_width=self.half_width, passes=self.passes)

    def merged(self, **overrides) -> "AnalyzerSettings":
        """Return settings with the non-None overrides applied and validated."""
        updates = {key: value for key, value in overrides.items() if value is not None}
        if not updates:
            return self
        return AnalyzerSettings.model_validate({**self.model_dump(), **updates})


def load_settings(path: Optional[str] = None) -> AnalyzerSettings:
    """
    Load settings from an INI file.

    Args:
        path (str, optional): Config file path. Falls back to the
            ``FORM_ANALYZER_CONFIG`` environment variable; without either the
            built-in defaults are returned.

    Returns:
        AnalyzerSettings: The validated settings.

    Raises:
        FileNotFoundError: If a config file is named but does not exist.
        configparser.Error: If the file is not valid INI.
        pydantic.ValidationError: If the file holds an invalid value or unknown key.
    """
    path = path or os.environ.get(CONFIG_ENV_VAR)
    if not path:
        return AnalyzerSettings()

    if not os.path.exists(path):
        error_msg = f"Config file not found: {path}"
        logger.error(error_msg)
        raise FileNotFoundError(error_msg)

    parser = configparser.ConfigParser()
    parser.read(path)
    values = dict(parser[CONFIG_SECTION]) if parser.has_section(CONFIG_SECTION) else {}
    logger.info(f"Loaded {len(values)} setting(s) from {path}")
    return AnalyzerSettings.model_validate(values)
