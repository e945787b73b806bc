from abc import ABC, abstractmethod
import logging
from typing import Any, Dict, Optional

from form_analyzer.kinematics import DEFAULT_ADJACENCY, AdjacencyMap, FilterConfig
from form_analyzer.skeleton import MotionStream


class FormAnalyzer(ABC):
    """
    Abstract base class for the analysis modes of the command-line tool.

    Each analyzer wraps one analysis over a test stream (optionally against a
    reference stream) and returns its results as a JSON-ready dictionary.
    """

    def __init__(self, name, filter_config: FilterConfig = FilterConfig(), adjacency: AdjacencyMap = DEFAULT_ADJACENCY):
        """
        Initialize the analyzer.

        Args:
            name (str): The analysis mode name, e.g. "rom".
            filter_config (FilterConfig): Smoothing applied to angle and speed series.
            adjacency (AdjacencyMap): Joint adjacency used for angles.
        """
        self.name = name
        self.filter_config = filter_config
        self.adjacency = adjacency
        self.logger = logging.getLogger(f"form_analyzer.analyzer.{name}")

    @property
    def requires_reference(self) -> bool:
        return False

    @abstractmethod
    def analyze(self, stream: MotionStream, reference: Optional[MotionStream] = None, **options) -> Dict[str, Any]:
        """
        Analyze a stream.

        Args:
            stream (MotionStream): The stream under test.
            reference (MotionStream, optional): The reference stream, for modes that compare.
            **options: Mode-specific options.

        Returns:
            dict: The results section of the analysis report.
        """

    def _require_reference(self, reference: Optional[MotionStream]) -> MotionStream:
        if reference is None:
            error_msg = f"Analysis '{self.name}' needs a reference stream"
            self.logger.error(error_msg)
            raise ValueError(error_msg)
        return reference
