"""
Weight-training motion analysis over depth-sensor skeleton streams.

Provides stream validation, joint kinematics, reference/test normalization,
pose matching, range of motion, balance, comparison and performance scoring,
plus a synthetic stream generator.
"""

__version__ = "0.1.0"

from form_analyzer.exceptions import FormAnalyzerError
from form_analyzer.skeleton import Frame, JointId, MotionStream, StreamMeta, validate_stream
