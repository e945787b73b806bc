"""Error taxonomy for the form analyzer.

Every analysis-domain failure derives from ``FormAnalyzerError`` so the CLI can
map it to exit code 1 in one place.
"""


class FormAnalyzerError(Exception):
    """Base class for all analysis-domain errors."""


class MissingJointError(FormAnalyzerError):
    def __init__(self, joint, frame_index=None):
        self.joint = joint
        self.frame_index = frame_index
        name = getattr(joint, "value", joint)
        where = f" in frame {frame_index}" if frame_index is not None else ""
        super().__init__(f"Joint {name} missing{where}")


class DegenerateGeometryError(FormAnalyzerError):
    def __init__(self, joint, frame_index=None):
        self.joint = joint
        self.frame_index = frame_index
        name = getattr(joint, "value", joint)
        where = f" in frame {frame_index}" if frame_index is not None else ""
        super().__init__(f"Degenerate limb vectors at {name}{where}")


class NoAdjacencyError(FormAnalyzerError):
    def __init__(self, joint):
        self.joint = joint
        super().__init__(f"No adjacency entry for {getattr(joint, 'value', joint)}")


class TooFewSamplesError(FormAnalyzerError):
    def __init__(self, count, required):
        self.count = count
        self.required = required
        super().__init__(f"Need at least {required} samples, got {count}")


class NonPositiveHeightError(FormAnalyzerError):
    def __init__(self, height):
        self.height = height
        super().__init__(f"Subject height must be positive, got {height}")


class EmptySeriesError(FormAnalyzerError):
    pass


class InvalidTemplateError(FormAnalyzerError):
    pass


class FrameCountMismatchError(FormAnalyzerError):
    def __init__(self, ref_count, test_count):
        self.ref_count = ref_count
        self.test_count = test_count
        super().__init__(
            f"Streams have different frame counts ({ref_count} vs {test_count}) and resampling is disabled"
        )


class NormalizationStageError(FormAnalyzerError):
    """Wraps a failure raised inside one stage of the normalization pipeline."""

    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        super().__init__(f"Normalization stage '{stage}' failed: {cause}")


class StreamParseError(FormAnalyzerError):
    def __init__(self, line, detail):
        self.line = line
        self.detail = detail
        super().__init__(f"Line {line}: {detail}")


class ValidationFailedError(FormAnalyzerError):
    def __init__(self, report):
        self.report = report
        super().__init__(f"Stream failed validation with {len(report.issues)} issue(s)")


class StreamIOError(FormAnalyzerError):
    def __init__(self, path, detail):
        self.path = path
        self.detail = detail
        super().__init__(f"I/O error on {path}: {detail}")
