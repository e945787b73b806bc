"""Concrete analyzers, one per analysis mode of the command-line tool."""

from typing import Iterable, Optional, Tuple

from form_analyzer.analysis.balance import BalanceReport, balance_analyze, balance_difference
from form_analyzer.analysis.base_analyzer import FormAnalyzer
from form_analyzer.analysis.comparison import ErrorSeries, compare_motion
from form_analyzer.analysis.pose import PoseMatchConfig, match_stream
from form_analyzer.analysis.rom import MotionType, region_for_joint, rom_analyze, rom_standard
from form_analyzer.analysis.scoring import PerformanceScore, ScoreWeights, performance_score
from form_analyzer.normalization import NormalizationConfig
from form_analyzer.skeleton import JointId, MotionStream, resolve_height
from form_analyzer.synthgen.template_factory import TemplateFactory


class PoseMatchAnalyzer(FormAnalyzer):
    """Flags every test frame whose joint angles match one reference frame."""

    def __init__(self, tolerance_deg: float = 10.0, joints: Optional[Iterable[JointId]] = None, **kwargs):
        super().__init__("pose-match", **kwargs)
        options = {"tolerance_deg": tolerance_deg}
        if joints is not None:
            options["joints"] = frozenset(joints)
        self.config = PoseMatchConfig(**options)

    @property
    def requires_reference(self):
        return True

    def analyze(self, stream, reference=None, ref_frame: int = 0, **options):
        reference = self._require_reference(reference)
        if not 0 <= ref_frame < len(reference):
            error_msg = f"Reference frame {ref_frame} out of range for a {len(reference)}-frame stream"
            self.logger.error(error_msg)
            raise ValueError(error_msg)

        results = match_stream(stream, reference.frame(ref_frame), self.adjacency, self.config)
        matched = [i for i, result in enumerate(results) if result.matched]
        self.logger.info(f"{len(matched)} of {len(results)} frame(s) match reference frame {ref_frame}")

        return {
            "ref_frame": ref_frame,
            "tolerance_deg": self.config.tolerance_deg,
            "matched_frames": len(matched),
            "first_match_frame": matched[0] if matched else None,
            "frames": [
                {
                    "frame_index": i,
                    "t_s": float(t),
                    "matched": result.matched,
                    "max_error_deg": result.max_error_deg,
                    "per_joint_error_deg": result.model_dump(mode="json")["per_joint_error_deg"],
                }
                for i, (t, result) in enumerate(zip(stream.times.tolist(), results))
            ],
        }


class RomAnalyzer(FormAnalyzer):
    """Range of motion of one joint against the standards table."""

    def __init__(self, **kwargs):
        super().__init__("rom", **kwargs)

    def analyze(self, stream, reference=None, joint: JointId = JointId.ELBOW_LEFT, motion: MotionType = MotionType.FLEXION, **options):
        joint, motion = JointId(joint), MotionType(motion)
        region = region_for_joint(joint)
        if region is None:
            error_msg = f"No range-of-motion standard is measured at {joint.value}"
            self.logger.error(error_msg)
            raise ValueError(error_msg)
        try:
            standard = rom_standard(region, motion)
        except KeyError as e:
            error_msg = f"No {motion.value} standard for the {region.value} region"
            self.logger.error(error_msg)
            raise ValueError(error_msg) from e

        report = rom_analyze(stream, joint, standard, self.adjacency, self.filter_config)
        return report.model_dump(mode="json")


class BalanceAnalyzer(FormAnalyzer):
    """
    Left/right imbalance of a stream. With a reference, also reports the
    imbalance relative to the reference subject.
    """

    def __init__(self, **kwargs):
        super().__init__("balance", **kwargs)

    def analyze(self, stream, reference=None, **options):
        report = balance_analyze(stream, resolve_height(stream))
        results = report.model_dump(mode="json")
        if reference is not None:
            ref_report = balance_analyze(reference, resolve_height(reference))
            results["relative_to_reference"] = balance_difference(report, ref_report).model_dump(mode="json")
        self.logger.info(f"Balance aggregate e_b={report.e_b:.6f}")
        return results


class ComparisonAnalyzer(FormAnalyzer):
    """Normalized frame-by-frame comparison of a test stream with a reference, plus its score."""

    def __init__(
        self,
        norm_config: NormalizationConfig = NormalizationConfig(),
        weights: ScoreWeights = ScoreWeights(),
        relevant_joints: Optional[Iterable[JointId]] = None,
        **kwargs,
    ):
        super().__init__("compare", **kwargs)
        self.norm_config = norm_config
        self.weights = weights
        self.relevant_joints = None if relevant_joints is None else frozenset(relevant_joints)

    @property
    def requires_reference(self):
        return True

    def default_joints(self, reference: MotionStream) -> Iterable[JointId]:
        """Joints compared when none were configured: those driving the reference's exercise, else all."""
        if self.relevant_joints is not None:
            return self.relevant_joints
        if reference.meta.exercise_tag in TemplateFactory.available_kinds():
            return TemplateFactory.template_class(reference.meta.exercise_tag).relevant_joints
        return frozenset(JointId)

    def compare(self, stream: MotionStream, reference: MotionStream) -> Tuple[ErrorSeries, BalanceReport, PerformanceScore]:
        """Run the comparison and return the error traces, relative balance and score."""
        errors = compare_motion(
            reference, stream, self.default_joints(reference), self.norm_config, self.filter_config
        )
        test_balance = balance_analyze(stream, resolve_height(stream))
        ref_balance = balance_analyze(reference, resolve_height(reference))
        balance = balance_difference(test_balance, ref_balance)
        return errors, balance, performance_score(errors, balance, self.weights)

    def analyze(self, stream, reference=None, **options):
        reference = self._require_reference(reference)
        errors, balance, score = self.compare(stream, reference)
        results = score.model_dump(mode="json")
        results["n_frames"] = errors.n_frames
        results["joints"] = [joint.value for joint in errors.joints]
        results["balance"] = balance.model_dump(mode="json")
        return results
