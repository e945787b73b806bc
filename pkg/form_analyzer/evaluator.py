import logging
from typing import Any, Dict, Optional

from form_analyzer.analysis.analyzer_factory import AnalyzerFactory
from form_analyzer.analysis.scoring import ScoreWeights, score_components
from form_analyzer.normalization import NormalizationConfig
from form_analyzer.utils.config import AnalyzerSettings
from form_analyzer.utils.data_handler import AnalysisReport, DataHandler
from form_analyzer.utils.plotting import PlotKind, render_plot

logger = logging.getLogger("form_analyzer.evaluator")


class FormEvaluator:
    """
    Runs analysis sessions on stream files and assembles their reports.

    The evaluator reads the input files, hands the streams to the analyzer
    of the requested mode and, for comparisons, writes the error CSV and plot.
    """

    def __init__(self, settings: AnalyzerSettings = AnalyzerSettings(), lenient: bool = False):
        """
        Initialize the evaluator.

        Args:
            settings (AnalyzerSettings): Filter, tolerance, origin and weight defaults.
            lenient (bool): Accept input streams that fail validation.
        """
        self.settings = settings
        self.lenient = lenient
        logger.info(f"Initialized form evaluator (lenient={lenient})")

    def _settings_echo(self) -> Dict[str, Any]:
        return self.settings.model_dump(mode="json", exclude={"noise_sigma_m", "seed"})

    def _read(self, file_path):
        return DataHandler.read_stream(file_path, lenient=self.lenient)

    def analyze(self, mode: str, test_file: str, ref_file: Optional[str] = None, **options) -> AnalysisReport:
        """
        Run the pose-match, rom or balance analysis on a test file.

        Args:
            mode (str): The analysis mode.
            test_file (str): The stream under analysis.
            ref_file (str, optional): Reference stream, required by pose-match.
            **options: Mode-specific options, e.g. ``ref_frame`` or ``joint`` and ``motion``.

        Returns:
            AnalysisReport: The report of the analysis.
        """
        analyzer_options = {"filter_config": self.settings.filter_config}
        if mode == "pose-match":
            analyzer_options["tolerance_deg"] = self.settings.tolerance_deg
        analyzer = AnalyzerFactory.create_analyzer(mode, **analyzer_options)

        logger.info(f"Starting {mode} analysis of {test_file}")
        stream = self._read(test_file)
        reference = self._read(ref_file) if ref_file else None
        results = analyzer.analyze(stream, reference, **options)

        inputs = {"test": test_file, "ref": ref_file, **{k: getattr(v, "value", v) for k, v in options.items()}}
        inputs["settings"] = self._settings_echo()
        return AnalysisReport(mode=mode, inputs=inputs, results=results)

    def compare(
        self,
        ref_file: str,
        test_file: str,
        norm_config: Optional[NormalizationConfig] = None,
        out_csv: Optional[str] = None,
        out_svg: Optional[str] = None,
        plot_kind: PlotKind = PlotKind.POSITION,
        relevant_joints=None,
    ) -> AnalysisReport:
        """
        Compare a test file with a reference file and score the performance.

        Args:
            ref_file (str): The reference stream file.
            test_file (str): The test stream file.
            norm_config (NormalizationConfig, optional): Normalization stages to run;
                all enabled by default, recentering on the configured origin joint.
            out_csv (str, optional): Where to write the per-frame error table.
            out_svg (str, optional): Where to write the plot.
            plot_kind (PlotKind): Which traces to plot.
            relevant_joints (iterable, optional): Joints to compare; the
                reference exercise's default set otherwise.

        Returns:
            AnalysisReport: A "compare" report with e_p_m, e_s_mps, e_b and ps.
        """
        norm_config = norm_config or NormalizationConfig(origin_joint=self.settings.origin_joint)
        analyzer = AnalyzerFactory.create_analyzer(
            "compare",
            filter_config=self.settings.filter_config,
            norm_config=norm_config,
            weights=self.settings.weights,
            relevant_joints=relevant_joints,
        )

        logger.info(f"Starting comparison of {test_file} against {ref_file}")
        reference = self._read(ref_file)
        stream = self._read(test_file)
        errors, balance, score = analyzer.compare(stream, reference)

        if out_csv:
            DataHandler.export_errors_csv(errors, out_csv)
        if out_svg:
            render_plot(errors, out_svg, plot_kind)

        results = score.model_dump(mode="json")
        results["n_frames"] = errors.n_frames
        results["joints"] = [joint.value for joint in errors.joints]
        results["balance"] = balance.model_dump(mode="json")

        inputs = {
            "ref": ref_file,
            "test": test_file,
            "normalization": norm_config.model_dump(mode="json"),
            "out_csv": out_csv,
            "out_svg": out_svg,
            "settings": self._settings_echo(),
        }
        logger.info(f"Comparison complete: ps={score.ps:.6f}")
        return AnalysisReport(mode="compare", inputs=inputs, results=results)

    def score(
        self,
        report_file: Optional[str] = None,
        ref_file: Optional[str] = None,
        test_file: Optional[str] = None,
        weights: Optional[ScoreWeights] = None,
    ) -> AnalysisReport:
        """
        Score a performance, either by re-weighting the error terms of an
        earlier comparison report or by running a fresh comparison.

        Raises:
            ValueError: If neither a report nor a reference/test pair is given,
                or the report is not a comparison.
        """
        weights = weights or self.settings.weights
        if report_file:
            report = DataHandler.read_report(report_file)
            if report.mode not in ("compare", "score"):
                error_msg = f"Report {report_file} is a '{report.mode}' report, not a comparison"
                logger.error(error_msg)
                raise ValueError(error_msg)
            terms = report.results
            score = score_components(terms["e_p_m"], terms["e_s_mps"], terms["e_b"], weights)
            inputs = {"report": report_file}
        elif ref_file and test_file:
            comparison = self.compare(ref_file, test_file)
            terms = comparison.results
            score = score_components(terms["e_p_m"], terms["e_s_mps"], terms["e_b"], weights)
            inputs = {"ref": ref_file, "test": test_file}
        else:
            error_msg = "Scoring needs a comparison report or a reference and a test file"
            logger.error(error_msg)
            raise ValueError(error_msg)

        inputs["weights"] = weights.model_dump(mode="json")
        logger.info(f"Performance score {score.ps:.6f}")
        return AnalysisReport(mode="score", inputs=inputs, results=score.model_dump(mode="json"))
