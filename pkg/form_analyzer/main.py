import argparse
import configparser
import json
import logging
import sys

from pydantic import ValidationError

from form_analyzer.analysis.rom import MotionType
from form_analyzer.evaluator import FormEvaluator
from form_analyzer.exceptions import FormAnalyzerError
from form_analyzer.normalization import NormalizationConfig
from form_analyzer.skeleton import JointId, validate_stream
from form_analyzer.synthgen.base_template import DefectSpec
from form_analyzer.synthgen.generator import generate
from form_analyzer.synthgen.template_factory import TemplateFactory
from form_analyzer.utils.config import AnalyzerSettings, load_settings
from form_analyzer.utils.data_handler import DataHandler
from form_analyzer.utils.logger import setup_logging
from form_analyzer.utils.plotting import PlotKind

logger = logging.getLogger("form_analyzer.main")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _joint_list(text):
    return [JointId(name.strip()) for name in text.split(",") if name.strip()]


def build_parser():
    """
    Build the command-line parser.

    Returns:
        argparse.ArgumentParser: Parser with one subcommand per operation.
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="Enable verbose logging")
    common.add_argument("--log-file", action="store_true", help="Also log to a timestamped file under logs/")
    common.add_argument("--config", help="INI settings file (overrides $FORM_ANALYZER_CONFIG)")
    common.add_argument("-o", "--output", help="Write the output to this file as well as stdout")
    common.add_argument("--lenient", action="store_true", help="Accept input streams that fail validation")
    common.add_argument("--half-width", type=int, help="Smoothing half-width n; window is 2n+1 samples (default 2)")
    common.add_argument("--passes", type=int, help="Number of smoothing passes (default 2)")

    parser = argparse.ArgumentParser(
        prog="form-analyze",
        description="Analyze weight-training motion captured as skeleton streams",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        return subparsers.add_parser(
            name, parents=[common], help=help_text, formatter_class=argparse.ArgumentDefaultsHelpFormatter
        )

    gen = add("gen", "Generate a synthetic exercise stream")
    gen.add_argument("--template", default="BicepCurl", choices=TemplateFactory.available_kinds())
    gen.add_argument("--duration", type=float, dest="duration_s", help="Duration in seconds (default 5)")
    gen.add_argument("--rate", type=float, dest="frame_rate_hz", help="Frame rate in Hz (default 30)")
    gen.add_argument("--height", type=float, dest="subject_height_m", help="Subject height in m (default 1.80)")
    gen.add_argument("--subject", dest="subject_id", help="Subject id")
    gen.add_argument("--reps", type=int, help="Number of repetitions (default 1)")
    gen.add_argument("--min-deg", type=float, dest="min_deg", help="BicepCurl: smallest elbow angle (default 10)")
    gen.add_argument("--max-deg", type=float, dest="max_deg", help="BicepCurl: largest elbow angle (default 150)")
    gen.add_argument("--amplitude-error", type=float, default=0.0, help="Fractional overshoot of the motion extreme")
    gen.add_argument("--lateral-drift", type=float, default=0.0, help="Peak sideways hand drift in m")
    gen.add_argument("--tempo-error", type=float, default=0.0, help="Fraction by which the first half is hurried")
    gen.add_argument("--asymmetry", type=float, default=0.0, help="Upward offset of the left arm in m")
    gen.add_argument("--noise", type=float, help="Gaussian position jitter in m (default 0.005)")
    gen.add_argument("--seed", type=int, help="Random seed, 0 <= seed < 2**64 (default 0)")

    validate = add("validate", "Check a stream file for structural problems")
    validate.add_argument("input", help="Stream file")

    pose = add("pose-match", "Compare every test frame with one reference frame")
    pose.add_argument("--ref", required=True, help="Reference stream file")
    pose.add_argument("--test", required=True, help="Test stream file")
    pose.add_argument("--ref-frame", type=int, default=0, help="Index of the reference frame")
    pose.add_argument("--tolerance", type=float, help="Per-joint angle tolerance in degrees (default 10)")

    rom = add("rom", "Range of motion of a joint against the standards table")
    rom.add_argument("input", help="Stream file")
    rom.add_argument("--joint", required=True, type=JointId, help="Joint name, e.g. ElbowLeft")
    rom.add_argument("--motion", required=True, type=MotionType, help="Motion type, e.g. Flexion")

    balance = add("balance", "Left/right imbalance of paired joints")
    balance.add_argument("input", help="Stream file")
    balance.add_argument("--ref", help="Reference stream for a relative imbalance")

    compare = add("compare", "Compare a test stream with a reference stream and score it")
    compare.add_argument("--ref", required=True, help="Reference stream file")
    compare.add_argument("--test", required=True, help="Test stream file")
    compare.add_argument("--no-scale", action="store_true", help="Skip height scaling")
    compare.add_argument("--no-recenter", action="store_true", help="Skip recentering")
    compare.add_argument("--no-resample", action="store_true", help="Skip resampling")
    compare.add_argument("--origin", type=JointId, help="Recentering origin joint (default SpineBase)")
    compare.add_argument("--joints", type=_joint_list, help="Comma-separated joints to compare")
    compare.add_argument("--weights", help="Score weights wp,ws,wb (default 1,1,1)")
    compare.add_argument("--out-csv", help="Per-frame error table")
    compare.add_argument("--out-svg", help="Error plot")
    compare.add_argument("--plot", default=PlotKind.POSITION.value, choices=[kind.value for kind in PlotKind])

    score = add("score", "Performance score from a comparison report or a stream pair")
    score.add_argument("--report", help="Comparison report to re-weight")
    score.add_argument("--ref", help="Reference stream file")
    score.add_argument("--test", help="Test stream file")
    score.add_argument("--weights", help="Score weights wp,ws,wb (default 1,1,1)")

    return parser


def _resolve_settings(args) -> AnalyzerSettings:
    try:
        settings = load_settings(args.config)
    except FileNotFoundError as e:
        raise UsageError(str(e)) from e
    except configparser.Error as e:
        raise UsageError(f"Malformed config file: {str(e)}") from e
    return settings.merged(
        half_width=args.half_width,
        passes=args.passes,
        tolerance_deg=getattr(args, "tolerance", None),
        origin_joint=getattr(args, "origin", None),
        weights=getattr(args, "weights", None),
        noise_sigma_m=getattr(args, "noise", None),
        seed=getattr(args, "seed", None),
    )


def _emit(text, output=None):
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
    print(text)


def _run_gen(args, settings):
    params = {
        key: getattr(args, key)
        for key in ("duration_s", "frame_rate_hz", "subject_height_m", "subject_id", "reps", "min_deg", "max_deg")
        if getattr(args, key) is not None
    }
    template = TemplateFactory.create_template(args.template, **params)
    defects = DefectSpec(
        amplitude_error=args.amplitude_error,
        lateral_drift_m=args.lateral_drift,
        tempo_error=args.tempo_error,
        asymmetry_m=args.asymmetry,
        noise_sigma_m=settings.noise_sigma_m,
    )
    stream = generate(template, defects, settings.seed)
    if args.output:
        DataHandler.write_stream(stream, args.output)
    else:
        sys.stdout.write("\n".join(DataHandler.format_stream(stream)) + "\n")
    return EXIT_OK


def _run_validate(args, settings):
    stream = DataHandler.read_stream(args.input, lenient=True)
    report = validate_stream(stream)
    _emit(json.dumps(report.model_dump(mode="json"), indent=2), args.output)
    if not report.ok:
        logger.error(f"{args.input} failed validation with {len(report.issues)} issue(s)")
        return EXIT_FAILURE
    return EXIT_OK


def _run_report(args, settings):
    evaluator = FormEvaluator(settings, lenient=args.lenient)
    if args.command == "pose-match":
        report = evaluator.analyze("pose-match", args.test, args.ref, ref_frame=args.ref_frame)
    elif args.command == "rom":
        report = evaluator.analyze("rom", args.input, joint=args.joint, motion=args.motion)
    elif args.command == "balance":
        report = evaluator.analyze("balance", args.input, args.ref)
    elif args.command == "compare":
        norm_config = NormalizationConfig(
            origin_joint=settings.origin_joint,
            scale_enabled=not args.no_scale,
            recenter_enabled=not args.no_recenter,
            resample_enabled=not args.no_resample,
        )
        report = evaluator.compare(
            args.ref,
            args.test,
            norm_config,
            out_csv=args.out_csv,
            out_svg=args.out_svg,
            plot_kind=PlotKind(args.plot),
            relevant_joints=args.joints,
        )
    else:
        if not args.report and not (args.ref and args.test):
            raise UsageError("score needs --report or both --ref and --test")
        report = evaluator.score(args.report, args.ref, args.test, settings.weights)

    _emit(DataHandler.write_report(report), args.output)
    return EXIT_OK


_COMMANDS = {
    "gen": _run_gen,
    "validate": _run_validate,
    "pose-match": _run_report,
    "rom": _run_report,
    "balance": _run_report,
    "compare": _run_report,
    "score": _run_report,
}


def cli_main(argv=None):
    """
    Run the command-line tool.

    Args:
        argv (list, optional): Arguments without the program name; ``sys.argv[1:]`` by default.

    Returns:
        int: 0 on success, 1 on an analysis or I/O failure, 2 on a usage error.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    setup_logging(log_level=logging.DEBUG if args.verbose else logging.INFO, log_to_file=args.log_file)

    try:
        settings = _resolve_settings(args)
        return _COMMANDS[args.command](args, settings)
    except FormAnalyzerError as e:
        logger.error(f"{args.command} failed: {str(e)}")
        return EXIT_FAILURE
    except OSError as e:
        logger.error(f"{args.command} failed: {str(e)}")
        return EXIT_FAILURE
    except (UsageError, ValidationError, ValueError) as e:
        logger.error(f"Usage error: {str(e)}")
        sys.stderr.write(parser.format_usage())
        return EXIT_USAGE


def main():
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
