"""Pose matching, range of motion, balance, comparison and scoring."""

from form_analyzer.analysis.analyzer_factory import AnalyzerFactory
from form_analyzer.analysis.balance import BalanceReport, PairImbalance, balance_analyze, balance_difference
from form_analyzer.analysis.base_analyzer import FormAnalyzer
from form_analyzer.analysis.comparison import ErrorSeries, compare_motion
from form_analyzer.analysis.pose import PoseMatchConfig, PoseMatchResult, match_pose, match_stream
from form_analyzer.analysis.rom import (
    ROM_STANDARDS,
    JointRegion,
    MotionType,
    RomReport,
    RomStandard,
    region_for_joint,
    rom_analyze,
    rom_standard,
)
from form_analyzer.analysis.scoring import PerformanceScore, ScoreWeights, performance_score, score_components
