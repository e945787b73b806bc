"""End-to-end properties of the compare and score pipeline on generated streams."""

import time

import numpy as np
import pytest

from form_analyzer.analysis.analyzers import ComparisonAnalyzer
from form_analyzer.skeleton import JointId
from form_analyzer.synthgen import BenchPress, BicepCurl, DefectKind, DefectSpec, PushPress, defect_ladder, generate

LADDER = [0.0, 0.05, 0.1, 0.2]


def test_self_comparison_scores_zero():
    """Twenty varied streams each score zero against themselves."""
    analyzer = ComparisonAnalyzer()
    templates = [BicepCurl(), PushPress(reps=2), BenchPress(subject_height_m=1.65)]
    started = time.perf_counter()

    for i in range(20):
        defects = DefectSpec(
            amplitude_error=0.02 * (i % 4),
            lateral_drift_m=0.01 * (i % 3),
            tempo_error=0.05 * (i % 5),
            asymmetry_m=0.01 * (i % 2),
            noise_sigma_m=0.005,
        )
        stream = generate(templates[i % 3], defects, seed=1000 + i)
        _, _, score = analyzer.compare(stream, stream)
        assert score.ps <= 1e-9

    assert time.perf_counter() - started < 5.0


def test_scaled_and_translated_subject_scores_zero():
    reference = generate(BicepCurl(subject_height_m=1.8), DefectSpec(noise_sigma_m=0.005), seed=11)
    test = reference.replace(
        positions=reference.positions / 1.2 + np.array([0.5, 0.0, 0.3]),
        meta=reference.meta.model_copy(update={"height_m": 1.5}),
    )

    _, _, score = ComparisonAnalyzer().compare(test, reference)
    assert score.ps <= 1e-6


@pytest.mark.parametrize("defect", list(DefectKind))
def test_score_rises_with_defect_magnitude(defect):
    """Each step up a noise-free defect ladder scores strictly worse."""
    streams = defect_ladder(BicepCurl(), defect, LADDER, seed=0)
    reference = streams[0]
    analyzer = ComparisonAnalyzer()

    scores = [analyzer.compare(stream, reference)[2].ps for stream in streams]

    assert scores[0] == 0.0
    assert all(b > a for a, b in zip(scores, scores[1:])), scores


def test_long_stream_throughput():
    template = BicepCurl(duration_s=10000 / 30.0, reps=100)
    reference = generate(template, DefectSpec(noise_sigma_m=0.005), seed=1)
    test = generate(template, DefectSpec(noise_sigma_m=0.005, tempo_error=0.1), seed=2)
    assert len(reference) == 10000

    started = time.perf_counter()
    analyzer = ComparisonAnalyzer(relevant_joints=list(JointId))
    errors, _, score = analyzer.compare(test, reference)
    elapsed = time.perf_counter() - started

    assert errors.n_frames == 10000
    assert len(errors.joints) == 25
    assert score.ps > 0.0
    assert elapsed < 1.0
