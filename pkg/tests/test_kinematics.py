import math

import numpy as np
import pytest
from pydantic import ValidationError

from form_analyzer.exceptions import (
    DegenerateGeometryError,
    EmptySeriesError,
    MissingJointError,
    NoAdjacencyError,
    TooFewSamplesError,
)
from form_analyzer.kinematics import (
    DEFAULT_ADJACENCY,
    FilterConfig,
    angle_profile,
    angle_series,
    build_adjacency,
    joint_angle,
    smooth_array,
    smooth_series,
    speed_profile,
    speed_series,
)
from form_analyzer.skeleton import JOINT_INDEX, Frame, JointId, MotionStream, StreamMeta

SHOULDER, ELBOW, WRIST = JointId.SHOULDER_LEFT, JointId.ELBOW_LEFT, JointId.WRIST_LEFT


def arm_frame(shoulder, elbow, wrist, t=0.0):
    return Frame(t=t, joints={SHOULDER: tuple(shoulder), ELBOW: tuple(elbow), WRIST: tuple(wrist)})


def arm_stream(angles_deg, rate=30.0):
    """Left arm with the upper arm pointing up and the forearm at the given elbow angles."""
    frames = []
    for i, angle in enumerate(np.radians(angles_deg)):
        wrist = (0.0, 0.3 * math.cos(angle), 0.3 * math.sin(angle))
        frames.append(arm_frame((0.0, 0.3, 0.0), (0.0, 0.0, 0.0), wrist, t=i / rate))
    return MotionStream.from_frames(StreamMeta(), frames)


def brute_force_smooth(values, n, passes):
    """Direct summation over the clipped window, one pass at a time."""
    result = list(values)
    for _ in range(passes):
        length = len(result)
        result = [
            sum(result[max(0, i - n):min(length, i + n + 1)]) / (min(length, i + n + 1) - max(0, i - n))
            for i in range(length)
        ]
    return result


def random_rotation(rng):
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    return q * np.sign(np.diag(r))


@pytest.mark.parametrize("wrist, expected", [
    ((1.0, 0.0, 0.0), 90.0),
    ((0.0, -1.0, 0.0), 180.0),
    ((math.sqrt(3) / 2, -0.5, 0.0), 120.0),
])
def test_joint_angle_geometry(wrist, expected):
    """Test the three reference geometries."""
    frame = arm_frame((0.0, 1.0, 0.0), (0.0, 0.0, 0.0), wrist)
    assert joint_angle(frame, ELBOW) == pytest.approx(expected, abs=1e-6)


def test_joint_angle_is_rigid_and_scale_invariant():
    """Test invariance under random rotations, translations and uniform scaling."""
    rng = np.random.default_rng(7)
    for _ in range(1000):
        points = rng.normal(size=(3, 3))
        expected = joint_angle(arm_frame(*points), ELBOW)

        moved = rng.uniform(0.1, 10.0) * points @ random_rotation(rng).T + rng.normal(scale=5.0, size=3)
        assert joint_angle(arm_frame(*moved), ELBOW) == pytest.approx(expected, abs=1e-6)


def test_joint_angle_errors():
    frame = arm_frame((0.0, 1.0, 0.0), (0.0, 0.0, 0.0), (0.0, 0.0, 0.0))

    with pytest.raises(DegenerateGeometryError):
        joint_angle(frame, ELBOW)
    with pytest.raises(NoAdjacencyError):
        joint_angle(frame, JointId.HEAD)
    with pytest.raises(MissingJointError):
        joint_angle(frame, JointId.ELBOW_RIGHT)


def test_build_adjacency():
    adjacency = build_adjacency({"Neck": ("Head", "SpineShoulder")})

    assert adjacency == {JointId.NECK: (JointId.HEAD, JointId.SPINE_SHOULDER)}
    with pytest.raises(ValueError):
        build_adjacency({"Neck": ("Neck", "Head")})
    assert DEFAULT_ADJACENCY[JointId.KNEE_LEFT] == (JointId.HIP_LEFT, JointId.ANKLE_LEFT)


def test_angle_profile_matches_joint_angle():
    stream = arm_stream([30.0, 60.0, 90.0])

    assert angle_profile(stream, ELBOW) == pytest.approx([30.0, 60.0, 90.0], abs=1e-9)


def test_angle_profile_degenerate_frame():
    """Test that the failing frame is reported."""
    frames = list(arm_stream([30.0] * 6).frames)
    frames[3] = arm_frame((0.0, 0.3, 0.0), (0.0, 0.0, 0.0), (0.0, 0.0, 0.0), t=frames[3].t)

    with pytest.raises(DegenerateGeometryError) as exc_info:
        angle_profile(MotionStream.from_frames(StreamMeta(), frames), ELBOW)
    assert exc_info.value.frame_index == 3


@pytest.mark.parametrize("bad", [math.nan, math.inf])
def test_non_finite_coordinate_is_degenerate(bad):
    """Test that a non-finite coordinate fails instead of yielding NaN."""
    frame = arm_frame((0.0, 0.3, 0.0), (0.0, 0.0, 0.0), (0.0, bad, 0.3))
    with pytest.raises(DegenerateGeometryError):
        joint_angle(frame, ELBOW)

    stream = arm_stream([30.0] * 5)
    positions = stream.positions.copy()
    positions[2, JOINT_INDEX[WRIST], 1] = bad
    with pytest.raises(DegenerateGeometryError) as exc_info:
        angle_profile(stream.replace(positions=positions), ELBOW)
    assert exc_info.value.frame_index == 2


def test_angle_series_constant_pose():
    samples = angle_series(arm_stream([45.0] * 10), ELBOW)

    assert [s.value for s in samples] == pytest.approx([45.0] * 10)
    assert [s.t for s in samples] == pytest.approx([i / 30.0 for i in range(10)])


def test_angle_series_linear_ramp_interior():
    """Test that smoothing a linear 10 -> 150 degree sweep leaves interior points on the ramp."""
    ramp = np.linspace(10.0, 150.0, 100)
    samples = angle_series(arm_stream(ramp), ELBOW)
    values = np.array([s.value for s in samples])

    assert np.abs(values[4:-4] - ramp[4:-4]).max() < 0.5


def test_angle_series_empty():
    with pytest.raises(EmptySeriesError):
        angle_series(MotionStream.from_frames(StreamMeta(), []), ELBOW)


@pytest.mark.parametrize("values, half_width, passes, expected", [
    ([5, 5, 5, 5], 1, 1, [5, 5, 5, 5]),
    ([1, 2, 3, 4, 5], 1, 1, [1.5, 2, 3, 4, 4.5]),
    ([0, 0, 3, 0, 0], 1, 2, [0.5, 2 / 3, 1, 2 / 3, 0.5]),
])
def test_smooth_series_known_values(values, half_width, passes, expected):
    config = FilterConfig(half_width=half_width, passes=passes)
    assert smooth_series(values, config) == pytest.approx(expected, abs=1e-12)


def test_smooth_series_matches_direct_summation():
    """Test the filter against a direct per-index summation on random series."""
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        length = int(rng.integers(1, 201))
        config = FilterConfig(half_width=int(rng.integers(0, 6)), passes=int(rng.integers(1, 4)))
        values = rng.normal(size=length).tolist()

        expected = brute_force_smooth(values, config.half_width, config.passes)
        assert np.allclose(smooth_series(values, config), expected, rtol=0, atol=1e-12)


def test_smooth_array_along_first_axis():
    values = np.column_stack([np.arange(5.0), np.full(5, 2.0)])
    smoothed = smooth_array(values, FilterConfig(half_width=1, passes=1))

    assert smoothed[:, 0] == pytest.approx([0.5, 1, 2, 3, 3.5])
    assert smoothed[:, 1] == pytest.approx([2.0] * 5)


def test_smooth_empty_series():
    with pytest.raises(EmptySeriesError):
        smooth_series([])


def test_filter_config_bounds():
    with pytest.raises(ValidationError):
        FilterConfig(half_width=-1)
    with pytest.raises(ValidationError):
        FilterConfig(passes=0)


def test_speed_series_stationary():
    samples = [(i / 30.0, (0.2, 1.0, 2.0)) for i in range(20)]
    assert [s.value for s in speed_series(samples)] == [0.0] * 20


def test_speed_series_uniform_motion():
    """Test x = t sampled at t = 0, 1, 2, 3."""
    samples = [(float(t), (float(t), 0.0, 0.0)) for t in range(4)]
    speeds = speed_series(samples)

    assert [s.t for s in speeds] == [0.0, 1.0, 2.0, 3.0]
    assert [s.value for s in speeds] == pytest.approx([1.0] * 4, abs=1e-12)


def test_speed_series_too_few_samples():
    with pytest.raises(TooFewSamplesError):
        speed_series([(0.0, (0.0, 0.0, 0.0))])


def test_speed_profile_multi_joint_shape():
    times = np.arange(10) / 10.0
    positions = np.zeros((10, 2, 3))
    positions[:, 1, 2] = 2.0 * times

    speeds = speed_profile(times, positions)
    assert speeds.shape == (10, 2)
    assert speeds[:, 0] == pytest.approx([0.0] * 10)
    assert speeds[:, 1] == pytest.approx([2.0] * 10)


def test_speed_series_time_reversal():
    """Test that reversing time reverses the smoothed speeds."""
    rng = np.random.default_rng(5)
    times = np.cumsum(rng.uniform(0.02, 0.05, size=40))
    positions = np.cumsum(rng.normal(scale=0.01, size=(40, 3)), axis=0)
    forward = [(t, tuple(p)) for t, p in zip(times.tolist(), positions.tolist())]
    end = times[-1]
    backward = [(end - t, p) for t, p in reversed(forward)]

    config = FilterConfig(half_width=3, passes=2)
    speeds = [s.value for s in speed_series(forward, config)]
    reversed_speeds = [s.value for s in speed_series(backward, config)]
    assert reversed_speeds == pytest.approx(speeds[::-1], rel=1e-9)
