import numpy as np
import pytest
from pydantic import ValidationError

from form_analyzer.exceptions import MissingJointError, NonPositiveHeightError
from form_analyzer.skeleton import (
    JOINT_INDEX,
    JOINTS,
    Frame,
    IssueCode,
    JointId,
    MotionStream,
    Position3,
    StreamMeta,
    estimate_height,
    joint_series,
    resolve_height,
    validate_stream,
)


def make_stream(count=100, rate=30.0, height=None):
    """Fully tracked stream with every joint at a fixed offset plus a drift in x."""
    times = np.arange(count) / rate
    positions = np.zeros((count, len(JOINTS), 3))
    positions[:, :, 1] = np.linspace(0.0, 1.6, len(JOINTS))
    positions[:, :, 0] += times[:, np.newaxis] * 0.1
    return MotionStream(meta=StreamMeta(height_m=height, frame_rate_hz=rate), times=times, positions=positions)


def height_frame(head_y, left_y, right_y):
    return Frame(t=0.0, joints={
        JointId.HEAD: Position3(0.0, head_y, 2.0),
        JointId.FOOT_LEFT: Position3(-0.1, left_y, 2.0),
        JointId.FOOT_RIGHT: Position3(0.1, right_y, 2.0),
    })


def test_joint_catalogue():
    """Test the canonical joint list."""
    assert len(JOINTS) == 25
    assert JOINTS[0] == JointId.SPINE_BASE
    assert str(JointId.HAND_TIP_LEFT) == "HandTipLeft"
    assert JointId("ThumbRight") is JointId.THUMB_RIGHT


def test_frame_position_missing_joint():
    frame = Frame(t=0.0, joints={JointId.HEAD: Position3(0.0, 1.7, 2.0)})

    assert frame.position(JointId.HEAD).y == 1.7
    with pytest.raises(MissingJointError) as exc_info:
        frame.position(JointId.NECK, frame_index=4)
    assert exc_info.value.frame_index == 4


def test_stream_arrays_are_read_only():
    """Test that a stream cannot be modified in place."""
    stream = make_stream(5)

    with pytest.raises(ValueError):
        stream.positions[0, 0, 0] = 1.0
    with pytest.raises(ValueError):
        stream.times[0] = 1.0


def test_from_frames_marks_missing_joints():
    frames = [
        Frame(t=0.0, joints={JointId.HEAD: (0.0, 1.7, 2.0)}),
        Frame(t=0.1, joints={JointId.HEAD: (0.0, 1.7, 2.0), JointId.NECK: (0.0, 1.5, 2.0)}),
    ]
    stream = MotionStream.from_frames(StreamMeta(), frames)

    assert len(stream) == 2
    assert stream.present[0, JOINT_INDEX[JointId.HEAD]]
    assert not stream.present[0, JOINT_INDEX[JointId.NECK]]
    assert np.isnan(stream.positions[0, JOINT_INDEX[JointId.NECK]]).all()
    assert stream.first_missing(JointId.NECK) == 0
    assert stream.first_missing(JointId.HEAD) is None
    assert stream.frame(1).position(JointId.NECK) == Position3(0.0, 1.5, 2.0)


def test_stream_equality():
    assert make_stream(10) == make_stream(10)
    assert make_stream(10) != make_stream(11)
    assert make_stream(10) != make_stream(10, height=1.8)


def test_meta_height_range():
    """Test that implausible subject heights are rejected."""
    assert StreamMeta(height_m=1.8).height_m == 1.8
    with pytest.raises(ValidationError):
        StreamMeta(height_m=0.2)
    with pytest.raises(ValidationError):
        StreamMeta(frame_rate_hz=0)


def test_validate_clean_stream():
    report = validate_stream(make_stream(100))

    assert report.ok
    assert report.issues == ()


def test_validate_missing_joint():
    """Test a stream with frame 7 missing ElbowLeft."""
    stream = make_stream(10)
    present = stream.present.copy()
    present[7, JOINT_INDEX[JointId.ELBOW_LEFT]] = False
    report = validate_stream(stream.replace(present=present))

    assert not report.ok
    assert len(report.issues) == 1
    issue = report.issues[0]
    assert (issue.frame_index, issue.code, issue.detail) == (7, IssueCode.MISSING_JOINT, "ElbowLeft")


def test_validate_non_monotone_time():
    stream = make_stream(3).replace(times=np.array([0.0, 0.1, 0.1]))
    report = validate_stream(stream)

    assert [(i.frame_index, i.code) for i in report.issues] == [(2, IssueCode.NON_MONOTONE_TIME)]


def test_validate_reports_every_issue_kind_in_frame_order():
    stream = make_stream(4)
    positions = stream.positions.copy()
    positions[3, 0, 0] = np.inf
    stream = stream.replace(
        times=np.array([-0.1, 0.0, np.nan, 0.2]),
        positions=positions,
        unknown_joints=((1, "Tail"),),
    )
    report = validate_stream(stream)
    codes = [(i.frame_index, i.code) for i in report.issues]

    assert (0, IssueCode.NEGATIVE_TIME) in codes
    assert (1, IssueCode.UNKNOWN_JOINT) in codes
    assert (2, IssueCode.NON_FINITE_TIME) in codes
    assert (3, IssueCode.NON_FINITE_COORDINATE) in codes
    assert [index for index, _ in codes] == sorted(index for index, _ in codes)


def test_validate_empty_stream():
    report = validate_stream(make_stream(0))

    assert [(i.frame_index, i.code) for i in report.issues] == [(None, IssueCode.EMPTY_STREAM)]


@pytest.mark.parametrize("head_y, left_y, right_y, expected", [
    (1.70, 0.00, 0.00, 1.802),
    (1.60, 0.02, 0.00, 1.696),
    (0.10, 0.10, 0.10, 0.0),
])
def test_estimate_height(head_y, left_y, right_y, expected):
    assert estimate_height(height_frame(head_y, left_y, right_y)) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("dx, dy, dz", [(0.4, 0.0, -1.2), (-2.5, 0.37, 0.9), (0.0, -0.8, 3.0)])
def test_estimate_height_ignores_translation(dx, dy, dz):
    """Test that moving the subject (y shifted uniformly) leaves the estimate unchanged."""
    frame = height_frame(1.64, 0.031, 0.012)
    moved = Frame(t=frame.t, joints={
        joint: Position3(p.x + dx, p.y + dy, p.z + dz) for joint, p in frame.joints.items()
    })

    assert estimate_height(moved) == pytest.approx(estimate_height(frame), abs=1e-12)
    assert estimate_height(frame) > 0.0


def test_resolve_height_prefers_metadata():
    assert resolve_height(make_stream(5, height=1.75)) == 1.75


def test_resolve_height_estimates_from_first_usable_frame():
    frames = [
        Frame(t=0.0, joints={JointId.HEAD: (0.0, 1.7, 2.0)}),
        height_frame(1.70, 0.0, 0.0),
    ]
    stream = MotionStream.from_frames(StreamMeta(), [frames[0], Frame(t=0.1, joints=frames[1].joints)])

    assert resolve_height(stream) == pytest.approx(1.802)


def test_resolve_height_errors():
    no_feet = MotionStream.from_frames(StreamMeta(), [Frame(t=0.0, joints={JointId.HEAD: (0.0, 1.7, 2.0)})])
    with pytest.raises(MissingJointError) as exc_info:
        resolve_height(no_feet)
    assert exc_info.value.joint == JointId.FOOT_LEFT

    lying = MotionStream.from_frames(StreamMeta(), [height_frame(0.5, 0.5, 0.5)])
    with pytest.raises(NonPositiveHeightError):
        resolve_height(lying)


def test_joint_series():
    stream = make_stream(3)
    samples = joint_series(stream, JointId.HEAD)

    assert [t for t, _ in samples] == stream.times.tolist()
    assert samples[2][1] == Position3(*stream.positions[2, JOINT_INDEX[JointId.HEAD]].tolist())
    assert len(joint_series(make_stream(1), JointId.HEAD)) == 1


def test_joint_series_missing_in_first_frame():
    stream = make_stream(3)
    present = stream.present.copy()
    present[0, JOINT_INDEX[JointId.HEAD]] = False

    with pytest.raises(MissingJointError) as exc_info:
        joint_series(stream.replace(present=present), JointId.HEAD)
    assert exc_info.value.frame_index == 0
