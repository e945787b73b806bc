"""SVG line charts of comparison error and speed traces."""

import logging
from enum import Enum
from typing import Iterable, Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from form_analyzer.analysis.comparison import ErrorSeries  # noqa: E402
from form_analyzer.exceptions import EmptySeriesError, StreamIOError  # noqa: E402
from form_analyzer.skeleton import JointId  # noqa: E402

logger = logging.getLogger("form_analyzer.plotting")

# Fixed element ids and no timestamp keep the SVG byte-identical across runs.
SVG_RC = {"svg.hashsalt": "form_analyzer", "svg.fonttype": "none"}
SVG_METADATA = {"Date": None}


class PlotKind(str, Enum):
    POSITION = "position"
    SPEED = "speed"
    SPEED_ERROR = "speed_error"


_Y_LABELS = {
    PlotKind.POSITION: "Position error (m)",
    PlotKind.SPEED: "Speed (m/s)",
    PlotKind.SPEED_ERROR: "Speed error (m/s)",
}


def render_plot(
    errors: ErrorSeries,
    file_path: str,
    kind: PlotKind = PlotKind.POSITION,
    joints: Optional[Iterable[JointId]] = None,
) -> None:
    """
    Render selected traces of an error series against time as SVG.

    Args:
        errors (ErrorSeries): The comparison output.
        file_path (str): Destination SVG file.
        kind (PlotKind): ``position`` draws |dx|, |dy|, |dz| per joint,
            ``speed`` draws reference and test speed per joint and
            ``speed_error`` draws the speed difference per joint.
        joints (iterable, optional): Joints to draw; all joints of the series by default.

    Raises:
        EmptySeriesError: If the series or the selection is empty.
        ValueError: If a selected joint is not part of the series.
        StreamIOError: If the file cannot be written.
    """
    kind = PlotKind(kind)
    selected = list(errors.joints) if joints is None else [JointId(joint) for joint in joints]
    if errors.n_frames == 0 or not selected:
        raise EmptySeriesError("Nothing to plot")
    for joint in selected:
        if joint not in errors.joints:
            raise ValueError(f"Joint {joint.value} is not part of the compared joints")

    with plt.rc_context(SVG_RC):
        fig, ax = plt.subplots(figsize=(10, 6))
        times = errors.times
        for joint in selected:
            column = errors.column(joint)
            if kind == PlotKind.POSITION:
                for axis, label in enumerate("xyz"):
                    ax.plot(times, errors.axis_error[:, column, axis], label=f"{joint.value} {label}")
            elif kind == PlotKind.SPEED:
                ax.plot(times, errors.ref_speed[:, column], label=f"{joint.value} reference")
                ax.plot(times, errors.test_speed[:, column], linestyle="--", label=f"{joint.value} test")
            else:
                ax.plot(times, errors.speed_error[:, column], label=joint.value)

        ax.set_xlabel("Time (s)")
        ax.set_ylabel(_Y_LABELS[kind])
        ax.grid(True)
        ax.legend()
        fig.tight_layout()

        try:
            fig.savefig(file_path, format="svg", metadata=SVG_METADATA)
        except OSError as e:
            error_msg = f"Error writing plot {file_path}: {str(e)}"
            logger.error(error_msg)
            raise StreamIOError(file_path, str(e)) from e
        finally:
            plt.close(fig)

    logger.info(f"Wrote {kind.value} plot of {len(selected)} joint(s) to {file_path}")
