import json
import logging
import os
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, ValidationError

from form_analyzer.analysis.comparison import ErrorSeries
from form_analyzer.exceptions import (
    EmptySeriesError,
    StreamIOError,
    StreamParseError,
    ValidationFailedError,
)
from form_analyzer.skeleton import JOINT_COUNT, JOINTS, MotionStream, StreamMeta, validate_stream

logger = logging.getLogger("form_analyzer.data_handler")

FORMAT_VERSION = "1"
SCHEMA_VERSION = "1"

META_FIELDS = ("subject_id", "height_m", "frame_rate_hz", "exercise_tag", "provenance")
FRAME_FIELDS = ("t", "joints")

_JOINT_COLUMNS = {joint.value: j for j, joint in enumerate(JOINTS)}

ERROR_CSV_COLUMNS = ["frame_index", "t_s", "joint", "err_x_m", "err_y_m", "err_z_m", "err_pos_m", "err_speed_mps"]


class AnalysisReport(BaseModel):
    """Serialized result of one analysis mode."""

    model_config = ConfigDict(frozen=True)

    schema_version: Literal["1"] = SCHEMA_VERSION
    mode: str
    inputs: Dict[str, Any]
    results: Dict[str, Any]


def _is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


class DataHandler:
    """
    Utility class for reading and writing stream files, error tables and reports.

    Stream files are newline-delimited JSON: a metadata record followed by one
    record per frame, ``{"t": seconds, "joints": {"<JointName>": [x, y, z]}}``.
    """

    @staticmethod
    def _parse_meta(line_number: int, record) -> StreamMeta:
        if not isinstance(record, dict):
            raise StreamParseError(line_number, "metadata record must be an object")
        version = record.get("format_version")
        if version != FORMAT_VERSION:
            raise StreamParseError(line_number, f"unsupported format_version {version!r}")

        unknown = sorted(set(record) - set(META_FIELDS) - {"format_version"})
        if unknown:
            logger.warning(f"Line {line_number}: ignoring unknown metadata field(s) {unknown}")
        try:
            return StreamMeta(**{key: record[key] for key in META_FIELDS if key in record})
        except ValidationError as e:
            raise StreamParseError(line_number, f"invalid metadata: {e.errors()[0]['msg']}") from e
        except OverflowError:
            raise StreamParseError(line_number, "metadata value too large for a float") from None

    @staticmethod
    def _parse_frame(line_number: int, record, position_row: np.ndarray, present_row: np.ndarray) -> Tuple[float, List[str]]:
        """Fill one frame's row in place; returns the timestamp and the joint names that are not canonical."""
        if not isinstance(record, dict):
            raise StreamParseError(line_number, "frame record must be an object")
        if not _is_number(record.get("t")):
            raise StreamParseError(line_number, "frame record needs a numeric 't'")
        try:
            t = float(record["t"])
        except OverflowError:
            raise StreamParseError(line_number, "timestamp too large for a float") from None
        joints = record.get("joints")
        if not isinstance(joints, dict):
            raise StreamParseError(line_number, "frame record needs a 'joints' object")

        unknown_fields = sorted(set(record) - set(FRAME_FIELDS))
        if unknown_fields:
            logger.warning(f"Line {line_number}: ignoring unknown field(s) {unknown_fields}")

        unknown_joints = []
        for name, coordinates in joints.items():
            if not (isinstance(coordinates, list) and len(coordinates) == 3 and all(map(_is_number, coordinates))):
                raise StreamParseError(line_number, f"joint {name} must be a list of three numbers")
            try:
                values = [float(c) for c in coordinates]
            except OverflowError:
                raise StreamParseError(line_number, f"joint {name} has a coordinate too large for a float") from None
            j = _JOINT_COLUMNS.get(name)
            if j is None:
                unknown_joints.append(name)
                continue
            position_row[j] = values
            present_row[j] = True
        return t, unknown_joints

    @staticmethod
    def parse_stream(lines) -> MotionStream:
        """
        Parse stream records from an iterable of lines, given as text or as
        UTF-8 bytes.

        Blank lines are skipped; line numbers in errors are 1-based.

        Raises:
            StreamParseError: On a malformed record.
        """
        meta = None
        times, rows, masks, unknown = [], [], [], []
        for line_number, line in enumerate(lines, start=1):
            if isinstance(line, bytes):
                try:
                    line = line.decode("utf-8")
                except UnicodeDecodeError:
                    raise StreamParseError(line_number, "invalid UTF-8") from None
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                raise StreamParseError(line_number, f"invalid JSON: {e.msg}") from e
            except ValueError as e:
                raise StreamParseError(line_number, f"invalid JSON: {str(e)}") from e

            if meta is None:
                meta = DataHandler._parse_meta(line_number, record)
                continue

            row = np.full((JOINT_COUNT, 3), np.nan)
            mask = np.zeros(JOINT_COUNT, dtype=bool)
            t, names = DataHandler._parse_frame(line_number, record, row, mask)
            unknown.extend((len(times), name) for name in names)
            times.append(t)
            rows.append(row)
            masks.append(mask)

        if meta is None:
            raise StreamParseError(1, "missing metadata record")

        positions = np.array(rows).reshape(len(times), JOINT_COUNT, 3)
        present = np.array(masks, dtype=bool).reshape(len(times), JOINT_COUNT)
        return MotionStream(meta=meta, times=times, positions=positions, present=present, unknown_joints=unknown)

    @staticmethod
    def read_stream(file_path: str, lenient: bool = False) -> MotionStream:
        """
        Read and validate a stream file.

        Args:
            file_path (str): The path to the stream file.
            lenient (bool): Log validation issues as warnings instead of failing.

        Returns:
            MotionStream: The parsed stream.

        Raises:
            StreamIOError: If the file cannot be read.
            StreamParseError: If a record is malformed.
            ValidationFailedError: If validation fails and ``lenient`` is False.
        """
        if not os.path.exists(file_path):
            error_msg = f"File not found: {file_path}"
            logger.error(error_msg)
            raise StreamIOError(file_path, "file not found")

        logger.info(f"Reading stream from {file_path}")
        try:
            with open(file_path, "rb") as handle:
                stream = DataHandler.parse_stream(handle)
        except OSError as e:
            error_msg = f"Error reading stream file {file_path}: {str(e)}"
            logger.error(error_msg)
            raise StreamIOError(file_path, str(e)) from e
        except StreamParseError as e:
            logger.error(f"Error parsing stream file {file_path}: {str(e)}")
            raise

        report = validate_stream(stream)
        if not report.ok:
            if not lenient:
                error_msg = f"Stream {file_path} failed validation with {len(report.issues)} issue(s)"
                logger.error(error_msg)
                raise ValidationFailedError(report)
            for issue in report.issues:
                logger.warning(f"{file_path}: frame {issue.frame_index}: {issue.code.value} {issue.detail}")

        logger.info(f"Successfully read {len(stream)} frames from {file_path}")
        return stream

    @staticmethod
    def format_stream(stream: MotionStream) -> List[str]:
        """Serialize a stream to NDJSON lines (without newlines)."""
        meta = stream.meta
        header = {"format_version": FORMAT_VERSION, "subject_id": meta.subject_id}
        if meta.height_m is not None:
            header["height_m"] = meta.height_m
        header["frame_rate_hz"] = meta.frame_rate_hz
        header["exercise_tag"] = meta.exercise_tag
        header["provenance"] = list(meta.provenance)

        lines = [json.dumps(header)]
        positions = stream.positions.tolist()
        present = stream.present.tolist()
        for t, row, mask in zip(stream.times.tolist(), positions, present):
            joints = {joint.value: row[j] for j, joint in enumerate(JOINTS) if mask[j]}
            lines.append(json.dumps({"t": t, "joints": joints}))
        return lines

    @staticmethod
    def write_stream(stream: MotionStream, file_path: str) -> None:
        """
        Write a stream file that :meth:`read_stream` reads back unchanged.

        Raises:
            StreamIOError: If the file cannot be written.
        """
        try:
            os.makedirs(os.path.dirname(os.path.abspath(file_path)), exist_ok=True)
            logger.info(f"Writing {len(stream)} frames to {file_path}")
            with open(file_path, "w", encoding="utf-8") as handle:
                for line in DataHandler.format_stream(stream):
                    handle.write(line + "\n")
        except OSError as e:
            error_msg = f"Error writing stream file {file_path}: {str(e)}"
            logger.error(error_msg)
            raise StreamIOError(file_path, str(e)) from e

    @staticmethod
    def write_csv(
        file_path: str,
        data: Union[pd.DataFrame, List[Dict[str, Any]]],
        fieldnames: Optional[List[str]] = None,
    ) -> None:
        """
        Write data to a CSV file.

        Args:
            file_path (str): The path to the output CSV file.
            data (DataFrame or list): Rows to write.
            fieldnames (list, optional): Column order for the header. Missing
                columns are added empty.

        Raises:
            ValueError: If data is empty and no fieldnames are given.
            StreamIOError: If the file cannot be written.
        """
        df = data if isinstance(data, pd.DataFrame) else pd.DataFrame(data)
        if df.empty and not fieldnames:
            error_msg = "Cannot write CSV: data is empty and no fieldnames provided"
            logger.error(error_msg)
            raise ValueError(error_msg)

        if fieldnames:
            for field in fieldnames:
                if field not in df.columns:
                    df[field] = ""
            df = df[fieldnames]

        try:
            os.makedirs(os.path.dirname(os.path.abspath(file_path)), exist_ok=True)
            logger.info(f"Writing {len(df)} rows to {file_path}")
            df.to_csv(file_path, index=False)
        except OSError as e:
            error_msg = f"Error writing CSV file {file_path}: {str(e)}"
            logger.error(error_msg)
            raise StreamIOError(file_path, str(e)) from e

    @staticmethod
    def error_table(errors: ErrorSeries) -> pd.DataFrame:
        """One row per (frame, joint) with per-axis, position and speed errors."""
        n_frames, n_joints = errors.n_frames, len(errors.joints)
        if n_frames == 0 or n_joints == 0:
            raise EmptySeriesError("Cannot tabulate an empty error series")

        axis_error = errors.axis_error.reshape(-1, 3)
        return pd.DataFrame({
            "frame_index": np.repeat(np.arange(n_frames), n_joints),
            "t_s": np.repeat(errors.times, n_joints),
            "joint": np.tile([joint.value for joint in errors.joints], n_frames),
            "err_x_m": axis_error[:, 0],
            "err_y_m": axis_error[:, 1],
            "err_z_m": axis_error[:, 2],
            "err_pos_m": errors.position_error.reshape(-1),
            "err_speed_mps": errors.speed_error.reshape(-1),
        }, columns=ERROR_CSV_COLUMNS)

    @staticmethod
    def export_errors_csv(errors: ErrorSeries, file_path: str) -> None:
        """
        Write an error series as CSV.

        Raises:
            EmptySeriesError: If the series has no frames or no joints.
            StreamIOError: If the file cannot be written.
        """
        DataHandler.write_csv(file_path, DataHandler.error_table(errors), ERROR_CSV_COLUMNS)

    @staticmethod
    def write_report(report: AnalysisReport, file_path: Optional[str] = None) -> str:
        """
        Serialize a report as indented JSON, optionally writing it to a file.

        Returns:
            str: The JSON text.
        """
        text = report.model_dump_json(indent=2)
        if file_path:
            try:
                os.makedirs(os.path.dirname(os.path.abspath(file_path)), exist_ok=True)
                with open(file_path, "w", encoding="utf-8") as handle:
                    handle.write(text + "\n")
                logger.info(f"Report written to {file_path}")
            except OSError as e:
                error_msg = f"Error writing report {file_path}: {str(e)}"
                logger.error(error_msg)
                raise StreamIOError(file_path, str(e)) from e
        return text

    @staticmethod
    def read_report(file_path: str) -> AnalysisReport:
        """
        Read a report written by :meth:`write_report`.

        Raises:
            StreamIOError: If the file is missing or unreadable.
            StreamParseError: If the content is not a valid report.
        """
        try:
            with open(file_path, encoding="utf-8") as handle:
                text = handle.read()
        except OSError as e:
            error_msg = f"Error reading report {file_path}: {str(e)}"
            logger.error(error_msg)
            raise StreamIOError(file_path, str(e)) from e
        except UnicodeDecodeError:
            raise StreamParseError(1, "invalid UTF-8 in report") from None
        try:
            return AnalysisReport.model_validate_json(text)
        except ValidationError as e:
            raise StreamParseError(1, f"invalid report: {e.errors()[0]['msg']}") from e
