import json
import os

import pytest

from form_analyzer.main import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, build_parser, cli_main
from form_analyzer.synthgen import BicepCurl, DefectSpec, generate
from form_analyzer.utils.config import CONFIG_ENV_VAR
from form_analyzer.utils.data_handler import AnalysisReport, DataHandler


@pytest.fixture(autouse=True)
def no_config_env(monkeypatch):
    monkeypatch.delenv(CONFIG_ENV_VAR, raising=False)


@pytest.fixture
def curl_file(tmp_path):
    """Create a noise-free 10 to 150 degree curl stream file via the CLI."""
    path = os.path.join(tmp_path, "curl.ndjson")
    assert cli_main(["gen", "--template", "BicepCurl", "--noise", "0", "-o", path]) == EXIT_OK
    return path


def run(argv, capsys):
    code = cli_main(argv)
    return code, capsys.readouterr().out


def test_build_parser_subcommands():
    parser = build_parser()
    args = parser.parse_args(["compare", "--ref", "a.ndjson", "--test", "b.ndjson", "--no-scale"])

    assert args.command == "compare"
    assert args.no_scale is True
    assert args.plot == "position"


def test_gen_writes_stream(curl_file):
    stream = DataHandler.read_stream(curl_file)

    assert stream == generate(BicepCurl(), DefectSpec(), seed=0)
    assert stream.meta.provenance == ("synthgen seed=0",)


def test_gen_to_stdout(capsys):
    code, out = run(["gen", "--template", "PushPress", "--duration", "1", "--seed", "7"], capsys)

    assert code == EXIT_OK
    lines = out.splitlines()
    assert json.loads(lines[0])["exercise_tag"] == "PushPress"
    assert len(lines) == 31


def test_compare_self(curl_file, capsys):
    """Test that comparing a stream with itself exits 0 with a zero score."""
    code, out = run(["compare", "--ref", curl_file, "--test", curl_file], capsys)

    assert code == EXIT_OK
    report = AnalysisReport.model_validate_json(out)
    assert report.mode == "compare"
    assert report.results["ps"] == 0.0


def test_score_from_report(tmp_path, capsys):
    """Test scoring a report with error terms (3, 6, 0) and unit weights."""
    path = os.path.join(tmp_path, "report.json")
    DataHandler.write_report(
        AnalysisReport(mode="compare", inputs={}, results={"e_p_m": 3.0, "e_s_mps": 6.0, "e_b": 0.0}), path
    )

    code, out = run(["score", "--report", path, "--weights", "1,1,1"], capsys)

    assert code == EXIT_OK
    assert json.loads(out)["results"]["ps"] == 3.0


def test_rom_curl(curl_file, capsys):
    code, out = run(["rom", curl_file, "--joint", "ElbowLeft", "--motion", "Flexion"], capsys)

    assert code == EXIT_OK
    results = json.loads(out)["results"]
    assert results["standard_deg"] == 140.0
    assert results["deviation_deg"] < 1.0


def test_balance_and_pose_match(curl_file, capsys):
    code, out = run(["balance", curl_file], capsys)
    assert code == EXIT_OK
    assert json.loads(out)["results"]["e_b"] == 0.0

    code, out = run(["pose-match", "--ref", curl_file, "--test", curl_file, "--ref-frame", "5", "--tolerance", "1"], capsys)
    assert code == EXIT_OK
    assert json.loads(out)["results"]["frames"][5]["matched"] is True


def test_validate(curl_file, tmp_path, capsys):
    code, out = run(["validate", curl_file], capsys)
    assert code == EXIT_OK
    assert json.loads(out)["ok"] is True

    stream = DataHandler.read_stream(curl_file)
    times = stream.times.copy()
    times[2] = times[1]
    bad = os.path.join(tmp_path, "bad.ndjson")
    DataHandler.write_stream(stream.replace(times=times), bad)

    code, out = run(["validate", bad], capsys)
    assert code == EXIT_FAILURE
    assert json.loads(out)["issues"][0]["code"] == "NonMonotoneTime"


def test_output_file(curl_file, tmp_path, capsys):
    path = os.path.join(tmp_path, "balance.json")
    code, out = run(["balance", curl_file, "-o", path], capsys)

    assert code == EXIT_OK
    assert DataHandler.read_report(path) == AnalysisReport.model_validate_json(out)


@pytest.mark.parametrize("argv", [
    ["compare", "--ref", "a.ndjson"],
    ["rom", "a.ndjson", "--joint", "Tail", "--motion", "Flexion"],
    ["gen", "--template", "Squat"],
    ["gen", "--seed", "-1"],
    ["score"],
])
def test_usage_errors(argv):
    """Test that malformed invocations exit with the usage code."""
    assert cli_main(argv) == EXIT_USAGE


@pytest.mark.parametrize("weights", ["1,2", "0,0,0", "a,b,c", "-1,1,1"])
def test_malformed_weights(curl_file, weights):
    assert cli_main(["compare", "--ref", curl_file, "--test", curl_file, "--weights", weights]) == EXIT_USAGE


def test_config_file(curl_file, tmp_path, monkeypatch, capsys):
    config = os.path.join(tmp_path, "form_analyzer.ini")
    with open(config, "w", encoding="utf-8") as handle:
        handle.write("[form_analyzer]\nweights = 2,0,0\nhalf_width = 1\n")

    code, out = run(["compare", "--ref", curl_file, "--test", curl_file, "--config", config], capsys)
    assert code == EXIT_OK
    assert json.loads(out)["inputs"]["settings"]["half_width"] == 1
    assert json.loads(out)["results"]["weights"]["w_p"] == 2.0

    monkeypatch.setenv(CONFIG_ENV_VAR, config)
    code, out = run(["compare", "--ref", curl_file, "--test", curl_file, "--half-width", "3"], capsys)
    assert code == EXIT_OK
    assert json.loads(out)["inputs"]["settings"]["half_width"] == 3


def test_config_errors(curl_file, tmp_path):
    missing = os.path.join(tmp_path, "absent.ini")
    assert cli_main(["balance", curl_file, "--config", missing]) == EXIT_USAGE

    config = os.path.join(tmp_path, "bad.ini")
    with open(config, "w", encoding="utf-8") as handle:
        handle.write("[form_analyzer]\npasses = 0\n")
    assert cli_main(["balance", curl_file, "--config", config]) == EXIT_USAGE

    config = os.path.join(tmp_path, "no_section.ini")
    with open(config, "w", encoding="utf-8") as handle:
        handle.write("weights = 1,1,1\n")
    assert cli_main(["balance", curl_file, "--config", config]) == EXIT_USAGE


def test_analysis_failures(curl_file, tmp_path):
    """Test that analysis-domain and I/O failures exit 1."""
    missing = os.path.join(tmp_path, "absent.ndjson")
    assert cli_main(["balance", missing]) == EXIT_FAILURE
    assert cli_main(["gen", "--duration", "0.01"]) == EXIT_FAILURE

    short = os.path.join(tmp_path, "short.ndjson")
    assert cli_main(["gen", "--duration", "2", "-o", short]) == EXIT_OK
    assert cli_main(["compare", "--ref", curl_file, "--test", short, "--no-resample"]) == EXIT_FAILURE


def test_unreadable_stream_content(curl_file, tmp_path):
    """Test that undecodable or oversized stream content exits 1."""
    with open(curl_file, "rb") as handle:
        content = handle.read()

    bad_utf8 = os.path.join(tmp_path, "bad_utf8.ndjson")
    with open(bad_utf8, "wb") as handle:
        handle.write(content + b"\xff\xfe\n")
    assert cli_main(["balance", bad_utf8]) == EXIT_FAILURE

    huge = os.path.join(tmp_path, "huge.ndjson")
    with open(huge, "wb") as handle:
        handle.write(content + b'{"t": 1' + b"0" * 400 + b', "joints": {}}\n')
    assert cli_main(["balance", huge]) == EXIT_FAILURE


def test_help(capsys):
    assert cli_main(["--help"]) == EXIT_OK
    assert "compare" in capsys.readouterr().out


def test_identical_invocations_are_byte_identical(tmp_path):
    ref = os.path.join(tmp_path, "ref.ndjson")
    test = os.path.join(tmp_path, "test.ndjson")
    assert cli_main(["gen", "--noise", "0.003", "--seed", "4", "-o", ref]) == EXIT_OK
    assert cli_main(["gen", "--noise", "0.003", "--seed", "5", "--tempo-error", "0.2", "-o", test]) == EXIT_OK

    outputs = []
    for run_index in range(2):
        csv_path = os.path.join(tmp_path, f"errors_{run_index}.csv")
        svg_path = os.path.join(tmp_path, f"errors_{run_index}.svg")
        argv = ["compare", "--ref", ref, "--test", test, "--out-csv", csv_path, "--out-svg", svg_path, "--plot", "speed"]
        assert cli_main(argv) == EXIT_OK
        with open(csv_path, "rb") as csv_handle, open(svg_path, "rb") as svg_handle:
            outputs.append((csv_handle.read(), svg_handle.read()))

    assert outputs[0] == outputs[1]
