"""Tests for the report and curve commands."""

import csv
import io
import json
import typing as t

import pytest

from expectiles import EXIT_OK, EXIT_PARSE_ERROR, EXIT_USAGE_ERROR
from expectiles.__main__ import main
from expectiles.curve import parse_grid
from expectiles.errors import GridSpecError

if t.TYPE_CHECKING:
    from pathlib import Path


def _run(args: list[str]) -> int:
    try:
        main(args)
    except SystemExit as e:
        return int(e.code or EXIT_OK)
    return EXIT_OK


def _csv_rows(text: str) -> list[dict[str, str]]:
    body = "\n".join(line for line in text.splitlines() if not line.startswith("#"))
    return list(csv.DictReader(io.StringIO(body)))


@pytest.fixture
def u3_file(tmp_path: "Path") -> "Path":
    path = tmp_path / "u3.json"
    path.write_text(json.dumps({"outcomes": [0, 1, 2], "probs": [1 / 3, 1 / 3, 1 / 3]}), encoding="utf-8")
    return path


@pytest.fixture
def sample_file(tmp_path: "Path") -> "Path":
    path = tmp_path / "samples.txt"
    path.write_text("# two draws\n0\n\n1\n", encoding="utf-8")
    return path


def test_report_csv(u3_file: "Path", capsys: pytest.CaptureFixture[str]) -> None:
    assert _run(["report", "--input", str(u3_file), "--tau", "0.2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "# format=distribution" in out
    assert "# support_size=3" in out
    assert "# scan_argmin tau=0.20000000000000001 x=0.3333333333333333" in out
    (row,) = _csv_rows(out)
    assert float(row["tau"]) == 0.2
    assert float(row["expectile"]) == pytest.approx(0.5, abs=1e-12)
    assert float(row["comonotone_v"]) == pytest.approx(4 / 9, abs=1e-12)
    assert float(row["e_sigma"]) == pytest.approx(1 / 6, abs=1e-12)
    assert float(row["cvar_lb"]) == pytest.approx(0.0, abs=1e-12)


def test_report_default_levels(u3_file: "Path", capsys: pytest.CaptureFixture[str]) -> None:
    assert _run(["report", "--input", str(u3_file)]) == EXIT_OK
    assert [float(row["tau"]) for row in _csv_rows(capsys.readouterr().out)] == [0.05, 0.2, 0.4]


def test_report_samples(sample_file: "Path", capsys: pytest.CaptureFixture[str]) -> None:
    assert _run(["report", "--input", str(sample_file), "--tau", "0.5"]) == EXIT_OK
    (row,) = _csv_rows(capsys.readouterr().out)
    assert float(row["expectile"]) == pytest.approx(0.5, abs=1e-12)
    assert float(row["comonotone_v"]) == pytest.approx(0.5, abs=1e-12)


def test_report_json(u3_file: "Path", capsys: pytest.CaptureFixture[str]) -> None:
    assert _run(["report", "--input", str(u3_file), "--tau", "0.2,0.5", "--output", "json"]) == EXIT_OK
    document = json.loads(capsys.readouterr().out)
    assert document["meta"]["support_size"] == 3
    assert document["meta"]["format"] == "distribution"
    assert [entry["tau"] for entry in document["meta"]["scan_argmin"]] == [0.2, 0.5]
    assert [row["tau"] for row in document["rows"]] == [0.2, 0.5]
    assert document["rows"][1]["expectile"] == pytest.approx(1.0, abs=1e-12)


def test_report_point_mass(tmp_path: "Path", capsys: pytest.CaptureFixture[str]) -> None:
    path = tmp_path / "constant.txt"
    path.write_text("2.5\n2.5\n2.5\n", encoding="utf-8")
    assert _run(["report", "--input", str(path)]) == EXIT_OK
    for row in _csv_rows(capsys.readouterr().out):
        assert row["expectile"] == "2.5"
        for column in ("comonotone_v", "e_sigma", "cvar_lb"):
            assert float(row[column]) == pytest.approx(2.5, abs=1e-12)


@pytest.mark.parametrize(
    "content",
    [
        "{not json",
        '{"outcomes": [0, 1]}',
        '{"outcomes": [0, 1], "probs": [0.5, "half"]}',
        '{"outcomes": [0, 1], "probs": [0.5, 0.6]}',
        '{"outcomes": [0, 1], "probs": [1.0]}',
    ],
)
def test_report_rejects_malformed_distributions(tmp_path: "Path", content: str) -> None:
    path = tmp_path / "bad.json"
    path.write_text(content, encoding="utf-8")
    assert _run(["report", "--input", str(path)]) == EXIT_PARSE_ERROR


def test_report_rejects_malformed_samples(tmp_path: "Path") -> None:
    path = tmp_path / "bad.txt"
    path.write_text("1.0\nfoo\n", encoding="utf-8")
    assert _run(["report", "--input", str(path)]) == EXIT_PARSE_ERROR
    path.write_text("# nothing\n", encoding="utf-8")
    assert _run(["report", "--input", str(path)]) == EXIT_PARSE_ERROR
    assert _run(["report", "--input", str(path.with_name("missing.txt"))]) == EXIT_PARSE_ERROR


@pytest.mark.parametrize(
    ("name", "content"), [("bad.txt", b"0\n\xff\xfe\n1\n"), ("bad.json", b'{"outcomes": [\xff]}')]
)
def test_report_rejects_invalid_utf8(tmp_path: "Path", name: str, content: bytes) -> None:
    path = tmp_path / name
    path.write_bytes(content)
    assert _run(["report", "--input", str(path)]) == EXIT_PARSE_ERROR
    assert _run(["curve", "--input", str(path), "--grid", "0.1:0.5:3"]) == EXIT_PARSE_ERROR


def test_report_rejects_outcomes_beyond_float_range(tmp_path: "Path") -> None:
    path = tmp_path / "huge.json"
    path.write_text('{"outcomes": [0, 1' + "0" * 400 + '], "probs": [0.5, 0.5]}', encoding="utf-8")
    assert _run(["report", "--input", str(path)]) == EXIT_PARSE_ERROR


@pytest.mark.parametrize("tau", ["0.7", "0", "-0.1", "abc", ""])
def test_report_rejects_levels(u3_file: "Path", tau: str) -> None:
    assert _run(["report", "--input", str(u3_file), "--tau", tau]) == EXIT_USAGE_ERROR


@pytest.mark.parametrize("command", [["report", "--input", "unused.json"], ["audit"]])
def test_every_bad_level_is_reported(command: list[str], caplog: pytest.LogCaptureFixture) -> None:
    assert _run([*command, "--tau", "0.7,0.2,0.8"]) == EXIT_USAGE_ERROR
    errors = [record.getMessage() for record in caplog.records if record.levelname == "ERROR"]
    assert any("got 0.7" in message for message in errors)
    assert any("got 0.8" in message for message in errors)


def test_usage_errors(u3_file: "Path") -> None:
    assert _run([]) == EXIT_USAGE_ERROR
    assert _run(["report"]) == EXIT_USAGE_ERROR
    assert _run(["report", "--input", str(u3_file), "--output", "xml"]) == EXIT_USAGE_ERROR
    assert _run(["audit", "--trials", "0"]) == EXIT_USAGE_ERROR
    assert _run(["audit", "--tau", "0.6"]) == EXIT_USAGE_ERROR
    assert _run(["curve", "--input", str(u3_file)]) == EXIT_USAGE_ERROR


def test_curve(u3_file: "Path", capsys: pytest.CaptureFixture[str]) -> None:
    assert _run(["curve", "--input", str(u3_file), "--grid", "0.01:0.5:50"]) == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 50
    assert float(rows[0]["tau"]) == pytest.approx(0.01)
    assert float(rows[-1]["tau"]) == 0.5
    assert float(rows[-1]["expectile"]) == pytest.approx(1.0, abs=1e-12)
    values = [float(row["expectile"]) for row in rows]
    assert all(b >= a - 1e-10 for a, b in zip(values, values[1:], strict=False))


def test_curve_point_mass(tmp_path: "Path", capsys: pytest.CaptureFixture[str]) -> None:
    path = tmp_path / "point.json"
    path.write_text('{"outcomes": [-3], "probs": [1]}', encoding="utf-8")
    assert _run(["curve", "--input", str(path), "--grid", "0.1:0.5:5"]) == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert {row["expectile"] for row in rows} == {"-3"}


@pytest.mark.parametrize("grid", ["0:0.5:10", "0.1:0.6:3", "0.3:0.1:3", "0.1:0.5:0", "0.1:0.5", "a:b:c", "0.1:0.2:1"])
def test_curve_rejects_grids(u3_file: "Path", grid: str) -> None:
    assert _run(["curve", "--input", str(u3_file), "--grid", grid]) == EXIT_USAGE_ERROR


def test_parse_grid() -> None:
    assert parse_grid("0.5:0.5:1") == [0.5]
    assert parse_grid("0.1:0.5:5") == pytest.approx([0.1, 0.2, 0.3, 0.4, 0.5])
    with pytest.raises(GridSpecError):
        parse_grid("0.1:0.5:-2")
