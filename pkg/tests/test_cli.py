import argparse
import csv
import io

import pytest

from metrobound.cli.emit import RecordSink, format_value, parse_json
from metrobound.cli.main import (
    EXIT_FAILED,
    EXIT_OK,
    EXIT_USAGE,
    main,
    parse_float_grid,
    parse_int_grid,
)
from metrobound.schemas.records import BoundsRecord, QfiRecord
from metrobound.version import LIBRARY_VERSION


def _rows(path):
    with path.open(encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


@pytest.mark.parametrize(
    "text,expected",
    [
        ("3..9", [3, 4, 5, 6, 7, 8, 9]),
        ("3..9:2", [3, 5, 7, 9]),
        ("1,4..6", [1, 4, 5, 6]),
        ("10", [10]),
    ],
)
def test_parse_int_grid(text, expected):
    assert parse_int_grid(text) == expected


@pytest.mark.parametrize("text", ["9..3", "a", "3..9:0", ""])
def test_parse_int_grid_invalid(text):
    with pytest.raises(argparse.ArgumentTypeError):
        parse_int_grid(text)


def test_parse_float_grid():
    assert parse_float_grid("0..1:0.25") == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert parse_float_grid("0.1,0.5") == [0.1, 0.5]
    with pytest.raises(argparse.ArgumentTypeError):
        parse_float_grid("0..1")


def test_format_value():
    assert format_value(None) == ""
    assert format_value(True) == "true"
    assert format_value(False) == "false"
    assert format_value(1e-5) == "1e-05"
    assert format_value(0.5) == "0.5"
    assert format_value(7) == "7"


def test_sink_counts_failures():
    stream = io.StringIO()
    sink = RecordSink(stream, BoundsRecord, "csv")
    sink.open()
    sink.write_all(
        [BoundsRecord(n=3, k=1, cent=9.0), BoundsRecord(n=2, k=2, error="falhou")]
    )
    sink.close()
    assert (sink.written, sink.failed) == (2, 1)
    lines = stream.getvalue().splitlines()
    assert lines[0] == ",".join(BoundsRecord.csv_header())
    assert lines[0].endswith("seed,version,error")
    assert len(lines) == 3


def test_empty_json_output():
    stream = io.StringIO()
    sink = RecordSink(stream, QfiRecord, "json")
    sink.open()
    sink.close()
    assert parse_json(stream.getvalue(), QfiRecord) == []


def test_bounds_grid(tmp_path):
    out = tmp_path / "bounds.csv"
    argv = ["bounds", "--n", "3..9", "--k", "1..3", "--starts", "3"]
    code = main([*argv, "--out", str(out)])
    assert code == EXIT_OK
    rows = _rows(out)
    assert len(rows) == 21
    assert [(int(r["n"]), int(r["k"])) for r in rows] == [
        (n, k) for n in range(3, 10) for k in (1, 2, 3)
    ]
    cell = next(r for r in rows if r["n"] == "3" and r["k"] == "2")
    assert float(cell["csep_analytic"]) == pytest.approx(4.0)
    assert float(cell["cent"]) == pytest.approx(4.0)
    assert all(r["error"] == "" and r["version"] == LIBRARY_VERSION for r in rows)


def test_bounds_error_row_sets_exit_code(tmp_path):
    out = tmp_path / "bounds.csv"
    code = main(["bounds", "--n", "2", "--k", "2", "--starts", "2", "--out", str(out)])
    assert code == EXIT_FAILED
    (row,) = _rows(out)
    assert row["error"] != ""
    assert row["csep_analytic"] == ""


def test_bounds_requires_grids(tmp_path):
    assert main(["bounds", "--n", "4", "--out", str(tmp_path / "x.csv")]) == EXIT_USAGE


@pytest.mark.parametrize(
    "argv",
    [
        ["bounds", "--n", "4", "--k", "0"],
        ["nope"],
        ["qfi", "--eta", "1.5"],
        ["fig2a", "--n", "5", "--samples", "10"],
    ],
)
def test_usage_errors(argv, tmp_path):
    assert main([*argv, "--out", str(tmp_path / "out.csv")]) == EXIT_USAGE


def test_version_flag(capsys):
    assert main(["--version"]) == EXIT_OK
    assert LIBRARY_VERSION in capsys.readouterr().out


def test_qfi_json_round_trip(tmp_path):
    out = tmp_path / "qfi.json"
    assert main(["qfi", "--format", "json", "--out", str(out)]) == EXIT_OK
    records = parse_json(out.read_text(encoding="utf-8"), QfiRecord)
    assert [r.k for r in records] == [1, 2, 3]
    for r in records:
        assert r.qfi_explicit == pytest.approx(r.qfi_closed, rel=1e-8, abs=1e-8)
    # GHZ: k = 1 satura C_ent, k = 2 não tem informação
    assert records[0].qfi_closed == pytest.approx(16.0)
    assert records[1].qfi_closed == pytest.approx(0.0)


def test_qfi_odd_n_with_singlet_is_error_row(tmp_path):
    out = tmp_path / "qfi.csv"
    argv = ["qfi", "--n", "5", "--k", "2", "--lambda1", "0.25", "--lambda2", "0.25"]
    assert main([*argv, "--out", str(out)]) == EXIT_FAILED
    assert _rows(out)[0]["error"] != ""


def test_stdout_output(capsys):
    assert main(["fig6", "--n", "10,1000", "--k", "1"]) == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert [r["n"] for r in rows] == ["10", "1000"]
    assert all(0.0 <= float(r["gamma"]) <= 1.0 for r in rows)


def test_sampled_output_is_reproducible(tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["fig2a", "--samples", "500", "--seed", "3"]
    assert main([*argv, "--out", str(first)]) == EXIT_OK
    assert main([*argv, "--out", str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
    assert len(_rows(first)) == 500


def test_fig7_small_grid(tmp_path):
    out = tmp_path / "fig7.csv"
    argv = ["fig7", "--n", "3..4", "--k", "1..3", "--starts", "3", "--out", str(out)]
    assert main(argv) == EXIT_OK
    rows = _rows(out)
    assert len(rows) == 6
    for r in rows:
        if r["k"] == "1":
            assert float(r["s"]) == pytest.approx(float(r["n"]), rel=1e-6)


def test_fig3_small_grid(tmp_path):
    out = tmp_path / "fig3.csv"
    assert main(["fig3", "--n", "3,4", "--mu", "0,1", "--out", str(out)]) == EXIT_OK
    rows = _rows(out)
    assert [(r["n"], r["mu"]) for r in rows] == [
        ("3", "0.0"),
        ("3", "1.0"),
        ("4", "0.0"),
        ("4", "1.0"),
    ]


def test_fig5_and_fig2b(tmp_path):
    fig5 = tmp_path / "fig5.csv"
    assert main(["fig5", "--variant", "c", "--grid", "3", "--out", str(fig5)]) == 0
    assert len(_rows(fig5)) == 9
    fig2b = tmp_path / "fig2b.csv"
    argv = ["fig2b", "--n", "10", "--k", "1", "--samples", "3", "--out", str(fig2b)]
    assert main(argv) == EXIT_OK
    assert [r["sample"] for r in _rows(fig2b)] == ["0", "1", "2"]


def test_average_command(tmp_path):
    out = tmp_path / "avg.csv"
    argv = ["average", "--n", "4", "--k", "1", "--samples", "200", "--out", str(out)]
    assert main(argv) == EXIT_OK
    (row,) = _rows(out)
    assert float(row["analytic"]) == pytest.approx(20 / 3)
    assert row["n_samples"] == "200"


@pytest.mark.parametrize(
    "argv",
    [
        ["fig5", "--n", "6", "--grid", "3"],
        ["fig3", "--n", "3,4", "--mu", "0,1"],
        ["fig6", "--n", "10,100", "--k", "1"],
        ["fig2a", "--samples", "20"],
        ["fig7", "--n", "3", "--k", "1", "--starts", "2"],
    ],
)
def test_every_row_carries_seed_and_version(argv, tmp_path):
    out = tmp_path / "out.csv"
    assert main([*argv, "--seed", "99", "--out", str(out)]) == EXIT_OK
    rows = _rows(out)
    assert rows
    assert {r["seed"] for r in rows} == {"99"}
    assert {r["version"] for r in rows} == {LIBRARY_VERSION}
