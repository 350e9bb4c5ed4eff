import json
from fractions import Fraction

import pytest

from radtails import cli


def run_json(capsys, argv):
    code = cli.run(argv)
    out = capsys.readouterr().out.strip().splitlines()
    docs = [json.loads(line) for line in out]
    return code, docs


def strip_timestamps(docs):
    return [{k: v for k, v in d.items() if k != "timestamp"} for d in docs]


class TestTailCommands:
    def test_equal_unit_threshold(self, capsys):
        code, docs = run_json(capsys, ["tail", "equal", "--n", "1", "--x2", "1/1"])
        assert code == 0
        assert docs[-1]["tail"] == "1/2"

    def test_two_atom_flagship_instance(self, capsys):
        code, docs = run_json(
            capsys, ["tail", "two-atom", "--n", "10", "--t2", "5/37", "--x2", "37/5"]
        )
        assert code == 0
        assert docs[-1]["tail"] == "11/2048"

    def test_negative_threshold_sign(self, capsys):
        code, docs = run_json(
            capsys, ["tail", "equal", "--n", "3", "--x2", "9/1", "--x-sign", "-1"]
        )
        assert code == 0
        assert docs[-1]["tail"] == "1/1"


class TestVerifyCommand:
    def test_series_default_counterexample(self, capsys):
        code, docs = run_json(capsys, ["verify", "--n", "8"])
        assert code == 0
        doc = docs[-1]
        assert doc["verdict"] == "COUNTEREXAMPLE"
        assert doc["p_star"] == "9/512"
        assert doc["be_threshold_j"] == 3461

    def test_undecided_exit_code(self, capsys):
        code, docs = run_json(capsys, ["verify", "--n", "12"])
        assert code == 2
        assert docs[-1]["verdict"] == "UNDECIDED"

    def test_text_format(self, capsys):
        code = cli.run(["verify", "--n", "8", "--format", "text"])
        out = capsys.readouterr().out
        assert code == 0
        assert "verdict        : COUNTEREXAMPLE" in out

    def test_explicit_triple(self, capsys):
        code, docs = run_json(
            capsys, ["verify", "--n", "10", "--x2", "37/5", "--t2", "5/37"]
        )
        assert code == 0
        assert docs[-1]["verdict"] == "COUNTEREXAMPLE"
        assert docs[-1]["be_threshold_j"] == 50640


class TestThresholdCommand:
    def test_flagship_threshold(self, capsys):
        code, docs = run_json(
            capsys, ["threshold", "--x2", "37/5", "--p-target", "11/2048"]
        )
        assert code == 0
        assert docs[-1]["threshold"] == 50640

    def test_no_finite_threshold_is_reported_not_fatal(self, capsys):
        code, docs = run_json(
            capsys, ["threshold", "--x2", "86/5", "--p-target", "21/2097152"]
        )
        assert code == 0
        assert docs[-1]["threshold"] is None
        assert "reason" in docs[-1]


class TestScanCommand:
    def test_scan_with_reference(self, capsys):
        code, docs = run_json(
            capsys,
            ["scan", "--x2", "37/5", "--max-j", "200", "--p-ref", "11/2048", "--jobs", "2"],
        )
        assert code == 0
        doc = docs[-1]
        assert doc["beaten_by"] == "11/2048"
        assert doc["max_value"] == "20348061/4294967296"
        assert doc["argmax_j"] == 39

    def test_progress_stream(self, capsys):
        code, docs = run_json(
            capsys,
            ["scan", "--x2", "37/5", "--max-j", "300", "--jobs", "3", "--progress"],
        )
        assert code == 0
        events = [d for d in docs if d.get("event") == "progress"]
        assert events and events[-1]["j"] == 300
        assert docs[-1]["command"] == "scan"


class TestSeriesCommand:
    def test_json_rows(self, capsys):
        code, docs = run_json(capsys, ["series", "--from", "8", "--to", "10"])
        assert code == 0
        rows = docs[-1]["rows"]
        assert [r["n"] for r in rows] == [8, 9, 10]
        assert rows[0]["tail_value"] == "9/512"
        assert all(r["vs_normal_tail"] == "fails" for r in rows)

    def test_csv_rows(self, capsys):
        code = cli.run(["series", "--from", "16", "--to", "17", "--format", "csv"])
        out = capsys.readouterr().out.strip().splitlines()
        assert code == 0
        assert out[0].startswith("n,x2,t2,tail_value")
        assert out[1].startswith("16,53/4,4/53,17/131072")
        assert out[1].endswith("holds")

    def test_range_validation(self, capsys):
        assert cli.run(["series", "--from", "7", "--to", "9"]) == 1


class TestSearchCommand:
    def test_records_then_summary(self, capsys):
        code, docs = run_json(
            capsys, ["search", "--grid-cap", "1", "--n-max", "2", "--scan-j", "50"]
        )
        assert code == 0
        records = [d for d in docs if d.get("record") == "candidate"]
        summary = docs[-1]
        assert summary["command"] == "search"
        assert summary["evaluated"] == len(records)
        assert summary["cells"] == summary["evaluated"] + summary["skipped"]

    def test_config_file_defaults(self, capsys, tmp_path):
        conf = tmp_path / "s.conf"
        conf.write_text("grid_cap = 1\nn_max = 2\nscan_j = 50\n")
        code, docs = run_json(capsys, ["--config", str(conf), "search"])
        assert code == 0
        assert docs[-1]["grid_cap"] == 1
        assert docs[-1]["scan_j"] == 50


class TestPlotCommand:
    def test_csv_grid(self, capsys):
        code = cli.run(["plot", "equal-tail", "--n", "6", "--points", "6", "--format", "csv"])
        out = capsys.readouterr().out.strip().splitlines()
        assert code == 0
        assert len(out) == 8  # header + 7 grid points
        assert out[1].split(",")[0] == "0/1"

    def test_json_grid_tail_values(self, capsys):
        code, docs = run_json(capsys, ["plot", "equal-tail", "--n", "4", "--points", "4"])
        assert code == 0
        rows = docs[-1]["rows"]
        assert rows[0]["tail"] == "11/16"  # P(sum >= 0) for 4 coordinates
        assert rows[-1]["tail"] == "1/16"  # only the all-plus pattern reaches sqrt(4)


class TestExitCodes:
    def test_malformed_rational(self, capsys):
        assert cli.run(["tail", "equal", "--n", "2", "--x2", "banana"]) == 1
        assert "usage error" in capsys.readouterr().err

    def test_missing_required_argument(self, capsys):
        assert cli.run(["tail", "equal", "--n", "2"]) == 1

    def test_out_of_range_parameter(self, capsys):
        assert cli.run(["tail", "two-atom", "--n", "2", "--t2", "5/4", "--x2", "1/1"]) == 1

    def test_help_exits_zero(self, capsys):
        assert cli.run(["--help"]) == 0

    def test_internal_error_maps_to_three(self, capsys, monkeypatch):
        def boom(*args, **kwargs):
            raise RuntimeError("synthetic failure")

        monkeypatch.setattr(cli, "tail_equal", boom)
        assert cli.run(["tail", "equal", "--n", "1", "--x2", "1/1"]) == 3
        assert "internal error" in capsys.readouterr().err


class TestDeterminism:
    def test_identical_invocations_match_modulo_timestamp(self, capsys):
        argv = ["scan", "--x2", "14/10", "--max-j", "120", "--jobs", "2"]
        _, first = run_json(capsys, argv)
        _, second = run_json(capsys, argv)
        assert strip_timestamps(first) == strip_timestamps(second)

    def test_verify_deterministic(self, capsys):
        argv = ["verify", "--n", "8"]
        _, first = run_json(capsys, argv)
        _, second = run_json(capsys, argv)
        first, second = strip_timestamps(first), strip_timestamps(second)
        for doc in (first[-1], second[-1]):
            doc.pop("wall_time_s")
        assert first == second
