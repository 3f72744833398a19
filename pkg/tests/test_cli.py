"""End-to-end command tests through ``main(argv)``."""

import json
import sys
import types

import pytest

from beanledger.cli import main

CASE_1_ROW = "case_1,1,,2159.6217,0.0000,0.0000,70187.71,32133.75,38053.96"
HEADER = "scenario,case_id,x,fc_kg,dc_kg,gcb_kg,revenue_php,cost_php,profit_php"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCaseCommand:
    def test_case_1_exact_bytes(self, capsys):
        code, out, err = run(capsys, "case", "--id", "1")
        assert code == 0
        assert err == ""
        assert out == HEADER + "\n" + CASE_1_ROW + "\n"

    def test_case_12_rows(self, capsys):
        code, out, _ = run(capsys, "case", "--id", "12")
        lines = out.splitlines()
        assert code == 0
        assert len(lines) == 4
        # x records the scan coordinate: the residual market id here
        assert lines[3].startswith("case_12_residual_5,12,5,0.0000,971.8298,")
        assert lines[3].endswith(",40179.48")

    def test_case_14_respects_grid_step(self, capsys):
        code, out, _ = run(capsys, "case", "--id", "14", "--grid-step", "0.5")
        assert code == 0
        assert [line.split(",")[2] for line in out.splitlines()[1:]] == ["0", "0.5", "1"]

    def test_unknown_case(self, capsys):
        code, out, err = run(capsys, "case", "--id", "99")
        assert code == 1
        assert out == ""
        assert err == "error: unknown case id: 99\n"

    def test_json_format(self, capsys):
        code, out, _ = run(capsys, "case", "--id", "1", "--format", "json")
        assert code == 0
        (row,) = json.loads(out)
        assert row["scenario"] == "case_1"
        assert row["profit_php"] == pytest.approx(38053.95525, abs=1e-6)


class TestEvaluateCommand:
    def test_zero_plan_pays_fixed_costs(self, capsys):
        code, out, _ = run(capsys, "evaluate")
        assert code == 0
        assert out.splitlines()[1] == "evaluate,,,0.0000,0.0000,0.0000,0.00,32133.75,-32133.75"

    def test_bearing_basis_flag(self, capsys):
        code, out, _ = run(capsys, "evaluate", "--basis", "bearing")
        assert code == 0
        assert out.splitlines()[1].endswith(",0.00,25707.00,-25707.00")

    def test_preset_plan(self, capsys):
        code, out, _ = run(capsys, "evaluate", "--plan", "all-fc", "--market", "2")
        assert code == 0
        assert out.splitlines()[1] == "evaluate,,," + CASE_1_ROW.split(",", 3)[3]

    def test_inline_json_plan(self, capsys):
        code, out, _ = run(capsys, "evaluate", "--plan", '{"delta": [0, 0, 1, 0, 0]}')
        assert code == 0
        assert out.splitlines()[1].endswith(",40179.48")

    def test_json_output_carries_full_precision(self, capsys):
        code, out, _ = run(
            capsys, "evaluate", "--plan", "all-dc", "--market", "3", "--format", "json"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["profit"] == pytest.approx(40179.482375, abs=1e-6)
        assert payload["warnings"] == []
        assert payload["plan"]["delta"] == [0.0, 0.0, 1.0, 0.0, 0.0]

    def test_preset_without_market(self, capsys):
        code, _, err = run(capsys, "evaluate", "--plan", "all-dc")
        assert code == 1
        assert "requires --market" in err

    def test_unknown_plan_keyword(self, capsys):
        code, _, err = run(capsys, "evaluate", "--plan", "everything")
        assert code == 1
        assert err.startswith("error: unknown plan")

    def test_broken_inline_json(self, capsys):
        code, _, err = run(capsys, "evaluate", "--plan", '{"beta": ')
        assert code == 1
        assert "--plan is not valid JSON" in err

    def test_oversubscribed_plan(self, capsys):
        code, _, err = run(capsys, "evaluate", "--plan", '{"beta": [0.6, 0.6, 0, 0, 0]}')
        assert code == 1
        assert "beta sums to 1.2 > 1" in err

    def test_wasted_mass_warns_but_succeeds(self, capsys):
        code, out, err = run(capsys, "evaluate", "--plan", '{"beta": [1, 0, 0, 0, 0]}')
        assert code == 0
        assert "warning:" in err and "does not buy FC" in err
        assert out.splitlines()[1].endswith(",0.00,32133.75,-32133.75")


class TestSweepCommand:
    def test_split_axis_row_count_and_values(self, capsys):
        code, out, _ = run(
            capsys,
            "sweep", "--axis", "split.fc.2.5", "--lo", "0", "--hi", "1", "--step", "0.05",
        )
        lines = out.splitlines()
        assert code == 0
        assert len(lines) == 22
        by_x = {line.split(",")[2]: line for line in lines[1:]}
        assert by_x["0.15"].endswith(",422.55")
        assert by_x["0.1"].endswith(",-1791.07")

    def test_price_axis_uses_plan(self, capsys):
        code, out, _ = run(
            capsys,
            "sweep", "--axis", "price.gcb.1", "--lo", "70", "--hi", "90", "--step", "10",
            "--plan", "all-gcb", "--market", "1",
        )
        assert code == 0
        profits = [float(line.rsplit(",", 1)[1]) for line in out.splitlines()[1:]]
        assert profits[0] < 0 < profits[-1]

    def test_bad_axis(self, capsys):
        code, _, err = run(
            capsys, "sweep", "--axis", "delta.7", "--lo", "0", "--hi", "1", "--step", "0.5"
        )
        assert code == 1
        assert err.startswith("error:")

    def test_missing_required_flag(self, capsys):
        code, _, err = run(capsys, "sweep", "--axis", "beta.1", "--lo", "0", "--hi", "1")
        assert code == 1
        assert "--step" in err


class TestBreakevenCommand:
    def test_price_axis_csv(self, capsys):
        code, out, _ = run(
            capsys, "breakeven", "--axis", "price.gcb", "--plan", "all-gcb", "--market", "1"
        )
        assert code == 0
        assert out == "axis,value\nprice.gcb,81.682130\n"

    def test_cost_axis_bearing(self, capsys):
        code, out, _ = run(
            capsys,
            "breakeven", "--axis", "dehulling", "--plan", "all-gcb", "--market", "1",
            "--basis", "bearing",
        )
        assert code == 0
        assert out == "axis,value\ndehulling,7.811237\n"

    def test_cost_axis_infeasible(self, capsys):
        code, out, err = run(
            capsys, "breakeven", "--axis", "dehulling", "--plan", "all-gcb", "--market", "1"
        )
        assert code == 2
        assert out == ""
        assert err == "infeasible: profit negative at zero cost\n"

    def test_price_axis_infeasible_zero_mass(self, capsys):
        code, _, err = run(capsys, "breakeven", "--axis", "price.dc")
        assert code == 2
        assert err.startswith("infeasible: plan routes no DC mass")

    def test_unbounded_csv(self, capsys):
        code, out, _ = run(
            capsys, "breakeven", "--axis", "dehulling", "--plan", "all-fc", "--market", "2"
        )
        assert code == 0
        assert out == "axis,value\ndehulling,unbounded\n"

    def test_unbounded_json(self, capsys):
        code, out, _ = run(
            capsys,
            "breakeven", "--axis", "dehulling", "--plan", "all-fc", "--market", "2",
            "--format", "json",
        )
        assert code == 0
        assert json.loads(out) == {"axis": "dehulling", "value": None, "unbounded": True}

    def test_bad_axis(self, capsys):
        code, _, err = run(capsys, "breakeven", "--axis", "price.dc.9")
        assert code == 1
        assert err.startswith("error:")


class TestOptimizeCommand:
    def test_unconstrained_csv(self, capsys):
        code, out, _ = run(capsys, "optimize")
        assert code == 0
        assert out.splitlines()[1] == "optimal,,,0.0000,971.8298,0.0000,72887.23,32707.75,40179.48"

    def test_min_share_json(self, capsys):
        code, out, _ = run(capsys, "optimize", "--min-share", "dc:3:0.7", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        delta = payload["plan"]["delta"]
        assert delta[2] == 0.7
        assert delta[4] == pytest.approx(0.3, rel=1e-12)
        assert payload["result"]["profit"] == pytest.approx(40179.48, abs=0.01)

    @pytest.mark.parametrize(
        "text", ["dc:3", "xx:3:0.7", "dc:three:0.7", "dc:9:0.7", "dc:3:1.5"]
    )
    def test_bad_min_share(self, capsys, text):
        code, _, err = run(capsys, "optimize", "--min-share", text)
        assert code == 1
        assert err.startswith("error:")


class TestReconcileCommand:
    def test_csv_shape_and_breakeven_row(self, capsys):
        code, out, _ = run(capsys, "reconcile")
        lines = out.splitlines()
        assert code == 0
        assert len(lines) == 9
        assert lines[4].startswith("breakeven GCB price,77.00,81.68,65.35,0.0608")


class TestPlumbing:
    def test_out_writes_file_and_keeps_stdout_clean(self, capsys, tmp_path):
        path = tmp_path / "case1.csv"
        code, out, _ = run(capsys, "case", "--id", "1", "--out", str(path))
        assert code == 0
        assert out == ""
        assert path.read_text() == HEADER + "\n" + CASE_1_ROW + "\n"

    def test_out_json_evaluate(self, capsys, tmp_path):
        path = tmp_path / "result.json"
        code, out, _ = run(
            capsys,
            "evaluate", "--plan", "all-dc", "--market", "3",
            "--format", "json", "--out", str(path),
        )
        assert code == 0
        assert out == ""
        assert json.loads(path.read_text())["profit"] == pytest.approx(40179.482375, abs=1e-6)

    def test_config_overlay_file(self, capsys, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"farm": {"damage_rate": 0.0}}))
        code, out, _ = run(capsys, "case", "--id", "1", "--config", str(path))
        assert code == 0
        assert out.splitlines()[1].split(",")[3] == "2273.2860"

    def test_missing_config_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "case", "--id", "1", "--config", str(tmp_path / "no.json"))
        assert code == 1
        assert err.startswith("error: cannot read config")

    def test_unknown_flag(self, capsys):
        code, _, err = run(capsys, "case", "--id", "1", "--frobnicate")
        assert code == 1
        assert "usage" in err

    def test_unknown_subcommand(self, capsys):
        code, _, _ = run(capsys, "transmogrify")
        assert code == 1

    def test_no_arguments(self, capsys):
        code, _, _ = run(capsys)
        assert code == 1

    def test_help_exits_zero(self, capsys):
        code, out, _ = run(capsys, "--help")
        assert code == 0
        assert "beanledger" in out


class TestServeCommand:
    @pytest.fixture
    def uvicorn_stub(self, monkeypatch):
        calls = []
        stub = types.SimpleNamespace(run=lambda app, host, port: calls.append((host, port)))
        monkeypatch.setitem(sys.modules, "uvicorn", stub)
        return calls

    def test_port_flag_wins(self, capsys, monkeypatch, uvicorn_stub):
        monkeypatch.setenv("BEANLEDGER_PORT", "9000")
        assert run(capsys, "serve", "--port", "9100")[0] == 0
        assert uvicorn_stub == [("127.0.0.1", 9100)]

    def test_env_port(self, capsys, monkeypatch, uvicorn_stub):
        monkeypatch.setenv("BEANLEDGER_PORT", "9000")
        assert run(capsys, "serve")[0] == 0
        assert uvicorn_stub == [("127.0.0.1", 9000)]

    def test_default_port(self, capsys, monkeypatch, uvicorn_stub):
        monkeypatch.delenv("BEANLEDGER_PORT", raising=False)
        assert run(capsys, "serve")[0] == 0
        assert uvicorn_stub == [("127.0.0.1", 8715)]

    def test_bad_env_port(self, capsys, monkeypatch, uvicorn_stub):
        monkeypatch.setenv("BEANLEDGER_PORT", "eight")
        code, _, err = run(capsys, "serve")
        assert code == 1
        assert "BEANLEDGER_PORT must be an integer" in err
        assert uvicorn_stub == []
