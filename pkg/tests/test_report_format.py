import math

from src.ui.report_format import format_csv, format_history, summary_ising


def test_csv_cells():
    text = format_csv(["a", "b", "c", "d"], [{"a": 3, "b": 0.1234567, "c": math.inf, "d": True}, {"a": None}])
    assert text == "a,b,c,d\n3,1.23457e-01,inf,true\n,,,\n"


def test_csv_header_only():
    assert format_csv(["x", "y"], []) == "x,y\n"


def test_infeasible_summary_title():
    text = summary_ising({"L": 128, "regime": "C", "feasible": False, "t_total": math.inf}, {"wall_clock_s": math.inf})
    assert text.splitlines()[0] == "Ising estimate  L=128  regime C (infeasible: qubits and time diverge)"
    assert "∞" in text


def test_history_lines():
    rows = [{
        "run_id": 4, "command": "sweep", "args_json": '{"figure": "fig4", "target": null}',
        "input_hash": "0123456789abcdef", "out_path": "f4.csv", "exit_code": None, "started_at": 0,
    }]
    assert format_history(rows) == "#4 1970-01-01 00:00:00Z sweep figure=fig4 [running] 0123456789ab -> f4.csv\n"
    assert format_history([]) == "No runs recorded yet.\n"
    rows[0].update(exit_code=0, out_path=None, repeat_of=2)
    assert format_history(rows) == "#4 1970-01-01 00:00:00Z sweep figure=fig4 [exit 0] 0123456789ab (repeat of #2)\n"
