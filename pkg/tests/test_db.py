from src.data import db


def test_ledger_off_without_path():
    assert not db.init_ledger()
    assert not db.ledger_enabled()


def test_runs_round_trip(ledger):
    first = db.log_run_start(command="sweep", args={"figure": "fig4"}, input_hash="abc", out_path="f4.csv",
                             version="0.1.0")
    second = db.log_run_start(command="estimate fib", args={"L": 128}, input_hash="def", version="0.1.0")
    db.log_run_end(run_id=first, exit_code=0)

    rows = db.recent_runs(limit=10)
    assert [r["run_id"] for r in rows] == [second, first]
    assert rows[1]["exit_code"] == 0 and rows[0]["exit_code"] is None

    assert [r["run_id"] for r in db.recent_runs(command="sweep")] == [first]
    assert [r["run_id"] for r in db.runs_with_hash(input_hash="abc")] == [first]


def test_end_is_recorded_once(ledger):
    run_id = db.log_run_start(command="physical", args={}, input_hash="x")
    db.log_run_end(run_id=run_id, exit_code=3)
    db.log_run_end(run_id=run_id, exit_code=0)
    assert db.recent_runs(limit=1)[0]["exit_code"] == 3


def test_ledger_env(tmp_path, monkeypatch):
    monkeypatch.setenv("TOPOFACTOR_LEDGER", str(tmp_path / "nested" / "runs.db"))
    assert db.init_ledger()
    assert (tmp_path / "nested" / "runs.db").exists()
