# ---------------------------------------------------------------------------
# FILE: src/data/db.py
# ---------------------------------------------------------------------------
from __future__ import annotations
import json
import logging
import os
import sqlite3
import time
from typing import Any, Mapping, Optional

log = logging.getLogger(__name__)

_CONN: Optional[sqlite3.Connection] = None
_DB_PATH: Optional[str] = None


def _dict_factory(cursor, row):
    d = {}
    for idx, col in enumerate(cursor.description):
        d[col[0]] = row[idx]
    return d


def get_conn() -> sqlite3.Connection:
    if _CONN is None:
        raise RuntimeError("Ledger not initialized. Call init_ledger(path) first.")
    return _CONN


def ledger_enabled() -> bool:
    return _CONN is not None


def init_ledger(db_path: Optional[str] = None) -> bool:
    """
    Open the process-global run ledger and apply the schema.

    The path comes from the argument, else TOPOFACTOR_LEDGER. With neither
    set the ledger stays off and this returns False.
    """
    global _CONN, _DB_PATH
    if _CONN is not None:
        return True

    path = db_path or os.getenv("TOPOFACTOR_LEDGER")
    if not path:
        return False
    _DB_PATH = path
    os.makedirs(os.path.dirname(os.path.abspath(_DB_PATH)), exist_ok=True)

    conn = sqlite3.connect(_DB_PATH, isolation_level=None, check_same_thread=True)
    conn.row_factory = _dict_factory
    conn.execute("PRAGMA journal_mode = WAL;")
    conn.execute("PRAGMA synchronous = NORMAL;")

    schema_path = os.path.join(os.path.dirname(__file__), "..", "migrations", "001_init.sql")
    schema_path = os.path.normpath(schema_path)
    with open(schema_path, "r", encoding="utf-8") as f:
        conn.executescript(f.read())

    _CONN = conn
    log.debug("[ledger] opened %s", _DB_PATH)
    return True


def close_ledger() -> None:
    global _CONN, _DB_PATH
    if _CONN is not None:
        _CONN.close()
    _CONN = None
    _DB_PATH = None


# ------------------------------
# Run helpers
# ------------------------------

def log_run_start(*,
    command: str,
    args: Mapping[str, Any],
    input_hash: str,
    out_path: Optional[str] = None,
    version: Optional[str] = None,
) -> int:
    """Create a runs row and return run_id."""
    conn = get_conn()
    now = int(time.time())
    cur = conn.execute(
        """
        INSERT INTO runs (command, args_json, input_hash, out_path, version, started_at)
        VALUES (?, ?, ?, ?, ?, ?)
        """,
        (command, json.dumps(dict(args), sort_keys=True, default=str), input_hash, out_path, version, now),
    )
    return int(cur.lastrowid)


def log_run_end(*, run_id: int, exit_code: int) -> None:
    conn = get_conn()
    now = int(time.time())
    conn.execute(
        "UPDATE runs SET ended_at=?, exit_code=? WHERE run_id=? AND ended_at IS NULL",
        (now, int(exit_code), run_id),
    )


def recent_runs(*, limit: int = 10, command: Optional[str] = None) -> list[dict]:
    conn = get_conn()
    where = ""
    params: list[Any] = []
    if command:
        where = "WHERE command = ?"
        params.append(command)
    params.append(int(limit))
    return conn.execute(
        f"""
        SELECT run_id, command, args_json, input_hash, out_path, version,
               exit_code, started_at, ended_at
        FROM runs
        {where}
        ORDER BY run_id DESC
        LIMIT ?
        """,
        params,
    ).fetchall()


def runs_with_hash(*, input_hash: str) -> list[dict]:
    """Earlier runs with identical inputs, oldest first."""
    conn = get_conn()
    return conn.execute(
        "SELECT run_id, command, out_path, exit_code, started_at FROM runs WHERE input_hash=? ORDER BY run_id",
        (input_hash,),
    ).fetchall()
