import json
import math

import pytest

from src.core.config import DEFAULT_CONFIG
from src.core.errors import ConfigError
from src.data.persistence import (
    build_manifest,
    input_hash,
    load_config,
    manifest_path,
    save_output,
    to_json_text,
)


def test_json_text_is_canonical():
    text = to_json_text({"b": math.inf, "a": [1.5, math.nan]})
    assert text == '{\n  "a": [\n    1.5,\n    null\n  ],\n  "b": null\n}\n'


def test_no_config_gives_defaults():
    loaded = load_config(None)
    assert loaded.config == DEFAULT_CONFIG
    assert loaded.presets == {} and loaded.args == {}


def test_config_file(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"constants": {"kappa": 400}, "presets": {"nu52": {"b_tesla": 7}}}))
    loaded = load_config(str(path))
    assert loaded.config.kappa == 400.0
    assert loaded.presets == {"nu52": {"b_tesla": 7}}
    assert loaded.command is None


def test_config_from_env(tmp_path, monkeypatch):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"constants": {"trials": 10}}))
    monkeypatch.setenv("TOPOFACTOR_CONFIG", str(path))
    assert load_config().config.trials == 10


@pytest.mark.parametrize("body,match", [
    ("{nope", "not valid JSON"),
    ("[1, 2]", "JSON object"),
    ('{"constants": {"kappa": 0}}', "kappa"),
    ('{"constants": {"colour": 1}}', "unknown config constants"),
])
def test_bad_config(tmp_path, body, match):
    path = tmp_path / "bad.json"
    path.write_text(body)
    with pytest.raises(ConfigError, match=match):
        load_config(str(path))


def test_missing_config(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_config(str(tmp_path / "missing.json"))


def test_hash_tracks_inputs():
    args = {"L": 128, "eps_a4": 0.01}
    h = input_hash("estimate ising", args, DEFAULT_CONFIG, {})
    assert h == input_hash("estimate ising", dict(reversed(list(args.items()))), DEFAULT_CONFIG, {})
    assert h != input_hash("estimate ising", {**args, "L": 256}, DEFAULT_CONFIG, {})
    assert h != input_hash("estimate ising", args, DEFAULT_CONFIG.replace(kappa=500.0), {})


def test_manifest_loads_back_as_config(tmp_path):
    cfg = DEFAULT_CONFIG.replace(a8_round_time=120)
    args = {"L": 256}
    out = tmp_path / "run.json"
    save_output(str(out), "{}\n", build_manifest("estimate fib", args, cfg, {}, "0.1.0"))

    loaded = load_config(manifest_path(str(out)))
    assert loaded.config == cfg
    assert loaded.args == args
    assert loaded.command == "estimate fib"
    manifest = json.loads((tmp_path / "run.json.manifest.json").read_text())
    assert manifest["input_hash"] == input_hash("estimate fib", args, cfg, {})
