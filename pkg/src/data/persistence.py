import datetime
import hashlib
import json
import logging
import math
import os
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

from src.core.config import CONFIG_ENV, ModelConfig
from src.core.errors import ConfigError
from src.utils.atomic_write import write_text_atomic

log = logging.getLogger(__name__)

MANIFEST_SUFFIX = ".manifest.json"


@dataclass
class LoadedConfig:
    """What a --config file resolves to: constants, preset overrides, and (from a manifest) args."""
    config: ModelConfig = field(default_factory=ModelConfig)
    presets: dict = field(default_factory=dict)
    args: dict = field(default_factory=dict)
    command: Optional[str] = None
    path: Optional[str] = None


def _finite(data):
    """Replace inf/nan with None so JSON output stays standard."""
    if isinstance(data, dict):
        return {k: _finite(v) for k, v in data.items()}
    elif isinstance(data, (list, tuple)):
        return [_finite(item) for item in data]
    elif isinstance(data, float) and not math.isfinite(data):
        return None
    else:
        return data


def to_json_text(data) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline, no NaN/inf."""
    return json.dumps(_finite(data), sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def load_config(path: Optional[str] = None) -> LoadedConfig:
    """
    Read a config file, or a run manifest, from `path` or $TOPOFACTOR_CONFIG.
    No path at all gives the code defaults.
    """
    path = path or os.getenv(CONFIG_ENV)
    if not path:
        return LoadedConfig()
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"config file {path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")

    # a manifest carries the fully resolved constants under "config"
    is_manifest = "config" in data and "constants" not in data
    constants = data.get("config" if is_manifest else "constants", {})
    presets = data.get("presets", {})
    if not isinstance(constants, dict) or not isinstance(presets, dict):
        raise ConfigError(f"config file {path}: 'constants' and 'presets' must be objects")
    loaded = LoadedConfig(
        config=ModelConfig.from_mapping(constants),
        presets={k: dict(v) for k, v in presets.items()},
        args=dict(data.get("args", {})) if is_manifest else {},
        command=data.get("command") if is_manifest else None,
        path=path,
    )
    log.info("[config] loaded %s%s", path, " (manifest)" if is_manifest else "")
    return loaded


def input_hash(command: str, args: Mapping[str, Any], cfg: ModelConfig, presets: Mapping[str, Any]) -> str:
    payload = {"command": command, "args": dict(args), "config": cfg.to_dict(), "presets": dict(presets)}
    text = json.dumps(_finite(payload), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def build_manifest(
    command: str,
    args: Mapping[str, Any],
    cfg: ModelConfig,
    presets: Mapping[str, Any],
    version: str,
) -> dict:
    return {
        "command": command,
        "args": dict(args),
        "config": cfg.to_dict(),
        "presets": dict(presets),
        "version": version,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds"),
        "input_hash": input_hash(command, args, cfg, presets),
    }


def manifest_path(out_path: str) -> str:
    return out_path + MANIFEST_SUFFIX


def save_output(out_path: str, text: str, manifest: Mapping[str, Any]) -> str:
    """Write a data file and its manifest sidecar, both atomically."""
    write_text_atomic(out_path, text)
    write_text_atomic(manifest_path(out_path), to_json_text(dict(manifest)))
    return out_path
