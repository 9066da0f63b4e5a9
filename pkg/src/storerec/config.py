"""Service configuration: one YAML file plus STOREREC_* environment overrides."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields

import yaml

from storerec.errors import MalformedData

ENV_PREFIX = "STOREREC_"


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    layout_path: str | None = None
    data_dir: str | None = None
    dwell_seconds: float = 10.0
    top_n: int = 5
    page_size: int = 5
    random_count: int = 5
    k_neighbors: int = 20
    like_threshold: int = 4
    seed: int = 0
    snapshot_every: int = 1000
    fsync: bool = False


def _coerce(value: str, target_type):
    if target_type is bool:
        return value.strip().lower() in ("1", "true", "yes", "on")
    if target_type is int:
        return int(value)
    if target_type is float:
        return float(value)
    return value


def load_config(path=None, env=None) -> ServiceConfig:
    """Read the config file (if given), then apply environment overrides
    like STOREREC_PORT or STOREREC_DWELL_SECONDS on top."""
    env = os.environ if env is None else env
    cfg = ServiceConfig()
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            doc = yaml.safe_load(fh) or {}
        if not isinstance(doc, dict):
            raise MalformedData("config file must be a mapping")
        known = {f.name for f in fields(ServiceConfig)}
        unknown = set(doc) - known
        if unknown:
            raise MalformedData(f"unknown config keys: {sorted(unknown)}")
        for key, value in doc.items():
            setattr(cfg, key, value)
    for f in fields(ServiceConfig):
        raw = env.get(ENV_PREFIX + f.name.upper())
        if raw is not None:
            base = type(getattr(cfg, f.name)) if getattr(cfg, f.name) is not None else str
            setattr(cfg, f.name, _coerce(raw, base))
    return cfg
