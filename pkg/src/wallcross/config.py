import copy
import logging
import os
from typing import Any, Dict

import yaml

DEFAULTS: Dict[str, Dict[str, Any]] = {
    "engine": {
        "max_stages": 400,
        "workers": 1,
    },
    "tropical": {
        "max_total_weight": 6,
        "position_seed": 7,
        "position_denominator": 97,
    },
    "render": {
        "scale": 40,
        "margin": 20,
    },
    "logging": {
        "level": "INFO",
    },
}


def load_config(path: str = "config.yaml") -> Dict[str, Any]:
    if not os.path.exists(path):
        # Fallback default
        return copy.deepcopy(DEFAULTS)
    with open(path, "r", encoding="utf-8") as f:
        cfg = yaml.safe_load(f) or {}
    merged = copy.deepcopy(DEFAULTS)
    for section, values in cfg.items():
        if isinstance(values, dict):
            merged.setdefault(section, {}).update(values)
        else:
            merged[section] = values
    return merged


def get_engine_config(path: str = "config.yaml") -> Dict[str, Any]:
    return load_config(path)["engine"]


def get_tropical_config(path: str = "config.yaml") -> Dict[str, Any]:
    return load_config(path)["tropical"]


def get_render_config(path: str = "config.yaml") -> Dict[str, Any]:
    return load_config(path)["render"]


def get_logging_config(path: str = "config.yaml") -> Dict[str, Any]:
    cfg = load_config(path)["logging"]
    level = str(cfg.get("level", "INFO")).upper()
    if level not in logging._nameToLevel:
        print(f"Warning: unknown logging level {level}, using INFO.")
        cfg["level"] = "INFO"
    else:
        cfg["level"] = level
    return cfg
