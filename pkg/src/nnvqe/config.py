"""Experiment configuration: schema, presets and strict YAML loading.

A config file is YAML with the sections below.  Any key not in the schema
is rejected so typos fail loudly.  Per-depth hyperparameters are mappings
keyed by depth (``hidden: {1: 20, 2: 20, 3: 30}``); a bare number applies
to every depth.

.. code-block:: yaml

    experiment: sweep1d
    seed: 0
    model:   {n_qubits: 8, field: 0.75, ansatz: mera, depths: [1, 2, 3],
              encoder: mlp, hidden: {1: 20, 2: 20, 3: 30},
              dropout: {1: 0.30, 2: 0.05, 3: 0.20}}
    train:   {delta: [-3.0, 3.0, 20], epochs: 2500,
              lr: {initial: 0.009, factor: 0.7, interval: 1000}}
    test:    {delta: [-4.0, 4.0, 201]}
"""
from __future__ import annotations

import copy
from pathlib import Path

import yaml

from .errors import ConfigurationError

EXPERIMENTS = ("sweep1d", "sweep2d", "active_learn", "speedup", "convergence_table",
               "param_dump", "baseline_compare")

# Every accepted key with its default.  ``None`` under "field" selects the
# two-parameter (delta, lambda) family.
SCHEMA = {
    "experiment": "sweep1d",
    "seed": 0,
    "threads": 1,
    "output": None,
    "plots": False,
    "model": {
        "n_qubits": 8,
        "field": 0.75,
        "ansatz": "mera",
        "depths": [1, 2, 3],
        "encoder": "mlp",
        "hidden": 20,
        "dropout": 0.0,
    },
    "train": {
        "delta": [-3.0, 3.0, 20],
        "lambda": None,
        "epochs": 2500,
        "lr": {"initial": 0.009, "factor": 0.7, "interval": 1000},
    },
    "test": {
        "delta": [-4.0, 4.0, 201],
        "lambda": None,
    },
    "active": {
        "pool": [-3.0, 3.0, 61],
        "mu": 6.0,
        "threshold": 5e-3,
        "max_points": 20,
        "warm_start": True,
    },
    "speedup": {
        "deltas": [1.5, 2.0],
        "seeds": 20,
        "report_epoch": 20,
    },
    "convergence": {
        "n_qubits": [8],
        "deltas": [2.0],
        "hidden": {8: 25, 10: 32, 12: 36},
        "trials": 20,
        "threshold": 0.1,
    },
    "compare": {
        "encoders": ["mlp", "affine"],
    },
}

PRESETS = {
    "fig2": (
        "One-parameter sweep, n=8 MERA D=1..3, 20 train / 201 test points",
        {
            "experiment": "sweep1d",
            "model": {"n_qubits": 8, "field": 0.75, "ansatz": "mera", "depths": [1, 2, 3],
                      "hidden": {1: 20, 2: 20, 3: 30}, "dropout": {1: 0.30, 2: 0.05, 3: 0.20}},
            "train": {"delta": [-3.0, 3.0, 20], "epochs": 2500,
                      "lr": {"initial": 0.009, "factor": 0.7, "interval": 1000}},
            "test": {"delta": [-4.0, 4.0, 201]},
        },
    ),
    "fig3": (
        "Active learning, n=8 MERA D=2, mu=6.0, 61-point pool",
        {
            "experiment": "active_learn",
            "model": {"n_qubits": 8, "field": 0.75, "ansatz": "mera", "depths": [2],
                      "hidden": 25, "dropout": 0.20},
            "train": {"epochs": 2500, "lr": {"initial": 0.009, "factor": 0.85, "interval": 200}},
            "test": {"delta": [-3.0, 3.0, 201]},
            "active": {"pool": [-3.0, 3.0, 61], "mu": 6.0, "threshold": 5e-3,
                       "max_points": 20, "warm_start": True},
        },
    ),
    "fig4": (
        "Optimization speedup vs plain VQE, n=12 HEA D=3, delta in {1.5, 2.0}, 100 epochs",
        {
            "experiment": "speedup",
            "model": {"n_qubits": 12, "field": 0.75, "ansatz": "hea", "depths": [3],
                      "hidden": 36, "dropout": 0.20},
            "train": {"epochs": 100, "lr": {"initial": 0.009, "factor": 1.0, "interval": 1000}},
            "speedup": {"deltas": [1.5, 2.0], "seeds": 20, "report_epoch": 20},
        },
    ),
    "fig5": (
        "Two-parameter sweep, n=12 HEA D=1,2, 10x5 train / 101x51 test grid",
        {
            "experiment": "sweep2d",
            "model": {"n_qubits": 12, "field": None, "ansatz": "hea", "depths": [1, 2],
                      "hidden": 40, "dropout": 0.2},
            "train": {"delta": [-1.0, 1.0, 10], "lambda": [0.0, 1.0, 5], "epochs": 4000,
                      "lr": {"initial": 0.01, "factor": 0.7, "interval": 800}},
            "test": {"delta": [-1.0, 1.0, 101], "lambda": [0.0, 1.0, 51]},
        },
    ),
    "fig_s5": (
        "Two-parameter sweep, n=8 HEA D=1,2, 10x5 train / 101x51 test grid",
        {
            "experiment": "sweep2d",
            "model": {"n_qubits": 8, "field": None, "ansatz": "hea", "depths": [1, 2],
                      "hidden": 25, "dropout": 0.2},
            "train": {"delta": [-1.0, 1.0, 10], "lambda": [0.0, 1.0, 5], "epochs": 4000,
                      "lr": {"initial": 0.01, "factor": 0.7, "interval": 800}},
            "test": {"delta": [-1.0, 1.0, 101], "lambda": [0.0, 1.0, 51]},
        },
    ),
    "fig_s6": (
        "MLP encoder vs affine encoder, n=8 MERA D=1..3",
        {
            "experiment": "baseline_compare",
            "model": {"n_qubits": 8, "field": 0.75, "ansatz": "mera", "depths": [1, 2, 3],
                      "hidden": {1: 20, 2: 20, 3: 30}, "dropout": {1: 0.30, 2: 0.05, 3: 0.20}},
            "train": {"delta": [-3.0, 3.0, 20], "epochs": 2500,
                      "lr": {"initial": 0.009, "factor": 0.7, "interval": 1000}},
            "test": {"delta": [-4.0, 4.0, 201]},
            "compare": {"encoders": ["mlp", "affine"]},
        },
    ),
    "fig_s7": (
        "Circuit angles vs delta for a trained n=8 MERA D=2 encoder",
        {
            "experiment": "param_dump",
            "model": {"n_qubits": 8, "field": 0.75, "ansatz": "mera", "depths": [2],
                      "hidden": 20, "dropout": 0.05},
            "train": {"delta": [-3.0, 3.0, 20], "epochs": 2500,
                      "lr": {"initial": 0.009, "factor": 0.7, "interval": 1000}},
            "test": {"delta": [-4.0, 4.0, 201]},
        },
    ),
    "table_s1": (
        "Convergence rate of NN-VQE vs plain VQE, HEA D=3, 100 epochs, 20 trials",
        {
            "experiment": "convergence_table",
            "model": {"field": 0.75, "ansatz": "hea", "depths": [3], "dropout": 0.20},
            "train": {"epochs": 100, "lr": {"initial": 0.009, "factor": 1.0, "interval": 1000}},
            "convergence": {"n_qubits": [8, 10, 12], "deltas": [1.0, 1.5, 2.0],
                            "hidden": {8: 25, 10: 32, 12: 36}, "trials": 20, "threshold": 0.1},
        },
    ),
}


# values that may be either a scalar or a per-depth mapping; merged as leaves
_PER_DEPTH = ("hidden", "dropout")


def _merge(base: dict, override: dict, path: str = "") -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        where = f"{path}{key}"
        if key not in base:
            raise ConfigurationError(f"unknown config key '{where}'")
        if isinstance(base[key], dict) and base[key] and key not in _PER_DEPTH:
            if not isinstance(value, dict):
                raise ConfigurationError(f"config key '{where}' must be a mapping")
            out[key] = _merge(base[key], value, where + ".")
        else:
            out[key] = copy.deepcopy(value)
    return out


def resolve(raw: dict) -> dict:
    """Fill defaults (preset for the experiment kind, then schema) and validate."""
    if not isinstance(raw, dict):
        raise ConfigurationError("config must be a mapping at the top level")
    kind = raw.get("experiment", SCHEMA["experiment"])
    if kind not in EXPERIMENTS:
        raise ConfigurationError(f"unknown experiment '{kind}'; expected one of {', '.join(EXPERIMENTS)}")
    base = SCHEMA
    for _, (_, preset) in PRESETS.items():
        if preset["experiment"] == kind:
            base = _merge(SCHEMA, preset)
            break
    cfg = _merge(base, raw)
    _validate(cfg)
    return cfg


def _validate(cfg):
    m = cfg["model"]
    if m["ansatz"] not in ("hea", "mera"):
        raise ConfigurationError(f"model.ansatz must be 'hea' or 'mera', got {m['ansatz']!r}")
    if m["encoder"] not in ("mlp", "affine", "direct"):
        raise ConfigurationError(f"model.encoder must be mlp, affine or direct, got {m['encoder']!r}")
    if not isinstance(m["depths"], list) or not m["depths"]:
        raise ConfigurationError("model.depths must be a non-empty list")
    for d in m["depths"]:
        per_depth(m["hidden"], d, "model.hidden")
        per_depth(m["dropout"], d, "model.dropout")
    if cfg["train"]["epochs"] < 1:
        raise ConfigurationError("train.epochs must be >= 1")
    for sec in ("train", "test"):
        for key in ("delta", "lambda"):
            spec = cfg[sec][key]
            if spec is not None and not (isinstance(spec, list) and len(spec) == 3):
                raise ConfigurationError(f"{sec}.{key} must be [start, stop, count]")


def per_depth(value, depth, name="value"):
    if isinstance(value, dict):
        if depth not in value:
            raise ConfigurationError(f"{name} has no entry for depth {depth}")
        return value[depth]
    return value


def preset(name: str) -> dict:
    if name not in PRESETS:
        raise ConfigurationError(f"unknown preset '{name}'; run 'nnvqe presets' for the list")
    return resolve(copy.deepcopy(PRESETS[name][1]))


def list_presets() -> str:
    width = max(map(len, PRESETS))
    lines = [f"{'name':<{width}}  experiment          description"]
    for name, (desc, body) in PRESETS.items():
        lines.append(f"{name:<{width}}  {body['experiment']:<18}  {desc}")
    return "\n".join(lines)


def load(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" at line {mark.line + 1}, column {mark.column + 1}" if mark else ""
        raise ConfigurationError(f"malformed YAML in {path}{where}: {exc}") from exc
    return resolve(raw or {})


def dump(cfg: dict) -> str:
    return yaml.safe_dump(cfg, sort_keys=False, default_flow_style=None)


def set_value(cfg: dict, dotted: str, value: str) -> dict:
    """Apply a ``section.key=value`` override, parsing ``value`` as YAML."""
    keys = dotted.split(".")
    raw = {}
    node = raw
    for k in keys[:-1]:
        node = node.setdefault(k, {})
    node[keys[-1]] = yaml.safe_load(value)
    return resolve(_merge(cfg, raw) if cfg else raw)
