"""Experiment configuration: a strict YAML schema describing benchmark grids.

Unknown keys are hard errors; a silently ignored typo would poison a whole
grid of results.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import yaml

EXPERIMENT_KINDS = (
    "noise-ratio-sweep", "nv-init-study", "search-strategy",
    "constraint-study", "threshold-sweep", "sparsity-study",
    "standardized-ratio", "counterexample", "score-vs-shd",
)

# method preset registry; every field can be overridden per config entry
METHOD_NAMES = (
    "notears-ev", "notears-nv", "golem-ev", "golem-nv",
    "barrier-ev", "barrier-nv", "gds", "astar", "exhaustive",
    "empty", "random-dag",
)

_TOP_KEYS = {
    "kind", "out", "d", "graph_k", "alpha", "noise_kind", "noise_r", "n",
    "population", "seeds", "seed_base", "methods", "thresholds",
    "exact_edge_count",
}

_METHOD_KEYS = {
    "name", "label", "strategy", "score", "constraint", "penalty", "lambda0",
    "lambda1", "lambda2", "penalty_a", "threshold", "init", "init_epsilon",
    "init_restarts", "max_parents", "restarts",
}

INIT_NAMES = ("zero", "uniform", "oracle", "gds", "golem-ev")


@dataclass(frozen=True)
class MethodConfig:
    name: str
    label: str
    overrides: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    d: tuple[int, ...] = (15,)
    graph_k: tuple[float, ...] = (1.0,)
    alpha: tuple[float, ...] = (1.0,)
    noise_kind: str = "ev"
    noise_r: tuple[float, ...] = (1.0,)
    n: tuple[int, ...] = (100000,)
    population: bool = False
    seeds: tuple[int, ...] = tuple(range(10))
    methods: tuple[MethodConfig, ...] = ()
    thresholds: tuple[float, ...] = ()
    exact_edge_count: bool = False
    out: str | None = None

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}; "
                             f"expected one of {EXPERIMENT_KINDS}")
        for grid_name in ("d", "graph_k", "alpha", "noise_r", "n", "seeds"):
            if len(getattr(self, grid_name)) == 0:
                raise ValueError(f"grid {grid_name!r} must be nonempty")
        if len(set(self.seeds)) != len(self.seeds):
            raise ValueError("seeds must be distinct")
        if self.noise_kind not in ("ev", "nv"):
            raise ValueError("noise_kind must be 'ev' or 'nv'")
        if self.kind not in ("standardized-ratio",) and not self.methods:
            raise ValueError(f"experiment kind {self.kind!r} needs methods")


def _as_tuple(value, cast):
    if isinstance(value, (list, tuple)):
        return tuple(cast(v) for v in value)
    return (cast(value),)


def _parse_method(entry) -> MethodConfig:
    if isinstance(entry, str):
        entry = {"name": entry}
    unknown = set(entry) - _METHOD_KEYS
    if unknown:
        raise ValueError(f"unknown method keys {sorted(unknown)}; "
                         f"allowed: {sorted(_METHOD_KEYS)}")
    name = entry.get("name")
    if name not in METHOD_NAMES:
        raise ValueError(f"unknown method {name!r}; expected one of {METHOD_NAMES}")
    init = entry.get("init")
    if init is not None and init not in INIT_NAMES:
        raise ValueError(f"unknown init {init!r}; expected one of {INIT_NAMES}")
    label = entry.get("label") or _default_label(name, entry)
    overrides = {k: v for k, v in entry.items() if k not in ("name", "label")}
    return MethodConfig(name=name, label=label, overrides=overrides)


def _default_label(name, entry):
    parts = [name]
    for key in ("init", "constraint", "penalty", "threshold"):
        if key in entry:
            parts.append(f"{key}={entry[key]}")
    return ":".join(parts)


def config_from_dict(raw: dict) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise ValueError("config must be a mapping")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ValueError(f"unknown config keys {sorted(unknown)}; "
                         f"allowed: {sorted(_TOP_KEYS)}")
    if "kind" not in raw:
        raise ValueError("config needs a 'kind'")

    seeds = raw.get("seeds", 10)
    if isinstance(seeds, int):
        base = int(raw.get("seed_base", 0))
        seeds = tuple(range(base, base + seeds))
    else:
        seeds = _as_tuple(seeds, int)

    methods = tuple(_parse_method(m) for m in raw.get("methods", []))
    if raw["kind"] == "counterexample" and not methods:
        methods = tuple(_parse_method(m) for m in (
            {"name": "exhaustive", "lambda0": 0.0},
            {"name": "notears-ev", "lambda1": 0.0, "threshold": 0.1},
            {"name": "golem-ev", "threshold": 0.1},
        ))

    kwargs = dict(
        kind=raw["kind"],
        population=bool(raw.get("population", False)),
        noise_kind=raw.get("noise_kind", "ev"),
        seeds=seeds,
        methods=methods,
        thresholds=_as_tuple(raw.get("thresholds", []), float) if "thresholds" in raw else (),
        exact_edge_count=bool(raw.get("exact_edge_count", False)),
        out=raw.get("out"),
    )
    for key, cast in (("d", int), ("graph_k", float), ("alpha", float),
                      ("noise_r", float), ("n", int)):
        if key in raw:
            kwargs[key] = _as_tuple(raw[key], cast)
    return ExperimentConfig(**kwargs)


def load_config(path) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        raw = yaml.safe_load(fh)
    return config_from_dict(raw)
