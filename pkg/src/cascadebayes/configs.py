"""Declarative run configuration: JSON file plus flag overrides.

Every section is a dataclass with defaults; unknown keys are rejected so
typos fail loudly. Each command writes the fully resolved config beside
its outputs for reproducibility.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field, fields

from .graphs import CORE_PERIPHERY_SEED, UNDIRECTED


def _build(cls, data: dict, where: str):
    allowed = {f.name for f in fields(cls)}
    unknown = set(data) - allowed
    if unknown:
        raise ValueError(f"unknown keys in {where}: {sorted(unknown)}")
    kwargs = {}
    for f in fields(cls):
        if f.name in data:
            value = data[f.name]
            if isinstance(value, list):
                value = _tuplify(value)
            kwargs[f.name] = value
    return cls(**kwargs)


def _tuplify(value):
    if isinstance(value, list):
        return tuple(_tuplify(v) for v in value)
    return value


@dataclass(frozen=True)
class GraphSection:
    kind: str = "erdos_renyi"
    n: int = 100
    p: float | None = None
    z: float | None = 4.0
    forward: float = 0.37
    backward: float = 0.32
    seed_matrix: tuple = CORE_PERIPHERY_SEED
    power: int | None = None


@dataclass(frozen=True)
class SimulateSection:
    beta: float = 0.4
    alpha: float = 1.0
    f_target: float = 0.9
    max_cascades: int = 1_000_000


@dataclass(frozen=True)
class InferSection:
    beta: float = 0.4
    alpha: float = 1.0
    prior_p: float | None = None  # None: density of the initial graph heuristic
    proposal: str = "tnt"
    iterations: int | None = None  # None: steps_factor * n^2
    burn_in: int | None = None
    thinning: int | None = None
    steps_factor: float = 150.0
    burn_fraction: float = 1 / 3
    thin_divisor: float | None = None
    chains: int = 16
    candidate_restriction: bool = False
    refresh_interval: int = 100_000


@dataclass(frozen=True)
class ExperimentSection:
    networks: tuple = ("erdos_renyi", "forest_fire", "core_periphery", "hierarchical")
    n: int = 200
    kron_n: int | None = 256  # Kronecker sizes must be powers of two
    f_grid: tuple = (0.9,)
    repetitions: int = 3
    beta: float = 0.4
    alpha: float = 1.0
    prior_p: float | None = None
    steps_factor: float = 150.0
    thin_divisor: float | None = None
    chains: int = 16


@dataclass(frozen=True)
class SensitivitySection:
    kind: str = "erdos_renyi"
    n: int = 100
    z: float = 4.0
    true_beta: float = 0.4
    alpha: float = 1.0
    f_target: float = 0.9
    beta_grid: tuple = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8)
    p_grid: tuple = ()
    steps_factor: float = 100.0
    chains: int = 8


@dataclass(frozen=True)
class EmailSection:
    edges: str | None = None
    labels: str | None = None
    departments: tuple = ()
    include_whole: bool = False
    beta: float = 0.2
    alpha: float = 1.0
    f_target: float = 0.9
    steps_factor: float = 150.0
    chains: int = 16


@dataclass(frozen=True)
class PathsSection:
    """File names, resolved against the output directory unless absolute."""

    edges: str = "edges.txt"
    node_map: str = "node_map.csv"
    truth: str | None = None
    cascades: str = "cascades.csv"
    coverage: str = "coverage.json"
    marginals: str = "marginals.csv"
    trace: str = "trace.csv"
    stats: str = "stats.json"
    roc: str = "roc.csv"


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    mode: str = UNDIRECTED
    out: str = "runs/out"
    workers: int = 0  # 0: use all available cores
    graph: GraphSection = field(default_factory=GraphSection)
    simulate: SimulateSection = field(default_factory=SimulateSection)
    infer: InferSection = field(default_factory=InferSection)
    experiment: ExperimentSection = field(default_factory=ExperimentSection)
    sensitivity: SensitivitySection = field(default_factory=SensitivitySection)
    email: EmailSection = field(default_factory=EmailSection)
    paths: PathsSection = field(default_factory=PathsSection)


_SECTIONS = {
    "graph": GraphSection,
    "simulate": SimulateSection,
    "infer": InferSection,
    "experiment": ExperimentSection,
    "sensitivity": SensitivitySection,
    "email": EmailSection,
    "paths": PathsSection,
}


def config_from_dict(data: dict) -> RunConfig:
    allowed = {f.name for f in fields(RunConfig)}
    unknown = set(data) - allowed
    if unknown:
        raise ValueError(f"unknown top-level config keys: {sorted(unknown)}")
    kwargs = {}
    for name, value in data.items():
        if name in _SECTIONS:
            if not isinstance(value, dict):
                raise ValueError(f"config section {name!r} must be an object")
            kwargs[name] = _build(_SECTIONS[name], value, name)
        else:
            kwargs[name] = _tuplify(value) if isinstance(value, list) else value
    return RunConfig(**kwargs)


def load_config(path: str) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise ValueError(f"{path}: config root must be an object")
    return config_from_dict(data)


def config_to_dict(config: RunConfig) -> dict:
    return dataclasses.asdict(config)


def save_resolved_config(config: RunConfig, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(config_to_dict(config), fh, indent=2, sort_keys=True)
        fh.write("\n")
