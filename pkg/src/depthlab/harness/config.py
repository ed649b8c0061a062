"""Experiment configuration: a flat `key = value` format with bracketed
section headers, chosen for diff-friendliness. Unknown sections or keys are
rejected with a nearest-match suggestion, and validation reports every error
at once rather than stopping at the first.

Full schema (defaults in parentheses):

    [experiment]
    name = expected-depth | cramer-surface | inclusion-suite |
           threshold-sweep | bound-sandwich | dilation
    seed = <int, required>
    threads = <int> (1)
    out = <path> (results)

    [measure]
    kind = <catalog kind> (gaussian-standard)
    dimension = <int> (2)          # single-n experiments
    dimensions = <int list>        # multi-n experiments; overrides dimension

    [budgets]
    samples = <int> (10000)        # outer MC samples
    reps = <int> (8)               # polytope repetitions
    test-points = <int> (500)      # membership points per rep
    net-size = <int> (256)         # direction net size
    mc-budget = <int> (100000)     # shared pool / moment-MC budget
    n-grid = <int list> ()         # polytope N grid; empty = auto

    [params]
    t = <float> (2)                # primary order parameter
    s = <float> (4)                # secondary order parameter
    t-grid = <float list> (2,4,8)
    delta = <float> (0)            # dilation factor (0 disables dilation)
    epsilon = <float> (0.25)       # shrinkage for the sandwich lower bound
    radius = <float> (5)           # sampling radius for cramer-surface
    kappa-band = <float list> (0.4,1.5)

    [tolerances]
    cramer-tol = <float> (1e-8)
    bisect-tol = <float> (1e-8)
    check-tol = <float> (0.01)
"""

from __future__ import annotations

import difflib
from dataclasses import dataclass, field, fields, replace
from typing import Optional

from .. import measures as meas

EXPERIMENTS = (
    "expected-depth",
    "cramer-surface",
    "inclusion-suite",
    "threshold-sweep",
    "bound-sandwich",
    "dilation",
)


class ConfigError(Exception):
    """Carries every validation problem found in a config text."""

    def __init__(self, errors: list[str]):
        self.errors = errors
        super().__init__("; ".join(errors))


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    seed: int
    threads: int = 1
    out: str = "results"
    kind: str = meas.GAUSSIAN
    dimension: int = 2
    dimensions: tuple[int, ...] = ()
    samples: int = 10_000
    reps: int = 8
    test_points: int = 500
    net_size: int = 256
    mc_budget: int = 100_000
    n_grid: tuple[int, ...] = ()
    t: float = 2.0
    s: float = 4.0
    t_grid: tuple[float, ...] = (2.0, 4.0, 8.0)
    delta: float = 0.0
    epsilon: float = 0.25
    radius: float = 5.0
    kappa_band: tuple[float, ...] = (0.4, 1.5)
    cramer_tol: float = 1e-8
    bisect_tol: float = 1e-8
    check_tol: float = 0.01

    def dims(self) -> tuple[int, ...]:
        return self.dimensions if self.dimensions else (self.dimension,)

    def canonical_text(self) -> str:
        """Stable key-sorted rendering used for config hashing."""
        pairs = []
        for f in fields(self):
            val = getattr(self, f.name)
            if isinstance(val, tuple):
                val = ",".join(str(v) for v in val)
            pairs.append(f"{f.name}={val}")
        return "\n".join(sorted(pairs))


# (section, key) -> (config field, parser)
def _int(v: str) -> int:
    return int(v)


def _float(v: str) -> float:
    return float(v)


def _str(v: str) -> str:
    return v


def _int_list(v: str) -> tuple[int, ...]:
    return tuple(int(p) for p in v.split(",") if p.strip()) if v.strip() else ()


def _float_list(v: str) -> tuple[float, ...]:
    return tuple(float(p) for p in v.split(",") if p.strip()) if v.strip() else ()


_SCHEMA = {
    ("experiment", "name"): ("experiment", _str),
    ("experiment", "seed"): ("seed", _int),
    ("experiment", "threads"): ("threads", _int),
    ("experiment", "out"): ("out", _str),
    ("measure", "kind"): ("kind", _str),
    ("measure", "dimension"): ("dimension", _int),
    ("measure", "dimensions"): ("dimensions", _int_list),
    ("budgets", "samples"): ("samples", _int),
    ("budgets", "reps"): ("reps", _int),
    ("budgets", "test-points"): ("test_points", _int),
    ("budgets", "net-size"): ("net_size", _int),
    ("budgets", "mc-budget"): ("mc_budget", _int),
    ("budgets", "n-grid"): ("n_grid", _int_list),
    ("params", "t"): ("t", _float),
    ("params", "s"): ("s", _float),
    ("params", "t-grid"): ("t_grid", _float_list),
    ("params", "delta"): ("delta", _float),
    ("params", "epsilon"): ("epsilon", _float),
    ("params", "radius"): ("radius", _float),
    ("params", "kappa-band"): ("kappa_band", _float_list),
    ("tolerances", "cramer-tol"): ("cramer_tol", _float),
    ("tolerances", "bisect-tol"): ("bisect_tol", _float),
    ("tolerances", "check-tol"): ("check_tol", _float),
}

_SECTIONS = sorted({sec for sec, _ in _SCHEMA})
_POSITIVE_BUDGETS = ("samples", "reps", "test_points", "net_size", "mc_budget", "threads")


def _suggest(word: str, options) -> str:
    close = difflib.get_close_matches(word, list(options), n=1)
    return f" (did you mean {close[0]!r}?)" if close else ""


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate; raises ConfigError listing every problem."""
    errors: list[str] = []
    values: dict[str, object] = {}
    section: Optional[str] = None
    seen_seed = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if section not in _SECTIONS:
                errors.append(
                    f"line {lineno}: unknown section [{section}]{_suggest(section, _SECTIONS)}"
                )
                section = None
            continue
        if "=" not in line:
            errors.append(f"line {lineno}: expected 'key = value', got {line!r}")
            continue
        if section is None:
            errors.append(f"line {lineno}: key outside any valid section")
            continue
        key, _, val = line.partition("=")
        key, val = key.strip().lower(), val.strip()
        if (section, key) not in _SCHEMA:
            in_section = [k for (s, k) in _SCHEMA if s == section]
            errors.append(
                f"line {lineno}: unknown key {key!r} in [{section}]{_suggest(key, in_section)}"
            )
            continue
        field_name, parser = _SCHEMA[(section, key)]
        try:
            values[field_name] = parser(val)
        except ValueError:
            errors.append(f"line {lineno}: cannot parse {key} = {val!r}")
            continue
        if field_name == "seed":
            seen_seed = True

    if "experiment" not in values:
        errors.append("missing required key: [experiment] name")
    elif values["experiment"] not in EXPERIMENTS:
        errors.append(
            f"unknown experiment {values['experiment']!r}"
            f"{_suggest(str(values['experiment']), EXPERIMENTS)}"
        )
    if not seen_seed:
        errors.append("missing required key: [experiment] seed (wall-clock seeding is not allowed)")

    kind = values.get("kind", meas.GAUSSIAN)
    if kind not in meas.CATALOG_KINDS:
        errors.append(f"unknown measure kind {kind!r}{_suggest(str(kind), meas.CATALOG_KINDS)}")

    cfg_kwargs = {k: v for k, v in values.items() if k in {f.name for f in fields(ExperimentConfig)}}
    if errors:
        raise ConfigError(errors)
    cfg = ExperimentConfig(**cfg_kwargs)  # type: ignore[arg-type]

    for name in _POSITIVE_BUDGETS:
        if getattr(cfg, name) <= 0:
            errors.append(f"{name.replace('_', '-')} must be positive, got {getattr(cfg, name)}")
    for name in ("dimension",):
        if getattr(cfg, name) < 1:
            errors.append(f"{name} must be >= 1")
    for tol in ("cramer_tol", "bisect_tol", "check_tol"):
        if getattr(cfg, tol) <= 0:
            errors.append(f"{tol.replace('_', '-')} must be positive")
    if cfg.n_grid and any(b <= a for a, b in zip(cfg.n_grid, cfg.n_grid[1:])):
        errors.append("n-grid must be strictly increasing")
    if errors:
        raise ConfigError(errors)
    return cfg


def with_overrides(cfg: ExperimentConfig, seed: Optional[int] = None,
                   threads: Optional[int] = None, out: Optional[str] = None) -> ExperimentConfig:
    updates = {}
    if seed is not None:
        updates["seed"] = seed
    if threads is not None:
        updates["threads"] = threads
    if out is not None:
        updates["out"] = out
    return replace(cfg, **updates) if updates else cfg
