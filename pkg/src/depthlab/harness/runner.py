"""Run orchestration: config -> RunRecord with timing and config hash."""

from __future__ import annotations

import datetime
import traceback

from .config import ExperimentConfig
from .experiments import run_experiment
from .records import ARTIFACT_VERSION, AssertionResult, RunRecord, config_hash


def _now() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")


def run(cfg: ExperimentConfig) -> RunRecord:
    """Execute the configured experiment; failures yield a partial record."""
    started = _now()
    chash = config_hash(cfg.canonical_text())
    try:
        metrics, assertions = run_experiment(cfg)
        partial = False
    except Exception as exc:  # surfaced in the record, never swallowed silently
        metrics = []
        assertions = [AssertionResult(
            name="experiment-error", status="fail", value=float("nan"),
            detail=f"{type(exc).__name__}: {exc}" + " | " + traceback.format_exc(limit=3).replace("\n", " "),
        )]
        partial = True
    return RunRecord(
        experiment=cfg.experiment,
        config_hash=chash,
        version=ARTIFACT_VERSION,
        seed=cfg.seed,
        started_at=started,
        finished_at=_now(),
        metrics=metrics,
        assertions=assertions,
        partial=partial,
    )
