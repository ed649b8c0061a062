"""Run records: the serializable outcome of one experiment run.

The JSON summary is versioned and round-trips losslessly (floats are emitted
with shortest round-trip repr by the json module). CSV tables never contain
timestamps so that reruns with the same config and seed are byte-identical.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Optional

SCHEMA_VERSION = 1
ARTIFACT_VERSION = "0.1.0"


@dataclass
class MetricTable:
    name: str
    columns: list[str]
    rows: list[list]
    # optional plot hint: {"x": col, "y": col, "lo": col, "hi": col, "logx": bool}
    plot: Optional[dict] = None


@dataclass
class AssertionResult:
    name: str
    status: str  # "pass" | "fail" | "skipped"
    value: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status != "fail"


@dataclass
class RunRecord:
    experiment: str
    config_hash: str
    version: str
    seed: int
    started_at: str
    finished_at: str
    metrics: list[MetricTable] = field(default_factory=list)
    assertions: list[AssertionResult] = field(default_factory=list)
    partial: bool = False

    @property
    def all_passed(self) -> bool:
        return all(a.passed for a in self.assertions)

    def to_json(self) -> str:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "experiment": self.experiment,
            "config_hash": self.config_hash,
            "version": self.version,
            "seed": self.seed,
            "started_at": self.started_at,
            "finished_at": self.finished_at,
            "partial": self.partial,
            "metrics": [
                {"name": t.name, "columns": t.columns, "rows": t.rows, "plot": t.plot}
                for t in self.metrics
            ],
            "assertions": [
                {"name": a.name, "status": a.status, "value": a.value, "detail": a.detail}
                for a in self.assertions
            ],
        }
        return json.dumps(payload, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "RunRecord":
        data = json.loads(text)
        if data.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {data.get('schema_version')}")
        return cls(
            experiment=data["experiment"],
            config_hash=data["config_hash"],
            version=data["version"],
            seed=data["seed"],
            started_at=data["started_at"],
            finished_at=data["finished_at"],
            partial=data["partial"],
            metrics=[
                MetricTable(t["name"], t["columns"], t["rows"], t.get("plot"))
                for t in data["metrics"]
            ],
            assertions=[
                AssertionResult(a["name"], a["status"], a["value"], a.get("detail", ""))
                for a in data["assertions"]
            ],
        )


def config_hash(canonical_text: str) -> str:
    return hashlib.sha256(canonical_text.encode("utf-8")).hexdigest()[:16]
