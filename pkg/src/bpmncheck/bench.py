"""Reproducible timing benchmarks over generated or user-supplied models."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Sequence

from .checker import ExplorationConfig, StateSpaceLimitExceeded, check
from .model import ProcessModel


@dataclass
class BenchRecord:
    name: str
    params: dict[str, int] = field(default_factory=dict)
    state_count: int = 0
    mean_ms: float = 0.0
    runs: int = 0
    error: str | None = None


def run_benchmark(
    models: Sequence[tuple[str, dict[str, int], ProcessModel]],
    repetitions: int = 10,
    config: ExplorationConfig | None = None,
) -> list[BenchRecord]:
    """Time ``repetitions`` full checks per model and report the mean.

    Only the check itself is timed (parsing and generation excluded).  Models
    run sequentially to avoid cross-run interference; a failing model is
    recorded with its error and the remaining models still run.
    """
    if repetitions < 10:
        raise ValueError("repetitions must be >= 10 for a stable mean")
    records: list[BenchRecord] = []
    for name, params, model in models:
        timings: list[float] = []
        states = 0
        error: str | None = None
        for i in range(repetitions):
            started = time.perf_counter()
            try:
                result = check(model, config)
            except StateSpaceLimitExceeded as exc:
                error = str(exc)
                states = exc.partial.state_count
                break
            timings.append((time.perf_counter() - started) * 1000.0)
            if i == 0:
                states = result.state_count
        records.append(
            BenchRecord(
                name=name,
                params=dict(params),
                state_count=states,
                mean_ms=sum(timings) / len(timings) if timings else 0.0,
                runs=len(timings),
                error=error,
            )
        )
    return records
