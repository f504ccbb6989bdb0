"""Operation and space counters shared by every solver."""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field


@dataclass
class RunMetrics:
    step_evals: int = 0
    list_accesses: int = 0
    restarts: int = 0
    peak_tracked_words: int = 0
    wall_time: float = 0.0
    notes: list[str] = field(default_factory=list)

    def merge(self, other: "RunMetrics") -> "RunMetrics":
        """Fold ``other`` into this record: counts add, peaks take the max."""
        self.step_evals += other.step_evals
        self.list_accesses += other.list_accesses
        self.restarts += other.restarts
        self.peak_tracked_words = max(self.peak_tracked_words, other.peak_tracked_words)
        self.wall_time += other.wall_time
        for note in other.notes:
            if note not in self.notes:
                self.notes.append(note)
        return self

    def note(self, text: str) -> None:
        if text not in self.notes:
            self.notes.append(text)

    @contextmanager
    def timed(self):
        t0 = time.perf_counter()
        try:
            yield self
        finally:
            self.wall_time += time.perf_counter() - t0

    def to_dict(self) -> dict:
        return asdict(self)
