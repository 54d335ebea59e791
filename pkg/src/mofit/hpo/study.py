"""Study and trial records shared by all samplers."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

DIRECTION_MAXIMIZE = "maximize"
DIRECTION_MINIMIZE = "minimize"

STATUS_COMPLETE = "complete"
STATUS_FAILED = "failed"


@dataclass
class Trial:
    id: int
    params: dict
    objective: float | None
    status: str = STATUS_COMPLETE
    error: str | None = None


@dataclass
class Study:
    direction: str
    sampler: str
    seed: int
    budget: int
    trials: list[Trial] = field(default_factory=list)

    def __post_init__(self):
        if self.direction not in (DIRECTION_MAXIMIZE, DIRECTION_MINIMIZE):
            raise ValueError(f"bad direction {self.direction!r}")

    @property
    def complete_trials(self) -> list[Trial]:
        return [t for t in self.trials if t.status == STATUS_COMPLETE]

    def _better(self, a: float, b: float) -> bool:
        return a > b if self.direction == DIRECTION_MAXIMIZE else a < b

    @property
    def best_trial(self) -> Trial:
        done = self.complete_trials
        if not done:
            raise ValueError("study has no complete trial")
        best = done[0]
        for t in done[1:]:
            if self._better(t.objective, best.objective):
                best = t
        return best

    def history(self) -> list[tuple[int, float, float]]:
        """(trial_id, objective, best_so_far) over complete trials, id order."""
        done = sorted(self.complete_trials, key=lambda t: t.id)
        if not done:
            raise ValueError("study has no complete trial")
        out = []
        best = done[0].objective
        for t in done:
            if self._better(t.objective, best):
                best = t.objective
            out.append((t.id, t.objective, best))
        return out

    def to_doc(self) -> dict:
        return {
            "format": "mofit-study",
            "version": 1,
            "direction": self.direction,
            "sampler": self.sampler,
            "seed": self.seed,
            "budget": self.budget,
            "trials": [
                {"id": t.id, "params": t.params, "objective": t.objective,
                 "status": t.status, "error": t.error}
                for t in self.trials
            ],
            "best": {
                "id": self.best_trial.id,
                "params": self.best_trial.params,
                "objective": self.best_trial.objective,
            } if self.complete_trials else None,
            "history": [list(row) for row in self.history()] if self.complete_trials else [],
        }

    @staticmethod
    def from_doc(doc: dict) -> "Study":
        if doc.get("format") != "mofit-study":
            raise ValueError("not a study document")
        study = Study(direction=doc["direction"], sampler=doc["sampler"],
                      seed=doc["seed"], budget=doc["budget"])
        study.trials = [
            Trial(id=t["id"], params=t["params"], objective=t["objective"],
                  status=t["status"], error=t.get("error"))
            for t in doc["trials"]
        ]
        return study

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_doc(), indent=1))

    @staticmethod
    def load(path: str | Path) -> "Study":
        return Study.from_doc(json.loads(Path(path).read_text()))


def history(study: Study) -> list[tuple[int, float, float]]:
    return study.history()
