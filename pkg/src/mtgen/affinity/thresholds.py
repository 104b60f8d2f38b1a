"""Multi-target threshold filter with linear decay and patience stopping.

Thresholds are carried as :class:`~decimal.Decimal` so that repeated decay
by a decimal step such as 0.1 lands exactly on the decimal value (ten
decays from -7.5 give -8.5, not -8.499999999999998).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from decimal import Decimal
from typing import Mapping, Sequence


def _dec(x: float | int | str | Decimal) -> Decimal:
    # via repr so 0.1 becomes Decimal("0.1"), not its binary expansion
    return x if isinstance(x, Decimal) else Decimal(repr(x) if isinstance(x, float) else str(x))


@dataclass(frozen=True)
class Target:
    id: str
    name: str = ""


@dataclass(frozen=True)
class ScoreRecord:
    """Per-target docking scores (kcal/mol, lower is better) of one molecule."""

    key: str
    scores: tuple[tuple[str, float], ...]

    @classmethod
    def from_mapping(cls, key: str, scores: Mapping[str, float]) -> "ScoreRecord":
        return cls(key, tuple(scores.items()))

    def score(self, target_id: str) -> float:
        for t, s in self.scores:
            if t == target_id:
                return s
        raise KeyError(f"no score for target {target_id!r} on {self.key}")

    @property
    def global_score(self) -> float:
        if not self.scores:
            raise ValueError(f"no scores for {self.key}")
        return sum(s for _, s in self.scores) / len(self.scores)


@dataclass(frozen=True)
class ThresholdState:
    """Global and individual thresholds, decay step, patience counter.

    ``counter`` counts consecutive affinity cycles without decay; ``cycle``
    counts completed affinity cycles.
    """

    t_global: Decimal
    t_ind: Decimal
    delta: Decimal = Decimal("0.1")
    n_min: int = 50
    patience: int = 3
    counter: int = 0
    cycle: int = 0

    def __post_init__(self):
        for name in ("t_global", "t_ind", "delta"):
            object.__setattr__(self, name, _dec(getattr(self, name)))
        if self.delta < 0:
            raise ValueError("delta must be >= 0")
        if self.n_min < 0 or self.patience < 1:
            raise ValueError("n_min must be >= 0 and patience >= 1")
        if not 0 <= self.counter <= self.patience:
            raise ValueError("counter outside [0, patience]")

    @classmethod
    def initial(cls, t_global=-7.5, t_ind=-7.0, delta=0.1, n_min=50, patience=3) -> "ThresholdState":
        return cls(_dec(t_global), _dec(t_ind), _dec(delta), n_min, patience)

    @property
    def global_value(self) -> float:
        return float(self.t_global)

    @property
    def ind_value(self) -> float:
        return float(self.t_ind)

    @property
    def stopped(self) -> bool:
        return self.counter >= self.patience


def evaluate(record: ScoreRecord, st: ThresholdState, targets: Sequence[str] | None = None) -> bool:
    """Pass iff the mean score is <= T_g and every target score is <= T_ind.

    ``targets`` lists the target ids that must be present; by default the
    record's own targets. A missing target raises KeyError.
    """
    ids = list(targets) if targets is not None else [t for t, _ in record.scores]
    vals = [record.score(t) for t in ids]
    if not vals:
        raise ValueError("no targets to evaluate")
    mean = sum(vals) / len(vals)
    return mean <= st.global_value and all(v <= st.ind_value for v in vals)


def decay(st: ThresholdState, n_passed: int) -> ThresholdState:
    """Lower both thresholds by delta when at least n_min molecules passed."""
    if n_passed < 0:
        raise ValueError("n_passed must be >= 0")
    if n_passed >= st.n_min:
        return replace(st, t_global=st.t_global - st.delta, t_ind=st.t_ind - st.delta)
    return st


def update_patience(st: ThresholdState, decayed: bool) -> tuple[ThresholdState, bool]:
    """Reset the counter on decay, otherwise increment; stop when it reaches patience."""
    counter = 0 if decayed else min(st.counter + 1, st.patience)
    new = replace(st, counter=counter)
    return new, new.stopped


def step(st: ThresholdState, n_passed: int) -> tuple[ThresholdState, bool, bool]:
    """One affinity cycle: decay, patience update, cycle increment.

    Returns (new state, decayed, stop).
    """
    after = decay(st, n_passed)
    decayed = after is not st
    after, stop = update_patience(after, decayed)
    return replace(after, cycle=st.cycle + 1), decayed, stop


def run_schedule(st: ThresholdState, pass_counts: Sequence[int]) -> list[tuple[ThresholdState, bool, bool]]:
    """Apply ``step`` for each count, stopping early when patience fires."""
    out = []
    for n in pass_counts:
        st, decayed, stop = step(st, n)
        out.append((st, decayed, stop))
        if stop:
            break
    return out
