"""The fixed, accumulated and updated specific sets."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable


@dataclass(frozen=True)
class Provenance:
    """Affinity and chemical cycle in which a molecule was first accumulated."""

    affinity_cycle: int
    chemical_cycle: int


@dataclass
class DatasetStore:
    """Canonical-SMILES-keyed sets. ``fixed`` is frozen at construction."""

    fixed: tuple[str, ...]
    accumulated: dict[str, Provenance] = field(default_factory=dict)
    updated: dict[str, Provenance] = field(default_factory=dict)

    def __post_init__(self):
        self.fixed = tuple(self.fixed)
        if len(set(self.fixed)) != len(self.fixed):
            raise ValueError("fixed set contains duplicates")
        self._fixed_set = frozenset(self.fixed)

    def cumulative(self) -> frozenset[str]:
        """Everything the model has been specialised on so far."""
        return self._fixed_set | self.accumulated.keys()

    def add(self, smiles: Iterable[str], affinity_cycle: int, chemical_cycle: int) -> list[str]:
        """Accumulate new molecules; members of either set are skipped."""
        added = []
        for s in smiles:
            if s in self._fixed_set or s in self.accumulated:
                continue
            self.accumulated[s] = Provenance(affinity_cycle, chemical_cycle)
            added.append(s)
        return added

    def set_updated(self, survivors: Iterable[str]) -> None:
        survivors = list(survivors)
        missing = [s for s in survivors if s not in self.accumulated]
        if missing:
            raise ValueError(f"updated set must come from the accumulated set; not found: {missing[:3]}")
        self.updated = {s: self.accumulated[s] for s in survivors}

    def reseed(self) -> None:
        """``accumulated := updated`` at an affinity-cycle boundary."""
        self.accumulated = dict(self.updated)

    def training_set(self) -> list[str]:
        return sorted(self._fixed_set | self.accumulated.keys())

    def sizes(self) -> tuple[int, int, int]:
        return len(self.fixed), len(self.accumulated), len(self.updated)
