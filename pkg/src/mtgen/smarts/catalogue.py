"""Pattern catalogues and two-stage screening."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from mtgen.chem.mol import MolGraph
from mtgen.smarts.match import has_match
from mtgen.smarts.query import QueryGraph, SmartsError, parse_smarts

STAGE1 = "custom_motifs"
STAGE2 = ("pains_subset", "brenk_subset", "nih_subset", "chembl_subset")


class SmartsStage(str, enum.Enum):
    """Where the medicinal-chemistry catalogues run."""

    IN_LOOP = "in_loop"
    POST_GENERATION = "post_generation"
    OFF = "off"


@dataclass(frozen=True)
class Catalogue:
    name: str
    patterns: tuple[QueryGraph, ...] = ()

    def __post_init__(self):
        names = [p.name for p in self.patterns]
        if len(names) != len(set(names)):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise ValueError(f"duplicate pattern ids in catalogue {self.name}: {dup}")

    def __len__(self) -> int:
        return len(self.patterns)


@dataclass(frozen=True)
class ScreenResult:
    passed: bool
    matches: tuple[tuple[str, str], ...] = field(default=())  # (catalogue, pattern id)


def parse_catalogue_lines(lines: Iterable[str], source: str = "<memory>") -> list[Catalogue]:
    """Parse ``pattern_id<TAB>SMARTS<TAB>family`` lines into one catalogue per family.

    Families keep their first-seen order.
    """
    families: dict[str, list[QueryGraph]] = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.rstrip("\n\r")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError(f"{source}:{lineno}: expected 3 tab-separated fields")
        pid, smarts, family = (p.strip() for p in parts)
        try:
            q = parse_smarts(smarts, name=pid)
        except SmartsError as exc:
            raise ValueError(f"{source}:{lineno}: pattern {pid}: {exc}") from exc
        families.setdefault(family, []).append(q)
    return [Catalogue(name, tuple(qs)) for name, qs in families.items()]


def load_catalogue_file(path: str | Path) -> list[Catalogue]:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        return parse_catalogue_lines(fh, str(path))


def bundled_catalogues() -> dict[str, Catalogue]:
    """All bundled catalogues keyed by family name."""
    out: dict[str, Catalogue] = {}
    base = resources.files("mtgen.data")
    for fname in ("custom_motifs.tsv", "med_chem_alerts.tsv"):
        text = base.joinpath(fname).read_text(encoding="utf-8")
        for cat in parse_catalogue_lines(text.splitlines(), fname):
            out[cat.name] = cat
    return out


def screen(mol: MolGraph, catalogues: Sequence[Catalogue]) -> ScreenResult:
    """Fail iff any pattern of any catalogue matches; list every hit."""
    hits = []
    for cat in catalogues:
        for q in cat.patterns:
            if has_match(mol, q):
                hits.append((cat.name, q.name))
    return ScreenResult(passed=not hits, matches=tuple(hits))


@dataclass(frozen=True)
class FilterStages:
    """The stage-1 motif filter and the stage-2 catalogues with their switch."""

    stage1: tuple[Catalogue, ...]
    stage2: tuple[Catalogue, ...]
    mode: SmartsStage = SmartsStage.IN_LOOP

    @classmethod
    def default(cls, mode: SmartsStage | str = SmartsStage.IN_LOOP) -> "FilterStages":
        cats = bundled_catalogues()
        return cls(
            stage1=(cats[STAGE1],),
            stage2=tuple(cats[n] for n in STAGE2),
            mode=SmartsStage(mode),
        )

    @property
    def stage2_in_loop(self) -> bool:
        return self.mode is SmartsStage.IN_LOOP

    def screen_stage1(self, mol: MolGraph) -> ScreenResult:
        return screen(mol, self.stage1)

    def screen_stage2(self, mol: MolGraph) -> ScreenResult:
        return screen(mol, self.stage2)
