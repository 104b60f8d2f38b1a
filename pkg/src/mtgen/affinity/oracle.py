"""Affinity oracles: the deterministic mock, CSV score exchange, fixed-set rule."""

from __future__ import annotations

import csv
import hashlib
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Protocol, Sequence

from mtgen.affinity.thresholds import ScoreRecord, Target
from mtgen.chem import canonical_smiles, parse_smiles
from mtgen.chem.mol import MolGraph
from mtgen.fingerprints import Fingerprint, morgan_fingerprint, tanimoto

SCORE_MIN = -12.0
SCORE_MAX = -2.0
CSV_HEADER = ("canonical_smiles", "target_id", "score_kcal_mol")


class AffinityOracle(Protocol):
    """Anything that scores a canonical SMILES against a target, repeatably."""

    def score(self, smiles: str, target: Target) -> float: ...


def load_mock_references() -> list[tuple[Target, str]]:
    """Bundled (target, reference SMILES) pairs."""
    text = resources.files("mtgen.data").joinpath("mock_references.tsv").read_text(encoding="utf-8")
    out = []
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        tid, name, smi = line.split("\t")
        out.append((Target(tid, name), smi))
    return out


def default_targets() -> list[Target]:
    return [t for t, _ in load_mock_references()]


def _unit_hash(*parts: object) -> float:
    digest = hashlib.blake2b("\x1f".join(map(str, parts)).encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big") / 2.0**64


@dataclass
class MockOracle:
    """Deterministic stand-in for docking.

    score = -2 - 10 * (w_noise * u + (1 - w_noise) * sqrt(sim)), where u is a
    keyed hash of (SMILES, target, seed) mapped to [0, 1) and sim is the
    Tanimoto similarity to the target's reference molecule. Similar
    molecules therefore get correlated scores; the result lies in [-12, -2].
    """

    references: dict[str, str]
    seed: int = 0
    noise_weight: float = 0.3
    radius: int = 4
    n_bits: int = 2048
    _ref_fps: dict[str, Fingerprint] = field(default_factory=dict, init=False, repr=False)

    @classmethod
    def bundled(cls, seed: int = 0, **kw) -> "MockOracle":
        return cls({t.id: smi for t, smi in load_mock_references()}, seed=seed, **kw)

    def _ref(self, target_id: str) -> Fingerprint:
        fp = self._ref_fps.get(target_id)
        if fp is None:
            try:
                smi = self.references[target_id]
            except KeyError:
                raise KeyError(f"mock oracle has no reference for target {target_id!r}") from None
            fp = morgan_fingerprint(parse_smiles(smi), self.radius, self.n_bits)
            self._ref_fps[target_id] = fp
        return fp

    def score_mol(self, mol: MolGraph, target: Target) -> float:
        key = canonical_smiles(mol)
        sim = tanimoto(morgan_fingerprint(mol, self.radius, self.n_bits), self._ref(target.id))
        u = _unit_hash(key, target.id, self.seed)
        w = self.noise_weight
        raw = SCORE_MAX - (SCORE_MAX - SCORE_MIN) * (w * u + (1.0 - w) * math.sqrt(sim))
        # 6 decimals, the precision of the CSV exchange format
        return round(min(SCORE_MAX, max(SCORE_MIN, raw)), 6)

    def score(self, smiles: str, target: Target) -> float:
        return self.score_mol(parse_smiles(smiles), target)


class ScoreCache:
    """Scores keyed by (canonical SMILES, target id, oracle seed)."""

    def __init__(self, oracle: AffinityOracle, seed: int = 0):
        self.oracle = oracle
        self.seed = seed
        self._scores: dict[tuple[str, str, int], float] = {}

    def __len__(self) -> int:
        return len(self._scores)

    def get(self, smiles: str, target: Target) -> float:
        key = (smiles, target.id, self.seed)
        val = self._scores.get(key)
        if val is None:
            val = self.oracle.score(smiles, target)
            if not math.isfinite(val):
                raise ValueError(f"oracle returned non-finite score for {smiles} on {target.id}")
            self._scores[key] = val
        return val

    def put(self, smiles: str, target_id: str, value: float) -> None:
        self._scores[(smiles, target_id, self.seed)] = value

    def record(self, smiles: str, targets: Sequence[Target]) -> ScoreRecord:
        return ScoreRecord(smiles, tuple((t.id, self.get(smiles, t)) for t in targets))

    def records(self, smiles: Iterable[str], targets: Sequence[Target]) -> list[ScoreRecord]:
        return [self.record(s, targets) for s in smiles]


class CsvOracle:
    """Reads scores produced by an external docking run (file-drop exchange).

    Missing (molecule, target) pairs raise KeyError naming the pair, so the
    caller can export the pending set, run the docking, and retry.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._scores = {(s, t): v for s, t, v in read_scores_csv(self.path)}

    def score(self, smiles: str, target: Target) -> float:
        try:
            return self._scores[(smiles, target.id)]
        except KeyError:
            raise KeyError(f"{self.path}: no score for {smiles} on {target.id}") from None


def write_scores_csv(path: str | Path, rows: Iterable[tuple[str, str, float]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for smi, tid, val in rows:
            w.writerow((smi, tid, f"{val:.6f}"))


def read_scores_csv(path: str | Path) -> list[tuple[str, str, float]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != CSV_HEADER:
            raise ValueError(f"{path}: expected header {','.join(CSV_HEADER)}")
        out = []
        for lineno, row in enumerate(reader, 2):
            if not row:
                continue
            if len(row) != 3:
                raise ValueError(f"{path}:{lineno}: expected 3 columns")
            try:
                val = float(row[2])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: bad score {row[2]!r}") from None
            out.append((row[0], row[1], val))
        return out


@dataclass(frozen=True)
class FixedSetResult:
    kept: tuple[str, ...]
    records: tuple[ScoreRecord, ...]

    @property
    def empty(self) -> bool:
        return not self.kept


def build_fixed_set(smiles: Iterable[str], cache: ScoreCache, targets: Sequence[Target],
                    threshold: float) -> FixedSetResult:
    """Keep molecules scoring <= ``threshold`` against every target."""
    kept, records = [], []
    for smi in smiles:
        rec = cache.record(smi, targets)
        records.append(rec)
        if all(v <= threshold for _, v in rec.scores):
            kept.append(smi)
    return FixedSetResult(tuple(kept), tuple(records))
