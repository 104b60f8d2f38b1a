"""Generation statistics, score histograms and scaffold clustering."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from mtgen.chem import canonical_smiles, murcko_scaffold, try_parse
from mtgen.chem.mol import MolGraph
from mtgen.fingerprints import morgan_fingerprint, tanimoto

NOISE = -1


@dataclass(frozen=True)
class GenerationStats:
    """Counts behind validity, uniqueness and novelty.

    Percentages are ``None`` when their denominator is zero.
    """

    n_gen: int
    n_val: int
    n_uni: int
    n_unk: int

    def __post_init__(self):
        if not self.n_gen >= self.n_val >= self.n_uni >= self.n_unk >= 0:
            raise ValueError(f"counts must satisfy n_gen >= n_val >= n_uni >= n_unk >= 0: {self}")

    @staticmethod
    def _pct(num: int, den: int) -> float | None:
        return 100.0 * num / den if den else None

    @property
    def validity(self) -> float | None:
        return self._pct(self.n_val, self.n_gen)

    @property
    def uniqueness(self) -> float | None:
        return self._pct(self.n_uni, self.n_val)

    @property
    def novelty(self) -> float | None:
        return self._pct(self.n_unk, self.n_uni)


@dataclass(frozen=True)
class GeneratedSplit:
    stats: GenerationStats
    novel: tuple[tuple[str, MolGraph], ...]  # (canonical SMILES, graph), first-seen order


def split_generated(generated: Iterable[str], known: set[str] | frozenset[str]) -> GeneratedSplit:
    """Parse, canonicalize, deduplicate and drop known molecules.

    A string counts as valid when it parses with sensible valences into a
    single non-empty graph.
    """
    n_gen = n_val = 0
    seen: dict[str, MolGraph] = {}
    for smi in generated:
        n_gen += 1
        mol = try_parse(smi)
        if mol is None or mol.is_empty:
            continue
        n_val += 1
        key = canonical_smiles(mol)
        if key not in seen:
            seen[key] = mol
    novel = tuple((k, m) for k, m in seen.items() if k not in known)
    return GeneratedSplit(GenerationStats(n_gen, n_val, len(seen), len(novel)), novel)


def generation_stats(generated: Iterable[str], cumulative_specific: set[str] | frozenset[str]) -> GenerationStats:
    return split_generated(generated, cumulative_specific).stats


def score_histogram(values: Iterable[float], bin_width: float = 0.25) -> list[tuple[float, int]]:
    """Counts per half-open bin ``[k*w, (k+1)*w)``, as (lower edge, count), ascending.

    Empty bins between occupied ones are included so the output plots directly.
    """
    if not bin_width > 0:
        raise ValueError("bin_width must be > 0")
    counts = Counter()
    for v in values:
        k = math.floor(v / bin_width)
        # guard against v/w landing a hair below an exact edge
        if (k + 1) * bin_width <= v:
            k += 1
        counts[k] += 1
    if not counts:
        return []
    lo, hi = min(counts), max(counts)
    return [(round(k * bin_width, 10), counts.get(k, 0)) for k in range(lo, hi + 1)]


def dbscan(dist: np.ndarray, epsilon: float, min_pts: int = 2,
           weights: Sequence[int] | None = None) -> list[int]:
    """Density clustering on a precomputed distance matrix.

    A point is core when the total weight of points within ``epsilon`` (itself
    included, distance <= epsilon) reaches ``min_pts``. Clusters are the
    connected components of core points; a non-core point within epsilon of
    a core point joins the cluster of its nearest such core point, ties going
    to the lower cluster label. Labels count up from 0 in order of each
    cluster's lowest index; noise is -1.
    """
    d = np.asarray(dist, dtype=float)
    n = d.shape[0]
    if d.shape != (n, n):
        raise ValueError("distance matrix must be square")
    if not np.allclose(d, d.T, rtol=0, atol=1e-12):
        raise ValueError("distance matrix must be symmetric")
    if n and np.any(np.abs(np.diag(d)) > 1e-12):
        raise ValueError("distance matrix must have a zero diagonal")
    if not epsilon > 0 or min_pts < 1:
        raise ValueError("need epsilon > 0 and min_pts >= 1")
    w = np.ones(n) if weights is None else np.asarray(weights, dtype=float)
    near = d <= epsilon
    core = near.astype(float) @ w >= min_pts
    labels = [NOISE] * n
    next_label = 0
    for i in range(n):
        if not core[i] or labels[i] != NOISE:
            continue
        labels[i] = next_label
        stack = [i]
        while stack:
            a = stack.pop()
            for b in np.flatnonzero(near[a] & core):
                if labels[b] == NOISE:
                    labels[b] = next_label
                    stack.append(int(b))
        next_label += 1
    for i in range(n):
        if core[i]:
            continue
        cands = [(d[i, j], labels[j]) for j in np.flatnonzero(near[i] & core)]
        if cands:
            labels[i] = min(cands)[1]
    return labels


def tanimoto_distance_matrix(smiles: Sequence[str], radius: int = 4, n_bits: int = 2048) -> np.ndarray:
    fps = [morgan_fingerprint(try_parse(s), radius, n_bits) for s in smiles]
    n = len(fps)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            out[i, j] = out[j, i] = 1.0 - tanimoto(fps[i], fps[j])
    return out


@dataclass(frozen=True)
class ClusterRow:
    cycle: int
    epsilon: float
    n_molecules: int
    n_scaffolds: int
    n_acyclic: int
    n_clusters: int
    n_noise: int


@dataclass(frozen=True)
class ClusterReport:
    epsilons: tuple[float, ...]
    min_pts: int
    rows: tuple[ClusterRow, ...]

    def counts(self, cycle: int) -> dict[float, int]:
        return {r.epsilon: r.n_clusters for r in self.rows if r.cycle == cycle}


def scaffold_groups(smiles: Iterable[str]) -> tuple[dict[str, int], int, int]:
    """Distinct molecules grouped by Murcko scaffold.

    Returns (scaffold SMILES -> number of distinct molecules, number of
    distinct molecules, number of acyclic ones, which have no scaffold).
    """
    molecules = {}
    for s in smiles:
        mol = try_parse(s)
        if mol is not None and not mol.is_empty:
            molecules.setdefault(canonical_smiles(mol), mol)
    groups: Counter[str] = Counter()
    acyclic = 0
    for mol in molecules.values():
        scaf = murcko_scaffold(mol)
        if scaf.is_empty:
            acyclic += 1
        else:
            groups[canonical_smiles(scaf)] += 1
    return dict(sorted(groups.items())), len(molecules), acyclic


def scaffold_cluster_report(sets_per_cycle: Sequence[Iterable[str]], epsilons: Sequence[float],
                            min_pts: int = 2, radius: int = 4, n_bits: int = 2048) -> ClusterReport:
    """DBSCAN over the unique scaffolds of each cycle, per epsilon.

    Each scaffold is weighted by how many distinct molecules carry it, so a
    scaffold shared by several molecules is dense on its own, while repeating
    a molecule changes nothing.
    """
    if not sets_per_cycle:
        raise ValueError("need at least one cycle")
    rows = []
    for cycle, mols in enumerate(sets_per_cycle):
        groups, n_mol, acyclic = scaffold_groups(mols)
        scafs = list(groups)
        dist = tanimoto_distance_matrix(scafs, radius, n_bits)
        weights = [groups[s] for s in scafs]
        for eps in epsilons:
            labels = dbscan(dist, eps, min_pts, weights) if scafs else []
            rows.append(ClusterRow(
                cycle=cycle, epsilon=float(eps), n_molecules=n_mol, n_scaffolds=len(scafs),
                n_acyclic=acyclic, n_clusters=len({l for l in labels if l != NOISE}),
                n_noise=sum(1 for l in labels if l == NOISE),
            ))
    return ClusterReport(tuple(float(e) for e in epsilons), min_pts, tuple(rows))
