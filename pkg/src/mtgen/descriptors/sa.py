"""Synthetic accessibility estimate on a 1 (easy) to 10 (hard) scale.

Fragment term: count-weighted mean of per-environment scores over the
radius-2 Morgan environments, unknown environments scoring -4. Complexity
term: size, stereocentre, spiro, bridgehead and macrocycle penalties.
Parsed molecules carry no stereo annotations, so the stereocentre penalty
counts potential centres; ``stereo=False`` drops that term.
"""

from __future__ import annotations

import math
from itertools import combinations

from mtgen.chem.mol import MolGraph
from mtgen.chem.stereo import potential_stereocentres
from mtgen.descriptors import tables
from mtgen.fingerprints import morgan_counts

UNKNOWN_FRAGMENT = -4.0
_RAW_MIN = -4.0
_RAW_MAX = 2.5


def spiro_and_bridgehead_atoms(mol: MolGraph) -> tuple[set[int], set[int]]:
    """Atoms joining two SSSR rings at a single atom, and ends of shared ring paths.

    Two rings sharing exactly one atom make it a spiro atom. Two rings sharing
    two or more bonds form a bridged system; the atoms at either end of the
    shared path are bridgeheads.
    """
    rings = mol.rings
    spiro: set[int] = set()
    bridge: set[int] = set()
    for (ra, ba), (rb, bb) in combinations(zip(rings.sssr, rings.sssr_bonds), 2):
        common = set(ra) & set(rb)
        shared = ba & bb
        if len(common) == 1 and not shared:
            spiro |= common
        elif len(shared) >= 2:
            ends: dict[int, int] = {}
            for bi in shared:
                b = mol.bonds[bi]
                for x in (b.begin, b.end):
                    ends[x] = ends.get(x, 0) + 1
            bridge |= {x for x, k in ends.items() if k == 1}
    return spiro, bridge


def fragment_score(mol: MolGraph) -> tuple[float, int]:
    """(mean fragment score, number of distinct environments)."""
    table = tables.sa_fragments()
    counts = morgan_counts(mol, 2)
    total = sum(table.get(h, UNKNOWN_FRAGMENT) * c for h, c in counts.items())
    return total / sum(counts.values()), len(counts)


def complexity_penalty(mol: MolGraph, stereo: bool = True) -> float:
    n = mol.num_atoms
    spiro, bridge = spiro_and_bridgehead_atoms(mol)
    penalty = n**1.005 - n
    if stereo:
        penalty += math.log10(len(potential_stereocentres(mol)) + 1)
    penalty += math.log10(len(spiro) + 1) + math.log10(len(bridge) + 1)
    if any(len(r) > 8 for r in mol.rings.sssr):
        penalty += math.log10(2)
    return penalty


def sa_score(mol: MolGraph, stereo: bool = True) -> float:
    """Synthetic accessibility in [1, 10]; lower is easier to make."""
    if mol.is_empty:
        raise ValueError("empty molecule")
    frag, n_env = fragment_score(mol)
    raw = frag - complexity_penalty(mol, stereo)
    # symmetric molecules produce fewer distinct environments than atoms
    if mol.num_atoms > n_env:
        raw += 0.5 * math.log(mol.num_atoms / n_env)
    score = 11.0 - (raw - _RAW_MIN + 1.0) / (_RAW_MAX - _RAW_MIN) * 9.0
    if score > 8.0:
        score = 8.0 + math.log(score - 8.0)
    return min(10.0, max(1.0, score))
