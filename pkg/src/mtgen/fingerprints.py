"""Morgan (ECFP-style) circular fingerprints and Tanimoto similarity.

Environment identifiers are 64-bit values built with a splitmix64-based
combiner, so they are stable across runs and platforms. They are not meant
to match any other toolkit bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from mtgen.chem.mol import MolGraph

_MASK = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


def hash_ints(values: Iterable[int], seed: int = 0) -> int:
    """Order-sensitive 64-bit hash of a sequence of (possibly negative) ints."""
    h = _splitmix64(seed)
    for v in values:
        h = _splitmix64(h ^ (v & _MASK))
    return h


@dataclass(frozen=True)
class Fingerprint:
    bits: int
    n_bits: int

    def __post_init__(self):
        if self.n_bits <= 0 or self.n_bits & (self.n_bits - 1):
            raise ValueError(f"n_bits must be a power of two, got {self.n_bits}")
        if self.bits >> self.n_bits:
            raise ValueError("bit set wider than n_bits")

    @property
    def popcount(self) -> int:
        return self.bits.bit_count()

    def on_bits(self) -> list[int]:
        out, b, i = [], self.bits, 0
        while b:
            if b & 1:
                out.append(i)
            b >>= 1
            i += 1
        return out

    def to_hex(self) -> str:
        return format(self.bits, f"0{self.n_bits // 4}x")

    @classmethod
    def from_hex(cls, text: str, n_bits: int) -> "Fingerprint":
        return cls(int(text, 16), n_bits)

    @classmethod
    def from_bitstring(cls, text: str) -> "Fingerprint":
        """``"1100"`` means bits 0 and 1 set."""
        return cls(sum(1 << i for i, ch in enumerate(text) if ch == "1"), len(text))

    def fold(self, n_bits: int) -> "Fingerprint":
        if n_bits > self.n_bits or self.n_bits % n_bits:
            raise ValueError("can only fold to a smaller power of two")
        out, b, mask = 0, self.bits, (1 << n_bits) - 1
        while b:
            out |= b & mask
            b >>= n_bits
        return Fingerprint(out, n_bits)


def atom_invariants(mol: MolGraph) -> list[int]:
    ring_atoms = mol.rings.ring_atoms
    return [
        hash_ints((a.atomic_number, a.charge, mol.degree(i), a.total_h,
                   int(i in ring_atoms), int(a.aromatic)))
        for i, a in enumerate(mol.atoms)
    ]


def morgan_environments(mol: MolGraph, radius: int = 4) -> list[tuple[int, int, int]]:
    """Distinct circular environments as ``(identifier, center atom, radius)``.

    An environment whose bond set duplicates one already seen (at this or a
    smaller radius) is dropped; within one iteration the lower identifier
    wins.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    n = mol.num_atoms
    ids = atom_invariants(mol)
    out = [(ids[i], i, 0) for i in range(n)]
    seen_sets: set[frozenset[int]] = set()
    env_bonds: list[frozenset[int]] = [frozenset()] * n
    active = [True] * n
    for r in range(1, radius + 1):
        new_ids = []
        new_sets = []
        for i in range(n):
            pairs = sorted((int(mol.bonds[bi].order), ids[nb]) for nb, bi in mol.neighbors[i])
            flat = [r, ids[i]]
            for o, h in pairs:
                flat.extend((o, h))
            new_ids.append(hash_ints(flat))
            s = set(env_bonds[i])
            for nb, bi in mol.neighbors[i]:
                s.add(bi)
                s.update(env_bonds[nb])
            new_sets.append(frozenset(s))
        candidates = sorted(
            (new_sets[i], new_ids[i], i) for i in range(n) if active[i]
        )
        # same bond set -> keep lowest id; compare against earlier radii too
        chosen: dict[frozenset[int], tuple[int, int]] = {}
        for bs, h, i in candidates:
            if bs in chosen:
                if h < chosen[bs][0]:
                    chosen[bs] = (h, i)
                continue
            chosen[bs] = (h, i)
        for i in range(n):
            if not active[i]:
                continue
            if new_sets[i] == env_bonds[i]:
                # environment stopped growing; nothing new from this atom
                active[i] = False
                continue
            bs = new_sets[i]
            if bs in seen_sets or chosen[bs][1] != i:
                continue
            out.append((new_ids[i], i, r))
        seen_sets.update(chosen)
        ids = new_ids
        env_bonds = new_sets
    return out


def morgan_counts(mol: MolGraph, radius: int = 2) -> dict[int, int]:
    """Unfolded count fingerprint: identifier -> number of occurrences."""
    counts: dict[int, int] = {}
    for h, _, _ in morgan_environments(mol, radius):
        counts[h] = counts.get(h, 0) + 1
    return counts


def morgan_fingerprint(mol: MolGraph, radius: int = 4, n_bits: int = 2048) -> Fingerprint:
    if mol.is_empty:
        raise ValueError("cannot fingerprint an empty molecule")
    if n_bits <= 0 or n_bits & (n_bits - 1):
        raise ValueError(f"n_bits must be a power of two, got {n_bits}")
    bits = 0
    for h, _, _ in morgan_environments(mol, radius):
        bits |= 1 << (h % n_bits)
    return Fingerprint(bits, n_bits)


def tanimoto(a: Fingerprint, b: Fingerprint) -> float:
    if a.n_bits != b.n_bits:
        raise ValueError(f"fingerprint length mismatch: {a.n_bits} vs {b.n_bits}")
    union = (a.bits | b.bits).bit_count()
    if union == 0:
        return 1.0
    return (a.bits & b.bits).bit_count() / union


def max_similarity(query: Fingerprint, reference_set: Sequence[Fingerprint]) -> float:
    if not reference_set:
        raise ValueError("reference set is empty")
    best = 0.0
    for ref in reference_set:
        s = tanimoto(query, ref)
        if s > best:
            best = s
            if best == 1.0:
                break
    return best
