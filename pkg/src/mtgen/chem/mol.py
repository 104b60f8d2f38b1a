"""Molecular graph types.

A :class:`MolGraph` is an immutable, hydrogen-suppressed graph. Hydrogens are
carried as counts on each heavy atom (``explicit_h`` from bracket atoms,
``implicit_h`` assigned from the valence table at parse time). Derived data
(adjacency, ring perception) is computed lazily and cached on the instance.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import IntEnum
from functools import cached_property
from typing import Iterable, Sequence

from mtgen.chem import elements
from mtgen.chem.rings import RingInfo, perceive_rings


class BondOrder(IntEnum):
    SINGLE = 1
    DOUBLE = 2
    TRIPLE = 3
    AROMATIC = 4


@dataclass(frozen=True)
class Atom:
    element: str
    aromatic: bool = False
    charge: int = 0
    explicit_h: int = 0
    implicit_h: int = 0
    isotope: int = 0

    @property
    def total_h(self) -> int:
        return self.explicit_h + self.implicit_h

    @property
    def atomic_number(self) -> int:
        return elements.atomic_number(self.element)


@dataclass(frozen=True)
class Bond:
    begin: int
    end: int
    order: BondOrder
    # integer order in one Kekule structure; equals ``order`` for non-aromatic bonds
    kekule: int = 1

    def other(self, idx: int) -> int:
        return self.end if idx == self.begin else self.begin


@dataclass(frozen=True, eq=False)
class MolGraph:
    atoms: tuple[Atom, ...] = ()
    bonds: tuple[Bond, ...] = ()

    def __len__(self) -> int:
        return len(self.atoms)

    @property
    def num_atoms(self) -> int:
        return len(self.atoms)

    @property
    def is_empty(self) -> bool:
        return not self.atoms

    @cached_property
    def neighbors(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per atom, ``(neighbor index, bond index)`` pairs in bond order."""
        adj: list[list[tuple[int, int]]] = [[] for _ in self.atoms]
        for bi, b in enumerate(self.bonds):
            adj[b.begin].append((b.end, bi))
            adj[b.end].append((b.begin, bi))
        return tuple(tuple(a) for a in adj)

    @cached_property
    def _bond_index(self) -> dict[tuple[int, int], int]:
        out = {}
        for bi, b in enumerate(self.bonds):
            out[(b.begin, b.end)] = bi
            out[(b.end, b.begin)] = bi
        return out

    def bond_between(self, a: int, b: int) -> Bond | None:
        bi = self._bond_index.get((a, b))
        return None if bi is None else self.bonds[bi]

    def bond_index(self, a: int, b: int) -> int | None:
        return self._bond_index.get((a, b))

    def degree(self, idx: int) -> int:
        return len(self.neighbors[idx])

    def valence(self, idx: int) -> int:
        """Total valence: Kekule bond orders plus hydrogens."""
        v = sum(self.bonds[bi].kekule for _, bi in self.neighbors[idx])
        return v + self.atoms[idx].total_h

    @cached_property
    def rings(self) -> RingInfo:
        return perceive_rings(len(self.atoms), [(b.begin, b.end) for b in self.bonds])

    @cached_property
    def fragments(self) -> tuple[tuple[int, ...], ...]:
        seen = [False] * len(self.atoms)
        frags = []
        for start in range(len(self.atoms)):
            if seen[start]:
                continue
            stack, comp = [start], []
            seen[start] = True
            while stack:
                a = stack.pop()
                comp.append(a)
                for n, _ in self.neighbors[a]:
                    if not seen[n]:
                        seen[n] = True
                        stack.append(n)
            frags.append(tuple(sorted(comp)))
        return tuple(frags)

    @property
    def num_fragments(self) -> int:
        return len(self.fragments)

    def heavy_atom_count(self) -> int:
        return len(self.atoms)

    def molecular_weight(self) -> float:
        h = elements.atomic_mass("H")
        return sum(elements.atomic_mass(a.element) + a.total_h * h for a in self.atoms)

    def permuted(self, order: Sequence[int]) -> "MolGraph":
        """Return the same graph with atoms listed in ``order``.

        ``order[k]`` is the old index of the atom placed at new index k.
        Bond order within the bond list is shuffled consistently as well.
        """
        if sorted(order) != list(range(len(self.atoms))):
            raise ValueError("order must be a permutation of atom indices")
        new_of_old = {old: new for new, old in enumerate(order)}
        atoms = tuple(self.atoms[old] for old in order)
        bonds = [
            replace(b, begin=new_of_old[b.begin], end=new_of_old[b.end]) for b in self.bonds
        ]
        bonds.sort(key=lambda b: (min(b.begin, b.end), max(b.begin, b.end)))
        return MolGraph(atoms, tuple(bonds))


def induced_subgraph(mol: MolGraph, keep: Iterable[int]) -> tuple[MolGraph, list[int]]:
    """Subgraph on ``keep`` with removed neighbours replaced by hydrogens.

    Returns the subgraph and the old indices of its atoms (in new order).
    Every kept atom has its H count raised by the Kekule order of each bond
    that was cut, so valences are preserved exactly. Aromatic flags are kept
    as-is; callers that cut through rings must re-perceive aromaticity.
    """
    kept = sorted(set(keep))
    new_of_old = {old: new for new, old in enumerate(kept)}
    extra_h = [0] * len(kept)
    bonds = []
    for b in mol.bonds:
        ib, ie = b.begin in new_of_old, b.end in new_of_old
        if ib and ie:
            bonds.append(replace(b, begin=new_of_old[b.begin], end=new_of_old[b.end]))
        elif ib:
            extra_h[new_of_old[b.begin]] += b.kekule
        elif ie:
            extra_h[new_of_old[b.end]] += b.kekule
    atoms = []
    for new, old in enumerate(kept):
        a = mol.atoms[old]
        atoms.append(replace(a, explicit_h=a.total_h + extra_h[new], implicit_h=0))
    return MolGraph(tuple(atoms), tuple(bonds)), kept


EMPTY = MolGraph()
