"""Potential tetrahedral stereocentres of a graph without stereo annotations."""

from __future__ import annotations

from mtgen.chem.canon import symmetry_classes
from mtgen.chem.mol import BondOrder, MolGraph


def _candidate(mol: MolGraph, i: int) -> bool:
    a = mol.atoms[i]
    if a.aromatic or a.total_h > 1:
        return False
    orders = [mol.bonds[bi].order for _, bi in mol.neighbors[i]]
    n_double = sum(o == BondOrder.DOUBLE for o in orders)
    if any(o in (BondOrder.TRIPLE, BondOrder.AROMATIC) for o in orders):
        return False
    deg = len(orders)
    if a.element == "C":
        return n_double == 0 and deg + a.total_h == 4
    if a.element == "N":
        if n_double:
            return False
        if a.charge == 1:
            return deg + a.total_h == 4
        # pyramidal inversion is slow only in three-membered rings
        return a.charge == 0 and deg == 3 and mol.rings.smallest_ring[i] == 3
    if a.element == "S":
        return a.total_h == 0 and n_double <= 1 and deg in (3, 4)
    if a.element == "P":
        return n_double <= 1 and deg + a.total_h in (3, 4)
    return False


def potential_stereocentres(mol: MolGraph) -> list[int]:
    """Atoms whose substituents (implicit H included) are pairwise inequivalent.

    Equivalence is graph symmetry, so ring atoms of symmetric rings (the ring
    carbons of a 1,4-disubstituted cyclohexane) are not reported.
    """
    classes = symmetry_classes(mol)
    out = []
    for i in range(mol.num_atoms):
        if not _candidate(mol, i):
            continue
        seen = [(classes[nb], int(mol.bonds[bi].order)) for nb, bi in mol.neighbors[i]]
        if len(set(seen)) == len(seen):
            out.append(i)
    return out
