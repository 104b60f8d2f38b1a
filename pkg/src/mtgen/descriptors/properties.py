"""The eight physicochemical inputs of the QED drug-likeness score."""

from __future__ import annotations

from dataclasses import astuple, dataclass

from mtgen.chem import elements
from mtgen.chem.mol import BondOrder, MolGraph
from mtgen.descriptors import tables
from mtgen.smarts.match import facts, has_match, matches_at
from mtgen.smarts.query import parse_smarts

_H_MASS = elements.atomic_mass("H")


@dataclass(frozen=True)
class PropertyVector:
    mw: float
    alogp: float
    hba: int
    hbd: int
    psa: float
    rotb: int
    arom: int
    alerts: int

    def as_tuple(self) -> tuple:
        return astuple(self)


def molecular_weight(mol: MolGraph) -> float:
    return sum(elements.atomic_mass(a.element) + a.total_h * _H_MASS for a in mol.atoms)


def alogp(mol: MolGraph) -> float:
    """Atom-type sum; each heavy atom and each hydrogen takes its first matching type."""
    heavy, hydro = tables.alogp_table()
    total = 0.0
    for rows, weight in ((heavy, None), (hydro, "h")):
        for i, atom in enumerate(mol.atoms):
            n = 1 if weight is None else atom.total_h
            if not n:
                continue
            for row in rows:
                if matches_at(mol, row.query, i):
                    total += row.value * n
                    break
    return total


def tpsa(mol: MolGraph) -> float:
    """Polar surface area from N and O fragment contributions."""
    table = tables.psa_table()
    f = facts(mol)
    total = 0.0
    for i, atom in enumerate(mol.atoms):
        if atom.element not in ("N", "O"):
            continue
        counts = {1: 0, 2: 0, 3: 0, 4: 0}
        for _, bi in mol.neighbors[i]:
            counts[int(mol.bonds[bi].order)] += 1
        nbrs = f.degree[i]
        key = (atom.element, nbrs, atom.total_h, atom.charge,
               counts[1], counts[2], counts[3], counts[4], int(f.smallest_ring[i] == 3))
        val = table.get(key)
        if val is None:
            base, step = (30.5, 8.2) if atom.element == "N" else (28.5, 8.6)
            val = max(0.0, base - step * nbrs + 1.5 * atom.total_h)
        total += val
    return total


_ACCEPTORS = tuple(parse_smarts(s) for s in (
    "[oH0;X2]", "[OH1;X2;v2]", "[OH0;X2;v2]", "[OH0;X1;v2]", "[O-;X1]",
    "[SH0;X2;v2]", "[SH0;X1;v2]", "[S-;X1]", "[nH0;X2]", "[NH0;X1;v3]",
))
_AMINE_N = parse_smarts("[N;+0;X3;v3]")
_AMIDE_N = parse_smarts("N[C,S]=O")
_DONOR = parse_smarts("[N&!H0&v3,N&!H0&+1&v4,O&H1&+0,S&H1&+0,n&H1&+0]")


def hba(mol: MolGraph) -> int:
    """Acceptor count: O/S/N lone-pair atoms; amide and sulfonamide N excluded."""
    count = 0
    for i in range(mol.num_atoms):
        count += sum(matches_at(mol, q, i) for q in _ACCEPTORS)
        if matches_at(mol, _AMINE_N, i) and not matches_at(mol, _AMIDE_N, i):
            count += 1
    return count


def hbd(mol: MolGraph) -> int:
    return sum(matches_at(mol, _DONOR, i) for i in range(mol.num_atoms))


def _rotor_flags(mol: MolGraph) -> tuple[list[bool], list[bool]]:
    """Per atom: (fails the basic rotor test, sits on an amide-like linkage)."""
    n = mol.num_atoms
    atoms = mol.atoms
    f = facts(mol)
    basic_bad = [False] * n
    linkage = [False] * n
    ring_bonds = mol.rings.ring_bonds

    def is_carbonyl_like(c: int, charged: bool) -> bool:
        a = atoms[c]
        if a.element != "C" or a.aromatic or f.degree[c] != 3:
            return False
        for nb, bi in mol.neighbors[c]:
            b = atoms[nb]
            if mol.bonds[bi].order != BondOrder.DOUBLE:
                continue
            if charged and b.element == "N" and not b.aromatic and b.charge == 1:
                return True
            if not charged and b.element in ("N", "O", "S") and not b.aromatic:
                return True
        return False

    def hetero_partner(h: int, charged: bool) -> bool:
        a = atoms[h]
        if a.aromatic and a.element != "N":
            return False
        if charged:
            return a.element == "N" and f.degree[h] != 1
        if a.element == "N":
            return True
        if a.element == "O":
            return True
        return a.element == "S" and f.degree[h] != 1

    for i, a in enumerate(atoms):
        bonds = mol.neighbors[i]
        if f.degree[i] == 1 or any(mol.bonds[bi].order == BondOrder.TRIPLE for _, bi in bonds):
            basic_bad[i] = True
            continue
        if a.element == "C" and not a.aromatic:
            nbr_el = [atoms[nb] for nb, _ in bonds]
            for hal in ("F", "Cl", "Br"):
                if sum(1 for b in nbr_el if b.element == hal) >= 3:
                    basic_bad[i] = True
            if sum(1 for b in nbr_el if b.element == "C" and not b.aromatic and b.total_h == 3) >= 3:
                basic_bad[i] = True
        if basic_bad[i]:
            continue
        for charged in (False, True):
            for nb, bi in bonds:
                if bi in ring_bonds or mol.bonds[bi].order != BondOrder.SINGLE:
                    continue
                if is_carbonyl_like(i, charged) and hetero_partner(nb, charged):
                    linkage[i] = True
                if hetero_partner(i, charged) and is_carbonyl_like(nb, charged):
                    linkage[i] = True
    return basic_bad, linkage


def rotatable_bonds(mol: MolGraph) -> int:
    """Non-ring single bonds between non-terminal atoms, amide-like linkages excluded.

    Ends that are trihalomethyl or tert-butyl carbons, or that carry a triple
    bond, do not count. A bond is dropped as amide-like only when both ends sit
    on such a linkage.
    """
    basic_bad, linkage = _rotor_flags(mol)
    ring_bonds = mol.rings.ring_bonds
    count = 0
    for bi, b in enumerate(mol.bonds):
        if bi in ring_bonds or b.order not in (BondOrder.SINGLE, BondOrder.AROMATIC):
            continue
        a, c = b.begin, b.end
        if basic_bad[a] or basic_bad[c]:
            continue
        if linkage[a] and linkage[c]:
            continue
        count += 1
    return count


def aromatic_ring_count(mol: MolGraph) -> int:
    """Cycle count after deleting aliphatic ring atoms singly bonded to a non-aromatic atom."""
    drop = set()
    for i, a in enumerate(mol.atoms):
        if a.aromatic or not mol.rings.in_ring(i):
            continue
        if any(not mol.atoms[nb].aromatic
               and mol.bonds[bi].order in (BondOrder.SINGLE, BondOrder.AROMATIC)
               for nb, bi in mol.neighbors[i]):
            drop.add(i)
    keep = [i for i in range(mol.num_atoms) if i not in drop]
    keep_set = set(keep)
    edges = [(b.begin, b.end) for b in mol.bonds if b.begin in keep_set and b.end in keep_set]
    parent = {i: i for i in keep}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        parent[find(a)] = find(b)
    components = len({find(i) for i in keep})
    return len(edges) - len(keep) + components


def alert_count(mol: MolGraph) -> int:
    """Number of distinct alert ids with at least one matching pattern."""
    hit: set[str] = set()
    for aid, q in tables.qed_alerts():
        if aid not in hit and has_match(mol, q):
            hit.add(aid)
    return len(hit)


def compute_properties(mol: MolGraph) -> PropertyVector:
    """All eight QED inputs for a single-fragment molecule."""
    if mol.is_empty:
        raise ValueError("empty molecule")
    if mol.num_fragments != 1:
        raise ValueError(f"expected one fragment, got {mol.num_fragments}")
    return PropertyVector(
        mw=molecular_weight(mol),
        alogp=alogp(mol),
        hba=hba(mol),
        hbd=hbd(mol),
        psa=tpsa(mol),
        rotb=rotatable_bonds(mol),
        arom=aromatic_ring_count(mol),
        alerts=alert_count(mol),
    )
