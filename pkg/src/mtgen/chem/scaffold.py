"""Bemis-Murcko scaffolds."""

from __future__ import annotations

from mtgen.chem.canon import atom_token, canonical_smiles, write_smiles
from mtgen.chem.mol import EMPTY, BondOrder, MolGraph, induced_subgraph
from mtgen.chem.smiles import parse_smiles


def _bracket(mol: MolGraph, idx: int) -> str:
    a = mol.atoms[idx]
    sym = a.element.lower() if a.aromatic else a.element
    h = "" if a.total_h == 0 else ("H" if a.total_h == 1 else f"H{a.total_h}")
    chg = ""
    if a.charge:
        sign = "+" if a.charge > 0 else "-"
        chg = sign if abs(a.charge) == 1 else f"{sign}{abs(a.charge)}"
    iso = str(a.isotope) if a.isotope else ""
    return f"[{iso}{sym}{h}{chg}]"


def rebuild(mol: MolGraph) -> MolGraph:
    """Round-trip ``mol`` through SMILES with exact H counts.

    Normalizes hydrogens into implicit counts and re-perceives aromaticity.
    """
    if mol.is_empty:
        return EMPTY
    text = write_smiles(mol, tokens=[_bracket(mol, i) for i in range(mol.num_atoms)])
    parsed = parse_smiles(text)
    # bracket atoms come back with explicit H; rewrite bare tokens where possible
    plain = write_smiles(parsed, tokens=[atom_token(parsed, i) for i in range(parsed.num_atoms)])
    return parse_smiles(plain)


def murcko_scaffold(mol: MolGraph) -> MolGraph:
    """Ring systems plus the linkers joining them.

    Acyclic side chains are pruned back to the first ring or linker atom;
    atoms double-bonded directly to a kept atom (exocyclic ``=O`` and the
    like) are retained. Acyclic molecules give the empty graph.
    """
    if mol.is_empty or not mol.rings.ring_atoms:
        return EMPTY
    ring_atoms = mol.rings.ring_atoms
    alive = [True] * mol.num_atoms
    degree = [mol.degree(i) for i in range(mol.num_atoms)]
    stack = [i for i in range(mol.num_atoms) if degree[i] <= 1 and i not in ring_atoms]
    while stack:
        a = stack.pop()
        if not alive[a]:
            continue
        alive[a] = False
        for nb, _ in mol.neighbors[a]:
            if alive[nb]:
                degree[nb] -= 1
                if degree[nb] <= 1 and nb not in ring_atoms:
                    stack.append(nb)
    core = {i for i in range(mol.num_atoms) if alive[i]}
    keep = set(core)
    for i in core:
        for nb, bi in mol.neighbors[i]:
            if nb not in core and mol.bonds[bi].order == BondOrder.DOUBLE:
                keep.add(nb)
    sub, _ = induced_subgraph(mol, keep)
    return rebuild(sub)


def scaffold_smiles(mol: MolGraph) -> str:
    return canonical_smiles(murcko_scaffold(mol))
