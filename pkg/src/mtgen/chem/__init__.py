"""Molecular graphs: SMILES parsing, canonical form, ring perception, scaffolds."""

from mtgen.chem.canon import canonical_ranks, canonical_smiles
from mtgen.chem.mol import Atom, Bond, BondOrder, MolGraph
from mtgen.chem.scaffold import murcko_scaffold, scaffold_smiles
from mtgen.chem.smiles import (
    ParseDiagnostics,
    SmilesError,
    diagnose,
    parse_smiles,
    read_smiles_file,
    try_parse,
)

__all__ = [
    "Atom",
    "Bond",
    "BondOrder",
    "MolGraph",
    "ParseDiagnostics",
    "SmilesError",
    "canonical_ranks",
    "canonical_smiles",
    "diagnose",
    "murcko_scaffold",
    "parse_smiles",
    "read_smiles_file",
    "scaffold_smiles",
    "try_parse",
]
