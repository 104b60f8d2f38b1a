import random

import pytest
from hypothesis import given, settings, strategies as st

from mtgen.chem import (
    SmilesError,
    canonical_smiles,
    diagnose,
    murcko_scaffold,
    parse_smiles,
    read_smiles_file,
    scaffold_smiles,
    try_parse,
)
from mtgen.chem.stereo import potential_stereocentres

DRUGS = [
    "CC(=O)Oc1ccccc1C(=O)O",
    "CN1C=NC2=C1C(=O)N(C(=O)N2C)C",
    "CC(C)Cc1ccc(cc1)C(C)C(=O)O",
    "COc1ccc2[nH]cc(CCNC(C)=O)c2c1",
    "O=C(O)c1ccccc1O",
    "Clc1ccc(cc1)C(c1ccccc1)N1CCN(CC1)CCOCC(=O)O",
    "C1CC2CCC1C2",
    "c1ccc2c(c1)ccc1ccccc12",
]


@pytest.mark.parametrize("smiles", DRUGS)
def test_canonical_is_idempotent(smiles):
    can = canonical_smiles(parse_smiles(smiles))
    assert canonical_smiles(parse_smiles(can)) == can


@pytest.mark.parametrize("smiles", DRUGS)
def test_canonical_ignores_atom_order(smiles):
    mol = parse_smiles(smiles)
    can = canonical_smiles(mol)
    rng = random.Random(smiles)
    for _ in range(5):
        order = list(range(mol.num_atoms))
        rng.shuffle(order)
        assert canonical_smiles(mol.permuted(order)) == can


def test_kekule_and_aromatic_forms_agree():
    assert canonical_smiles(parse_smiles("C1=CC=CC=C1")) == canonical_smiles(parse_smiles("c1ccccc1"))
    assert canonical_smiles(parse_smiles("OC(=O)c1ccccc1OC(C)=O")) == "CC(=O)Oc1ccccc1C(=O)O"


def test_ring_closure_percent_form():
    assert canonical_smiles(parse_smiles("C%10CC%10")) == "C1CC1"


@pytest.mark.parametrize("text,kind,pos", [
    ("C1CC", "unclosed_ring", 1),
    ("C(C", "syntax", 1),
    ("CC)", "syntax", 2),
    ("[Xx]", "syntax", 1),
    ("c1cccc1", "valence", 0),
    ("C(C)(C)(C)(C)C", "valence", 0),
    ("[C@@H](F)(Cl)Br", "unsupported_feature", 2),
    ("C/C=C/C", "unsupported_feature", 1),
])
def test_parse_errors_are_classified(text, kind, pos):
    with pytest.raises(SmilesError) as exc:
        parse_smiles(text)
    assert exc.value.kind == kind
    assert exc.value.position == pos
    assert diagnose(text).error_kind == kind


def test_empty_input_is_an_error():
    assert try_parse("") is None


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet=st.characters(min_codepoint=1, max_codepoint=0x2FF), min_size=1, max_size=30))
def test_fuzz_never_crashes_and_positions_are_in_range(text):
    try:
        parse_smiles(text)
    except SmilesError as exc:
        assert 0 <= exc.position < len(text)


@settings(max_examples=200, deadline=None)
@given(st.text(alphabet="CNOcnos()=#123[]+-H", min_size=1, max_size=20))
def test_fuzz_smiles_alphabet(text):
    mol = try_parse(text)
    if mol is not None and not mol.is_empty:
        can = canonical_smiles(mol)
        assert canonical_smiles(parse_smiles(can)) == can


def test_murcko_scaffold_keeps_rings_and_linkers():
    assert scaffold_smiles(parse_smiles("CCc1ccc(CC2CCCC2)cc1")) == "c1ccc(cc1)CC1CCCC1"
    assert murcko_scaffold(parse_smiles("CCCO")).is_empty


def test_scaffold_of_scaffold_is_fixed_point():
    for s in DRUGS:
        scaf = murcko_scaffold(parse_smiles(s))
        if not scaf.is_empty:
            assert scaffold_smiles(scaf) == canonical_smiles(scaf)


def test_potential_stereocentres():
    assert len(potential_stereocentres(parse_smiles("CC(N)C(=O)O"))) == 1
    assert potential_stereocentres(parse_smiles("CC(C)C")) == []


def test_read_smiles_file(tmp_path):
    p = tmp_path / "x.smi"
    p.write_text("# comment\nCCO\tethanol\n\nc1ccccc1\n")
    assert read_smiles_file(p) == [("CCO", "ethanol"), ("c1ccccc1", "line4")]
