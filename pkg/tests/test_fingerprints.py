import pytest
from hypothesis import given, settings, strategies as st

from mtgen.chem import parse_smiles
from mtgen.fingerprints import Fingerprint, max_similarity, morgan_counts, morgan_fingerprint, tanimoto

MOLS = ["CCO", "c1ccccc1", "CC(=O)Oc1ccccc1C(=O)O", "CC(C)Cc1ccc(cc1)C(C)C(=O)O", "OCCN"]


def fp(s, radius=4, n_bits=2048):
    return morgan_fingerprint(parse_smiles(s), radius, n_bits)


def test_self_similarity_is_one():
    for s in MOLS:
        assert tanimoto(fp(s), fp(s)) == 1.0


def test_atom_order_does_not_change_bits():
    mol = parse_smiles("CC(=O)Oc1ccccc1C(=O)O")
    order = list(reversed(range(mol.num_atoms)))
    assert morgan_fingerprint(mol.permuted(order)) == morgan_fingerprint(mol)


def test_larger_radius_sets_superset_of_bits():
    for s in MOLS:
        assert fp(s, 2).bits & ~fp(s, 4).bits == 0


def test_counts_match_bit_positions_for_radius_2():
    mol = parse_smiles("CC(=O)Oc1ccccc1C(=O)O")
    counts = morgan_counts(mol, 2)
    # radius-0 environments always count; redundant larger ones are dropped
    assert mol.num_atoms < sum(counts.values()) <= mol.num_atoms * 3
    bits = 0
    for h in counts:
        bits |= 1 << (h % 2048)
    folded = Fingerprint(bits, 2048)
    assert folded == morgan_fingerprint(mol, 2, 2048)


def test_hex_round_trip_and_fold():
    f = fp("CC(=O)Oc1ccccc1C(=O)O")
    assert Fingerprint.from_hex(f.to_hex(), 2048) == f
    assert len(f.to_hex()) == 512
    assert f.fold(1024).popcount <= f.popcount


def test_length_mismatch_and_bad_sizes():
    with pytest.raises(ValueError):
        tanimoto(fp("CCO", n_bits=1024), fp("CCO"))
    with pytest.raises(ValueError):
        fp("CCO", n_bits=1000)
    with pytest.raises(ValueError):
        max_similarity(fp("CCO"), [])


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**64 - 1), st.integers(0, 2**64 - 1), st.integers(0, 2**64 - 1))
def test_tanimoto_properties(a, b, c):
    fa, fb, fc = Fingerprint(a, 64), Fingerprint(b, 64), Fingerprint(c, 64)
    t = tanimoto(fa, fb)
    assert 0.0 <= t <= 1.0
    assert t == tanimoto(fb, fa)
    assert max_similarity(fa, [fb, fc]) == max(t, tanimoto(fa, fc))
