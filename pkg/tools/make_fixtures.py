"""Generate the bundled toy datasets and the descriptor reference fixtures.

Offline tool; needs RDKit for the reference values. Usage:

    python tools/make_fixtures.py --moses-dir moses/dataset/data

Writes:
    src/mtgen/data/toy_corpus.smi       100 molecules for general training
    src/mtgen/data/toy_fixed.smi        30 molecules, the fixed specific set
    src/mtgen/data/mock_references.tsv  one reference molecule per target
    tests/data/descriptor_panel.tsv     50 held-out molecules, QED and SA
    tests/data/aspirin.tsv              the eight QED inputs of aspirin
"""

from __future__ import annotations

import argparse
import gzip
import random
import sys
from pathlib import Path

import rdkit
from rdkit import Chem, RDLogger
from rdkit.Chem import QED

from mtgen.chem import canonical_smiles, try_parse
from mtgen.vae.vocab import Vocabulary

RDLogger.DisableLog("rdApp.*")
RD = Path(Chem.__file__).resolve().parent.parent
sys.path.insert(0, str(RD / "Contrib" / "SA_Score"))
import sascorer  # noqa: E402

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "src" / "mtgen" / "data"
TESTS = ROOT / "tests" / "data"

# held out from tools/build_sa_fragments.py
# (file, SMILES column, molecules drawn); stratified so one series cannot dominate
PANEL_SOURCES = [
    ("Contrib/FreeWilson/data/CHEMBL2321810.smi", 0, 20),
    ("Contrib/Fastcluster/cdk2.smi", 1, 15),
    ("Contrib/fraggle/data/ChEMBL_11265_actives.smi", 0, 15),
]
TARGETS = [
    ("SARS2-7RNW", "SARS-CoV-2 main protease"),
    ("SARS1-2GX4", "SARS-CoV main protease"),
    ("MERS-7ENE", "MERS-CoV main protease"),
]


def flat(smi: str) -> str | None:
    m = Chem.MolFromSmiles(smi)
    if m is None:
        return None
    Chem.RemoveStereochemistry(m)
    return Chem.MolToSmiles(m, isomericSmiles=False)


def read_moses(path: Path) -> list[str]:
    with gzip.open(path, "rt") as fh:
        next(fh)
        return [line.split(",")[0].strip() for line in fh]


def pick_toy(pool: list[str], n: int, rng: random.Random, vocab: Vocabulary,
             taken: set[str], max_len: int = 40) -> list[str]:
    out = []
    for smi in rng.sample(pool, len(pool)):
        mol = try_parse(smi)
        if mol is None:
            continue
        can = canonical_smiles(mol)
        if can in taken or len(vocab.tokenize(can)) > max_len:
            continue
        try:
            vocab.encode(can)
        except ValueError:
            continue
        out.append(can)
        taken.add(can)
        if len(out) == n:
            break
    return out


def panel(rng: random.Random) -> list[str]:
    out: list[str] = []
    for rel, col, n in PANEL_SOURCES:
        pool = set()
        for line in (RD / rel).read_text().splitlines():
            f = line.split()
            if len(f) > col:
                smi = flat(f[col])
                if smi and "." not in smi and try_parse(smi) is not None:
                    pool.add(smi)
        out.extend(rng.sample(sorted(pool - set(out)), n))
    return out


def header(lines: list[str]) -> str:
    return "".join(f"# {x}\n" if x else "#\n" for x in lines)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--moses-dir", type=Path, required=True)
    ap.add_argument("--seed", type=int, default=20240)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    vocab = Vocabulary.default()
    train = read_moses(args.moses_dir / "train.csv.gz")[150_000:]
    test = read_moses(args.moses_dir / "test.csv.gz")

    taken: set[str] = set()
    corpus = pick_toy(train, 100, rng, vocab, taken)
    fixed = pick_toy(test, 30, rng, vocab, taken)
    refs = pick_toy(test, 3, rng, vocab, taken, max_len=60)
    src = "MOSES benchmark (Polykovskiy et al. 2020, MIT licence), ZINC Clean Leads subset"
    for name, mols, what in (
        ("toy_corpus.smi", corpus, "training split, rows after the first 150000"),
        ("toy_fixed.smi", fixed, "test split"),
    ):
        text = header([f"{len(mols)} molecules from the {src},", f"{what}.",
                       f"Random pick (seed {args.seed}), canonical SMILES of at most 40 tokens."])
        (DATA / name).write_text(text + "\n".join(mols) + "\n")
    text = header([
        "Mock affinity oracle: one reference molecule per target.",
        "Stand-ins drawn from the MOSES test split; not known protease ligands.",
        "columns: target_id<TAB>display name<TAB>SMILES",
    ])
    rows = [f"{t}\t{name}\t{s}" for (t, name), s in zip(TARGETS, refs)]
    (DATA / "mock_references.tsv").write_text(text + "\n".join(rows) + "\n")

    TESTS.mkdir(parents=True, exist_ok=True)
    prov = [f"Reference values from RDKit {rdkit.__version__}:",
            "QED = rdkit.Chem.QED.qed (weighted mean), SA = Contrib/SA_Score sascorer."]
    rows = []
    for smi in panel(rng):
        m = Chem.MolFromSmiles(smi)
        rows.append(f"{smi}\t{QED.qed(m):.6f}\t{sascorer.calculateScore(m):.6f}")
    text = header(prov + ["50 molecules sampled from three public ChEMBL/CDK2 ligand sets",
                          "shipped with RDKit, none of which feed the SA fragment table.",
                          "columns: smiles<TAB>qed<TAB>sa"])
    (TESTS / "descriptor_panel.tsv").write_text(text + "\n".join(rows) + "\n")

    m = Chem.MolFromSmiles("CC(=O)Oc1ccccc1C(=O)O")
    p = QED.properties(m)
    text = header(prov + ["QED inputs of aspirin (rdkit.Chem.QED.properties).", "columns: name<TAB>value"])
    vals = [("mw", p.MW), ("alogp", p.ALOGP), ("hba", p.HBA), ("hbd", p.HBD), ("psa", p.PSA),
            ("rotb", p.ROTB), ("arom", p.AROM), ("alerts", p.ALERTS), ("qed", QED.qed(m)),
            ("sa", sascorer.calculateScore(m))]
    (TESTS / "aspirin.tsv").write_text(text + "\n".join(f"{k}\t{v:.6f}" for k, v in vals) + "\n")


if __name__ == "__main__":
    main()
