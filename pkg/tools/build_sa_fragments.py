"""Re-key the published SA fragment scores to mtgen environment identifiers.

Offline tool; needs RDKit (not a package dependency). For every molecule of
the sample, each mtgen radius-0..2 environment is paired with the RDKit
Morgan environment rooted at the same atom and radius; the mtgen identifier
takes the score of its most frequent partner.

    python tools/build_sa_fragments.py \
        --extra moses/dataset/data/train.csv.gz --limit 200000 \
        > src/mtgen/data/sa_fragments.tsv

``--extra`` adds a one-column SMILES file (plain or gzipped, header line
skipped), such as the MOSES training split. ``--min-support`` drops
identifiers paired fewer times than that, which keeps the table small.
"""

from __future__ import annotations

import argparse
import csv
import gzip
import pickle
import sys
from collections import Counter, defaultdict
from pathlib import Path

from rdkit import Chem, RDLogger
from rdkit.Chem import rdFingerprintGenerator

from mtgen.chem import try_parse
from mtgen.fingerprints import morgan_environments

RDLogger.DisableLog("rdApp.*")
RD = Path(Chem.__file__).resolve().parent.parent

# molecules used by tests/data/descriptor_panel.tsv are excluded from here
SOURCES = {
    "NCI first_5K": RD / "Data/NCI/first_5K.smi",
    "WEHI PAINS test set": RD / "Data/Pains/test_data/wehi_mols.csv",
    "NIBR filter examples (PubChem)": RD / "Contrib/NIBRSubstructureFilters/"
    "SubstructureFilter_HitTriaging_wPubChemExamples.csv",
    "EGFR ligands": RD / "Contrib/PBF/testData/egfr.sdf",
    "c-Met ligands": RD / "Contrib/FreeWilson/data/cmet_ligands.sdf",
}


def iter_extra(path: Path, limit: int):
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rt") as fh:
        next(fh)
        for k, line in enumerate(fh):
            if k >= limit:
                break
            yield line.split(",")[0].strip()


def iter_smiles(sources: dict[str, Path]):
    for name, path in sources.items():
        if name.startswith("extra:"):
            yield from iter_extra(path, LIMIT)
            continue
        if path.suffix == ".sdf":
            for m in Chem.SDMolSupplier(str(path)):
                if m is not None:
                    yield Chem.MolToSmiles(m, isomericSmiles=False)
        elif path.name == "wehi_mols.csv":
            with path.open() as fh:
                for row in csv.reader(fh):
                    yield row[0]
        elif path.suffix == ".csv":
            with path.open() as fh:
                for row in csv.DictReader(fh):
                    for k in ("EX1", "EX2", "EX3", "EX4", "EX5"):
                        if row.get(k):
                            yield row[k]
        else:
            for line in path.read_text().splitlines():
                if line.strip():
                    yield line.split()[0]


def load_scores() -> dict[int, float]:
    path = RD / "Contrib/SA_Score/fpscores.pkl.gz"
    out = {}
    for row in pickle.load(gzip.open(path)):
        for bit in row[1:]:
            out[bit] = float(row[0])
    return out


LIMIT = 0


def main() -> None:
    global LIMIT
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--extra", type=Path, action="append", default=[])
    ap.add_argument("--limit", type=int, default=200_000, help="rows read per extra file")
    ap.add_argument("--min-support", type=int, default=1)
    args = ap.parse_args()
    LIMIT = args.limit
    sources = dict(SOURCES)
    for path in args.extra:
        sources[f"extra:{path.name}"] = path
    scores = load_scores()
    gen = rdFingerprintGenerator.GetMorganGenerator(radius=2)
    votes: dict[int, Counter] = defaultdict(Counter)
    n_mol = 0
    seen = set()
    for smi in iter_smiles(sources):
        # no stereo in our grammar; strip it for both toolkits
        rm = Chem.MolFromSmiles(smi)
        if rm is None:
            continue
        Chem.RemoveStereochemistry(rm)
        smi = Chem.MolToSmiles(rm, isomericSmiles=False, kekuleSmiles=False)
        if smi in seen:
            continue
        seen.add(smi)
        rm = Chem.MolFromSmiles(smi)
        mol = try_parse(smi)
        if rm is None or mol is None:
            continue
        ao = rdFingerprintGenerator.AdditionalOutput()
        ao.AllocateBitInfoMap()
        gen.GetSparseCountFingerprint(rm, additionalOutput=ao)
        where = {}
        for bit, envs in ao.GetBitInfoMap().items():
            for atom, radius in envs:
                where[(atom, radius)] = bit
        for env_id, atom, radius in morgan_environments(mol, 2):
            votes[env_id][where.get((atom, radius))] += 1
        n_mol += 1

    rows = []
    for env_id, c in votes.items():
        (bit, support), = c.most_common(1)
        if bit is None or support < args.min_support:
            continue
        score = scores.get(bit)
        if score is None:
            continue
        rows.append((env_id, score, support))
    rows.sort()
    print("# Fragment scores for the synthetic accessibility estimate, keyed by")
    print("# mtgen Morgan radius-0..2 environment identifiers (hex).")
    print("# Scores: the PubChem-derived fragment contributions of Ertl &")
    print("# Schuffenhauer, J. Cheminform. 1, 8 (2009), as distributed with the")
    print("# RDKit SA_Score contribution. Re-keyed with tools/build_sa_fragments.py")
    print(f"# by pairing environments atom by atom on {n_mol} public molecules:")
    for name in sources:
        label = name.removeprefix("extra:")
        if name.startswith("extra:"):
            label += f" (first {LIMIT} rows)"
        print(f"#   {label}")
    if args.min_support > 1:
        print(f"# Identifiers seen fewer than {args.min_support} times are omitted.")
    print("# Identifiers absent from this table score -4.")
    print("# columns: env_id<TAB>score<TAB>support")
    for env_id, score, support in rows:
        print(f"{env_id:016x}\t{score:.6g}\t{support}")
    print(f"{n_mol} molecules, {len(rows)} identifiers", file=sys.stderr)


if __name__ == "__main__":
    main()
