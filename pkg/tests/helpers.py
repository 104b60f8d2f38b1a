"""Independent reference implementations used as test oracles."""

from __future__ import annotations

import itertools
from pathlib import Path

import numpy as np

from mtgen.chem.mol import MolGraph

DATA = Path(__file__).parent / "data"

# Molecules with at most 8 heavy atoms and queries with at most 4 atoms.
GRID_MOLECULES = [
    "C", "CC", "CCO", "CC=O", "C#N", "CC(=O)O", "CC(=O)N", "OCCN", "CCCl", "C=CC=C",
    "C1CC1", "C1CCC1", "C1CCCCC1", "c1ccccc1", "c1ccncc1", "c1ccoc1", "c1cc[nH]c1", "Cc1ccccc1",
    "Oc1ccccc1", "Nc1ccccc1", "O=C1CCCN1", "CC(C)(C)O", "C1CC2CC12", "OC(=O)C(N)C", "CS(=O)C",
    "C[N+](C)(C)C", "[O-]C=O", "FC(F)(F)C", "c1ccsc1", "C1=CCCC1", "N#CC#N", "CC(=O)OC",
]
GRID_QUERIES = [
    "C", "c", "[#6]", "[#7]", "O", "[OX2H]", "[O-]", "[N+]", "[R]", "[R0]", "[r5]", "[r6]",
    "[a]", "[A]", "[D3]", "[H3]", "[!C]", "[C,N]", "[c;r6]", "C=O", "C-O", "C#N", "c:c",
    "C~O", "C@C", "C!@C", "[#6]=,#[#7]", "CC", "CCO", "C=CC", "ccc", "cnc", "C(=O)O",
    "C(=O)N", "CC(C)C", "C1CC1", "c1ccc1", "[#6]~[#6]~[#6]~[#6]", "O=CO", "[#6;X3]",
    "[S](=O)", "NCCO", "[CX4]([F])([F])", "[#9]",
]


def _degree(mol: MolGraph, i: int) -> int:
    return sum(1 for b in mol.bonds if i in (b.begin, b.end))


def _valence(mol: MolGraph, i: int) -> int:
    v = 0.0
    for b in mol.bonds:
        if i in (b.begin, b.end):
            v += b.kekule if b.order == 4 else int(b.order)
    return int(v) + mol.atoms[i].total_h


def atom_ok(expr, mol: MolGraph, i: int) -> bool:
    kind = expr[0]
    if kind == "not":
        return not atom_ok(expr[1], mol, i)
    if kind == "and":
        return all(atom_ok(e, mol, i) for e in expr[1])
    if kind == "or":
        return any(atom_ok(e, mol, i) for e in expr[1])
    name, value = expr[1], expr[2]
    a = mol.atoms[i]
    rings = mol.rings
    if name == "true":
        return True
    if name == "false":
        return False
    if name == "z":
        return a.atomic_number == value
    if name == "arom":
        return a.aromatic == value
    if name == "charge":
        return a.charge == value
    if name == "isotope":
        return a.isotope == value
    if name == "degree":
        return _degree(mol, i) == value
    if name == "conn":
        return _degree(mol, i) + a.total_h == value
    if name == "hcount":
        return a.total_h == value
    if name == "implicit_h":
        return a.implicit_h == value
    if name == "valence":
        return _valence(mol, i) == value
    in_rings = [r for r in rings.sssr if i in r]
    if name == "ring_count":
        return bool(in_rings) if value is None else len(in_rings) == value
    if name == "ring_size":
        return bool(in_rings) if value is None else min((len(r) for r in in_rings), default=0) == value
    raise AssertionError(f"oracle lacks primitive {name}")


def bond_ok(expr, mol: MolGraph, k: int) -> bool:
    kind = expr[0]
    if kind == "not":
        return not bond_ok(expr[1], mol, k)
    if kind == "and":
        return all(bond_ok(e, mol, k) for e in expr[1])
    if kind == "or":
        return any(bond_ok(e, mol, k) for e in expr[1])
    name, value = expr[1], expr[2]
    if name == "true":
        return True
    if name == "bond":
        return int(mol.bonds[k].order) == value
    if name == "ringbond":
        return any(k in rb for rb in mol.rings.sssr_bonds)
    raise AssertionError(f"oracle lacks bond primitive {name}")


def brute_force_match(mol: MolGraph, query) -> bool:
    """Try every injective map of query atoms to molecule atoms."""
    bond_of = {}
    for k, b in enumerate(mol.bonds):
        bond_of[(b.begin, b.end)] = bond_of[(b.end, b.begin)] = k
    for perm in itertools.permutations(range(mol.num_atoms), query.num_atoms):
        if not all(atom_ok(e, mol, perm[q]) for q, e in enumerate(query.atoms)):
            continue
        ok = True
        for qb in query.bonds:
            k = bond_of.get((perm[qb.begin], perm[qb.end]))
            if k is None or not bond_ok(qb.expr, mol, k):
                ok = False
                break
        if ok:
            return True
    return False


def dbscan_closure(dist: np.ndarray, eps: float, min_pts: int, weights=None) -> list[frozenset[int]]:
    """Clusters as sets of points, by density-reachability closure.

    Core points: weighted neighbourhood (self included) >= min_pts. Two core
    points share a cluster iff linked by a chain of core points each within
    eps of the next (transitive closure via Floyd-Warshall-style boolean
    products). A border point is assigned to the cluster of its nearest core
    point. Returned as a set of clusters, independent of label numbering.
    """
    n = len(dist)
    w = np.ones(n) if weights is None else np.asarray(weights, float)
    near = dist <= eps
    core = np.array([w[near[i]].sum() >= min_pts for i in range(n)])
    reach = near & core[:, None] & core[None, :]
    reach = reach | np.eye(n, dtype=bool)
    for k in range(n):
        reach = reach | (reach[:, [k]] & reach[[k], :])
    clusters: dict[int, set[int]] = {}
    rep = {}
    for i in range(n):
        if core[i]:
            r = min(j for j in range(n) if reach[i, j] and core[j])
            rep[i] = r
            clusters.setdefault(r, set()).add(i)
    for i in range(n):
        if core[i]:
            continue
        # nearest core point; distance ties go to the cluster with the lowest core index
        cands = [(dist[i, j], rep[j]) for j in range(n) if core[j] and near[i, j]]
        if cands:
            clusters[min(cands)[1]].add(i)
    return sorted((frozenset(c) for c in clusters.values()), key=sorted)


def labels_to_clusters(labels) -> list[frozenset[int]]:
    groups: dict[int, set[int]] = {}
    for i, l in enumerate(labels):
        if l != -1:
            groups.setdefault(l, set()).add(i)
    return sorted((frozenset(g) for g in groups.values()), key=sorted)


def spearman(x, y) -> float:
    """Rank correlation with average ranks for ties."""
    def ranks(v):
        v = np.asarray(v, float)
        order = np.argsort(v, kind="mergesort")
        r = np.empty(len(v))
        i = 0
        while i < len(v):
            j = i
            while j + 1 < len(v) and v[order[j + 1]] == v[order[i]]:
                j += 1
            r[order[i:j + 1]] = (i + j) / 2.0
            i = j + 1
        return r
    rx, ry = ranks(x), ranks(y)
    return float(np.corrcoef(rx, ry)[0, 1])


def read_panel() -> list[tuple[str, float, float]]:
    rows = []
    for line in (DATA / "descriptor_panel.tsv").read_text().splitlines():
        if not line or line.startswith("#") or line.startswith("smiles"):
            continue
        s, q, sa = line.split("\t")
        rows.append((s, float(q), float(sa)))
    return rows


def gradient_check(z_every_step: bool = False, seed: int = 0, h: float = 1e-4) -> dict[str, float]:
    """Relative error between analytic and central-difference gradients, per
    tensor, on a (D=10, H=8, latent=4) model in float64."""
    from mtgen.vae.model import Batch, ModelDims, VaeParams, elbo_loss

    dims = ModelDims(vocab=10, hidden=8, latent=4, fc=6, z_every_step=z_every_step)
    rng = np.random.default_rng(seed)
    p = VaeParams.init(dims, rng, dtype=np.float64)
    for k in p:
        p.tensors[k] = p[k] + rng.normal(0, 0.3, p[k].shape)
    batch = Batch.from_sequences([[3, 4, 5, 6], [7, 8], [3, 3, 9, 4, 5]], 1, 2, 0)
    eps = rng.normal(size=(3, 4))
    _, grads = elbo_loss(p, batch, eps, 0.7)
    out = {}
    for k in p:
        num = np.zeros_like(p[k])
        for idx in np.ndindex(p[k].shape):
            orig = p[k][idx]
            p[k][idx] = orig + h
            lp = elbo_loss(p, batch, eps, 0.7, want_grad=False)[0].total
            p[k][idx] = orig - h
            lm = elbo_loss(p, batch, eps, 0.7, want_grad=False)[0].total
            p[k][idx] = orig
            num[idx] = (lp - lm) / (2 * h)
        denom = max(np.linalg.norm(num) + np.linalg.norm(grads[k]), 1e-12)
        out[k] = float(np.linalg.norm(num - grads[k]) / denom)
    return out


# Scripted affinity-cycle pass counts, N_min = 50: 60 decays, 10 does not.
# Ablated: 15 cycles, 10 decays, non-decays never three in a row until the end.
ABLATED_COUNTS = [60, 60, 10, 60, 60, 10, 60, 60, 60, 60, 60, 60, 10, 10, 10]
# Regular: 13 cycles, 8 decays.
REGULAR_COUNTS = [60, 10, 60, 60, 10, 60, 60, 60, 60, 60, 10, 10, 10]
