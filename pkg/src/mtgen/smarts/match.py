"""Substructure matching of query graphs against molecules.

Backtracking search in the VF2 spirit: query atoms are visited in an order
where each atom (after the first of its component) is adjacent to one already
mapped, so candidates come from the neighbourhood of the mapped partner.
Bonds between the mapped atom and all earlier neighbours are checked before
descending.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

from mtgen.chem.mol import MolGraph
from mtgen.smarts.query import Expr, QueryGraph


@dataclass(frozen=True)
class AtomFacts:
    """Per-atom properties the primitives test, precomputed once per molecule."""

    z: tuple[int, ...]
    aromatic: tuple[bool, ...]
    charge: tuple[int, ...]
    isotope: tuple[int, ...]
    degree: tuple[int, ...]
    total_h: tuple[int, ...]
    implicit_h: tuple[int, ...]
    valence: tuple[int, ...]
    ring_count: tuple[int, ...]
    smallest_ring: tuple[int, ...]
    bond_order: tuple[int, ...]
    bond_in_ring: tuple[bool, ...]


def facts(mol: MolGraph) -> AtomFacts:
    cached = mol.__dict__.get("_smarts_facts")
    if cached is not None:
        return cached
    rings = mol.rings
    n = mol.num_atoms
    f = AtomFacts(
        z=tuple(a.atomic_number for a in mol.atoms),
        aromatic=tuple(a.aromatic for a in mol.atoms),
        charge=tuple(a.charge for a in mol.atoms),
        isotope=tuple(a.isotope for a in mol.atoms),
        degree=tuple(mol.degree(i) for i in range(n)),
        total_h=tuple(a.total_h for a in mol.atoms),
        implicit_h=tuple(a.implicit_h for a in mol.atoms),
        valence=tuple(mol.valence(i) for i in range(n)),
        ring_count=tuple(rings.atom_ring_count[i] for i in range(n)),
        smallest_ring=tuple(rings.smallest_ring[i] for i in range(n)),
        bond_order=tuple(int(b.order) for b in mol.bonds),
        bond_in_ring=tuple(rings.bond_in_ring(k) for k in range(len(mol.bonds))),
    )
    mol.__dict__["_smarts_facts"] = f
    return f


Pred = Callable[[AtomFacts, int], bool]


def _atom_prim(name: str, value) -> Pred:
    if name == "true":
        return lambda f, i: True
    if name == "false":
        return lambda f, i: False
    if name == "z":
        return lambda f, i: f.z[i] == value
    if name == "arom":
        return lambda f, i: f.aromatic[i] == value
    if name == "charge":
        return lambda f, i: f.charge[i] == value
    if name == "isotope":
        return lambda f, i: f.isotope[i] == value
    if name == "degree":
        return lambda f, i: f.degree[i] == value
    if name == "conn":
        return lambda f, i: f.degree[i] + f.total_h[i] == value
    if name == "hcount":
        return lambda f, i: f.total_h[i] == value
    if name == "implicit_h":
        return lambda f, i: f.implicit_h[i] == value
    if name == "valence":
        return lambda f, i: f.valence[i] == value
    if name == "ring_count":
        if value is None:
            return lambda f, i: f.ring_count[i] > 0
        return lambda f, i: f.ring_count[i] == value
    if name == "ring_size":
        if value is None:
            return lambda f, i: f.ring_count[i] > 0
        return lambda f, i: f.smallest_ring[i] == value
    raise ValueError(f"not an atom primitive: {name}")


def _bond_prim(name: str, value) -> Pred:
    if name == "true":
        return lambda f, b: True
    if name == "bond":
        return lambda f, b: f.bond_order[b] == value
    if name == "ringbond":
        return lambda f, b: f.bond_in_ring[b]
    raise ValueError(f"not a bond primitive: {name}")


def compile_expr(expr: Expr, prim: Callable[[str, object], Pred]) -> Pred:
    kind = expr[0]
    if kind == "prim":
        return prim(expr[1], expr[2])
    if kind == "not":
        inner = compile_expr(expr[1], prim)
        return lambda f, i: not inner(f, i)
    parts = tuple(compile_expr(e, prim) for e in expr[1])
    if kind == "and":
        return lambda f, i: all(p(f, i) for p in parts)
    if kind == "or":
        return lambda f, i: any(p(f, i) for p in parts)
    raise ValueError(f"bad expression node {kind!r}")


class CompiledQuery:
    """A query graph with compiled predicates and a fixed search plan."""

    def __init__(self, query: QueryGraph):
        self.query = query
        self.atom_preds = [compile_expr(e, _atom_prim) for e in query.atoms]
        self.bond_preds = [compile_expr(b.expr, _bond_prim) for b in query.bonds]

    def _plan(self, cand_sizes: list[int]) -> list[tuple[int, int, int, list[tuple[int, int]]]]:
        """Visit order as (query atom, parent, parent bond, [(earlier nbr, bond)])."""
        q = self.query
        n = q.num_atoms
        placed = [False] * n
        plan = []
        while len(plan) < n:
            start = min((i for i in range(n) if not placed[i]), key=lambda i: (cand_sizes[i], i))
            placed[start] = True
            plan.append((start, -1, -1, []))
            frontier = [start]
            k = 0
            while k < len(frontier):
                a = frontier[k]
                k += 1
                for nb, bi in sorted(q.neighbors[a], key=lambda t: (cand_sizes[t[0]], t[0])):
                    if placed[nb]:
                        continue
                    placed[nb] = True
                    back = [(o, obi) for o, obi in q.neighbors[nb] if placed[o] and o != a]
                    plan.append((nb, a, bi, back))
                    frontier.append(nb)
        # back edges must only reference atoms placed earlier in the plan
        pos = {entry[0]: k for k, entry in enumerate(plan)}
        fixed = []
        for k, (a, parent, pbi, back) in enumerate(plan):
            fixed.append((a, parent, pbi, [(o, obi) for o, obi in back if pos[o] < k]))
        return fixed

    def iter_matches(self, mol: MolGraph, root: int | None = None) -> Iterator[tuple[int, ...]]:
        """Yield every injective mapping, as a tuple indexed by query atom.

        With ``root`` set, query atom 0 is pinned to that molecule atom.
        """
        n_q = self.query.num_atoms
        if n_q > mol.num_atoms:
            return
        f = facts(mol)
        cand = []
        for qi, pred in enumerate(self.atom_preds):
            pool = range(mol.num_atoms) if root is None or qi else (root,)
            c = [i for i in pool if pred(f, i)]
            if not c:
                return
            cand.append(c)
        cand_sets = [set(c) for c in cand]
        plan = self._plan([len(c) for c in cand])
        mapping = [-1] * n_q
        used = [False] * mol.num_atoms
        bond_index = mol.bond_index
        neighbors = mol.neighbors
        bond_preds = self.bond_preds

        def options(k: int):
            a, parent, pbi, _ = plan[k]
            if parent < 0:
                return cand[a]
            bp = bond_preds[pbi]
            cs = cand_sets[a]
            return [nb for nb, mbi in neighbors[mapping[parent]] if nb in cs and bp(f, mbi)]

        def search(k: int) -> Iterator[tuple[int, ...]]:
            if k == n_q:
                yield tuple(mapping)
                return
            a, _, _, back = plan[k]
            for m in options(k):
                if used[m]:
                    continue
                ok = True
                for o, qbi in back:
                    mbi = bond_index(mapping[o], m)
                    if mbi is None or not bond_preds[qbi](f, mbi):
                        ok = False
                        break
                if not ok:
                    continue
                mapping[a] = m
                used[m] = True
                yield from search(k + 1)
                used[m] = False
                mapping[a] = -1

        yield from search(0)


def compile_query(query: QueryGraph) -> CompiledQuery:
    cached = query.__dict__.get("_compiled")
    if cached is None:
        cached = CompiledQuery(query)
        object.__setattr__(query, "_compiled", cached)
    return cached


def find_match(mol: MolGraph, query: QueryGraph) -> tuple[int, ...] | None:
    """First mapping of query atoms onto molecule atoms, or ``None``."""
    return next(compile_query(query).iter_matches(mol), None)


def substructure_match(mol: MolGraph, query: QueryGraph) -> tuple[bool, tuple[int, ...] | None]:
    m = find_match(mol, query)
    return m is not None, m


def has_match(mol: MolGraph, query: QueryGraph) -> bool:
    return find_match(mol, query) is not None


def all_matches(mol: MolGraph, query: QueryGraph, unique: bool = True) -> list[tuple[int, ...]]:
    """All mappings; with ``unique`` only one per distinct set of molecule atoms."""
    out = []
    seen: set[frozenset[int]] = set()
    for m in compile_query(query).iter_matches(mol):
        if unique:
            key = frozenset(m)
            if key in seen:
                continue
            seen.add(key)
        out.append(m)
    return out


def count_matches(mol: MolGraph, query: QueryGraph) -> int:
    return len(all_matches(mol, query, unique=True))


def matches_at(mol: MolGraph, query: QueryGraph, root: int) -> bool:
    """True if some match maps query atom 0 onto molecule atom ``root``."""
    q = compile_query(query)
    if query.num_atoms == 1:
        return q.atom_preds[0](facts(mol), root)
    return next(q.iter_matches(mol, root), None) is not None


def matching_atoms(mol: MolGraph, query: QueryGraph) -> set[int]:
    """Molecule atoms that can be the image of query atom 0 in some match."""
    q = compile_query(query)
    f = facts(mol)
    first = [i for i in range(mol.num_atoms) if q.atom_preds[0](f, i)]
    if query.num_atoms == 1:
        return set(first)
    return {i for i in first if next(q.iter_matches(mol, i), None) is not None}
