"""Canonical SMILES.

Atoms are ranked by iterative refinement of atom invariants (element,
isotope, charge, degree, H count, ring membership, aromaticity) against the
ranks of their neighbours. Remaining ties are broken one atom at a time; at
the first tie every member of the lowest tied class is tried and the
lexicographically smallest string wins, later ties are broken greedily.
The ranked graph is written depth-first, visiting neighbours in rank order.
"""

from __future__ import annotations

from mtgen.chem import elements
from mtgen.chem.mol import BondOrder, MolGraph

_ORGANIC = elements.ORGANIC_SUBSET
_AROMATIC_BARE = frozenset({"B", "C", "N", "O", "P", "S"})


def _initial_invariants(mol: MolGraph) -> list[tuple]:
    ring_atoms = mol.rings.ring_atoms
    return [
        (a.atomic_number, a.isotope, a.charge, mol.degree(i), a.total_h,
         i in ring_atoms, a.aromatic)
        for i, a in enumerate(mol.atoms)
    ]


def _dense(keys: list) -> list[int]:
    order = sorted(set(keys))
    index = {k: r for r, k in enumerate(order)}
    return [index[k] for k in keys]


def _refine(mol: MolGraph, ranks: list[int]) -> list[int]:
    n_classes = len(set(ranks))
    while True:
        keys = [
            (ranks[i], tuple(sorted((ranks[nb], int(mol.bonds[bi].order))
                                    for nb, bi in mol.neighbors[i])))
            for i in range(len(ranks))
        ]
        new = _dense(keys)
        n_new = len(set(new))
        if n_new == n_classes:
            return new
        ranks, n_classes = new, n_new


def _break_tie(ranks: list[int], atom: int) -> list[int]:
    r = ranks[atom]
    return _dense([(x, 0 if i == atom else 1) if x == r else (x, 0)
                   for i, x in enumerate(ranks)])


def _first_tied_class(ranks: list[int]) -> list[int] | None:
    counts: dict[int, list[int]] = {}
    for i, r in enumerate(ranks):
        counts.setdefault(r, []).append(i)
    tied = [members for r, members in sorted(counts.items()) if len(members) > 1]
    return tied[0] if tied else None


def _complete_greedy(mol: MolGraph, ranks: list[int]) -> list[int]:
    while True:
        members = _first_tied_class(ranks)
        if members is None:
            return ranks
        ranks = _refine(mol, _break_tie(ranks, members[0]))


def symmetry_classes(mol: MolGraph) -> list[int]:
    """Atom classes of the stable refined partition; equal class means equivalent."""
    return _refine(mol, _dense(_initial_invariants(mol)))


def canonical_ranks(mol: MolGraph) -> list[int]:
    """A total order of atoms that is invariant under input relabeling."""
    return _canonical(mol)[1]


def _canonical(mol: MolGraph) -> tuple[str, list[int]]:
    if mol.is_empty:
        return "", []
    ranks = _refine(mol, _dense(_initial_invariants(mol)))
    members = _first_tied_class(ranks)
    if members is None:
        return write_smiles(mol, ranks), ranks
    best: tuple[str, list[int]] | None = None
    for m in members:
        final = _complete_greedy(mol, _refine(mol, _break_tie(ranks, m)))
        smi = write_smiles(mol, final)
        if best is None or smi < best[0]:
            best = (smi, final)
    return best


def canonical_smiles(mol: MolGraph) -> str:
    """Deterministic SMILES for ``mol``, identical for every atom ordering."""
    return _canonical(mol)[0]


def default_hydrogens(mol: MolGraph, idx: int) -> int | None:
    """H count the parser would assign to atom ``idx`` written without brackets."""
    atom = mol.atoms[idx]
    vals = elements.allowed_valences(atom.element, 0)
    if not vals:
        return None
    if atom.aromatic:
        v = sum(1 if mol.bonds[bi].order == BondOrder.AROMATIC else mol.bonds[bi].kekule
                for _, bi in mol.neighbors[idx])
        target = next((t for t in vals if t >= v), None)
        if target is None:
            return None
        return target - v - (1 if target - v >= 1 else 0)
    v = sum(mol.bonds[bi].kekule for _, bi in mol.neighbors[idx])
    target = next((t for t in vals if t >= v), None)
    return None if target is None else target - v


def atom_token(mol: MolGraph, idx: int) -> str:
    atom = mol.atoms[idx]
    symbol = atom.element.lower() if atom.aromatic else atom.element
    bare_ok = (
        atom.charge == 0
        and atom.isotope == 0
        and atom.element in _ORGANIC
        and (not atom.aromatic or atom.element in _AROMATIC_BARE)
        and default_hydrogens(mol, idx) == atom.total_h
    )
    if bare_ok:
        return symbol
    out = ["["]
    if atom.isotope:
        out.append(str(atom.isotope))
    out.append(symbol)
    if atom.total_h:
        out.append("H" if atom.total_h == 1 else f"H{atom.total_h}")
    if atom.charge:
        sign = "+" if atom.charge > 0 else "-"
        out.append(sign if abs(atom.charge) == 1 else f"{sign}{abs(atom.charge)}")
    out.append("]")
    return "".join(out)


def _bond_symbol(mol: MolGraph, bi: int) -> str:
    b = mol.bonds[bi]
    if b.order == BondOrder.AROMATIC:
        return ""
    if b.order == BondOrder.DOUBLE:
        return "="
    if b.order == BondOrder.TRIPLE:
        return "#"
    if mol.atoms[b.begin].aromatic and mol.atoms[b.end].aromatic:
        return "-"
    return ""


def _ring_label(num: int) -> str:
    return str(num) if num < 10 else f"%{num}"


def write_smiles(mol: MolGraph, ranks: list[int] | None = None,
                 tokens: list[str] | None = None) -> str:
    """Write ``mol`` depth-first, starting each fragment at its lowest-ranked atom.

    Without ``ranks`` the input atom order is used. ``tokens`` overrides the
    per-atom text (used to force bracket atoms).
    """
    n = mol.num_atoms
    if n == 0:
        return ""
    if ranks is None:
        ranks = list(range(n))
    if tokens is None:
        tokens = [atom_token(mol, i) for i in range(n)]
    nbrs = [sorted(mol.neighbors[i], key=lambda t: ranks[t[0]]) for i in range(n)]

    visited = [False] * n
    children: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    ring_open: list[list[tuple[int, int]]] = [[] for _ in range(n)]  # (partner, bond)
    ring_close: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    roots = []
    tree_bonds: set[int] = set()
    for start in sorted(range(n), key=lambda i: ranks[i]):
        if visited[start]:
            continue
        roots.append(start)
        visited[start] = True
        stack = [(start, -1, iter(nbrs[start]))]
        while stack:
            a, via, it = stack[-1]
            for nb, bi in it:
                if bi == via:
                    continue
                if visited[nb]:
                    if bi not in tree_bonds and (nb, bi) not in ring_close[a] \
                            and (a, bi) not in ring_close[nb]:
                        ring_close[a].append((nb, bi))
                        ring_open[nb].append((a, bi))
                    continue
                visited[nb] = True
                tree_bonds.add(bi)
                children[a].append((nb, bi))
                stack.append((nb, bi, iter(nbrs[nb])))
                break
            else:
                stack.pop()

    # ring_close[a] holds closures discovered at the later atom a; the digit
    # is opened at the earlier atom (in ring_open) and closed at a.
    order_of = {}
    seq = []
    for root in roots:
        st = [root]
        while st:
            a = st.pop()
            order_of[a] = len(seq)
            seq.append(a)
            for c, _ in reversed(children[a]):
                st.append(c)

    free: list[int] = []
    next_label = 1
    label_of_bond: dict[int, int] = {}
    parts: list[str] = []

    def emit(a: int) -> None:
        nonlocal next_label
        parts.append(tokens[a])
        closes = sorted(ring_close[a], key=lambda t: label_of_bond[t[1]])
        opens = sorted(ring_open[a], key=lambda t: order_of[t[0]])
        for _, bi in closes:
            lab = label_of_bond.pop(bi)
            parts.append(_ring_label(lab))
            free.append(lab)
            free.sort()
        for _, bi in opens:
            if free:
                lab = free.pop(0)
            else:
                lab = next_label
                next_label += 1
            label_of_bond[bi] = lab
            parts.append(_bond_symbol(mol, bi) + _ring_label(lab))

    def walk(root: int) -> None:
        # iterative pre-order walk emitting branches in parentheses
        stack: list[tuple[str, int, int]] = [("atom", root, -1)]
        while stack:
            kind, a, bi = stack.pop()
            if kind == "close":
                parts.append(")")
                continue
            if kind == "open":
                parts.append("(")
                continue
            if bi >= 0:
                parts.append(_bond_symbol(mol, bi))
            emit(a)
            kids = children[a]
            for k, (c, cb) in enumerate(reversed(kids)):
                last = k == 0
                if not last:
                    stack.append(("close", -1, -1))
                stack.append(("atom", c, cb))
                if not last:
                    stack.append(("open", -1, -1))

    for r, root in enumerate(roots):
        if r:
            parts.append(".")
        walk(root)
    return "".join(parts)
