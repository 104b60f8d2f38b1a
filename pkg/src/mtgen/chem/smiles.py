"""SMILES parsing into :class:`~mtgen.chem.mol.MolGraph`.

Supported grammar: organic-subset and bracket atoms (isotope, charge,
explicit H, atom class), branches, ring closures including ``%nn``, bond
symbols ``- = # :`` and lowercase aromatic atoms. Stereo markers (``@``,
``/``, ``\\``) and wildcards are rejected as unsupported features.

Aromatic input is kekulized, hydrogens are assigned from the default valence
table, and aromaticity is then re-perceived with a Hückel 4n+2 rule on each
SSSR ring, so ``C1=CC=CC=C1`` and ``c1ccccc1`` yield the same graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from mtgen.chem import elements
from mtgen.chem.mol import Atom, Bond, BondOrder, MolGraph

ErrorKind = Literal["syntax", "unclosed_ring", "valence", "unsupported_feature"]


@dataclass(frozen=True)
class ParseDiagnostics:
    error_kind: ErrorKind
    position: int
    message: str


class SmilesError(ValueError):
    """Raised when a SMILES string cannot be turned into a valid graph."""

    def __init__(self, kind: ErrorKind, position: int, message: str):
        super().__init__(f"{kind} at {position}: {message}")
        self.diagnostics = ParseDiagnostics(kind, position, message)

    @property
    def kind(self) -> ErrorKind:
        return self.diagnostics.error_kind

    @property
    def position(self) -> int:
        return self.diagnostics.position


_BOND_SYMBOLS = {"-": BondOrder.SINGLE, "=": BondOrder.DOUBLE, "#": BondOrder.TRIPLE,
                 ":": BondOrder.AROMATIC}
_ORGANIC_2 = ("Cl", "Br")
_ORGANIC_1 = frozenset("BCNOPSFI")
_AROMATIC_ORGANIC = frozenset("bcnops")
_BRACKET_AROMATIC = ("se", "as", "te", "b", "c", "n", "o", "p", "s")


@dataclass
class _RawAtom:
    element: str
    aromatic: bool
    charge: int
    hcount: int | None  # None: organic subset, H assigned later
    isotope: int
    pos: int


def parse_smiles(text: str) -> MolGraph:
    """Parse ``text`` into a valence-checked molecular graph.

    Raises:
        SmilesError: with ``diagnostics`` giving the error kind and the
            character offset of the first offending token.
    """
    if not isinstance(text, str) or not text:
        raise SmilesError("syntax", 0, "empty input")
    try:
        text.encode("ascii")
    except UnicodeEncodeError:
        pos = next(i for i, ch in enumerate(text) if ord(ch) > 127)
        raise SmilesError("syntax", pos, "non-ASCII character") from None
    atoms, bonds = _read(text)
    return _finish(text, atoms, bonds)


def try_parse(text: str) -> MolGraph | None:
    try:
        return parse_smiles(text)
    except SmilesError:
        return None


def diagnose(text: str) -> ParseDiagnostics | None:
    """Return diagnostics for ``text``, or None if it parses."""
    try:
        parse_smiles(text)
    except SmilesError as exc:
        return exc.diagnostics
    return None


def _read(text: str) -> tuple[list[_RawAtom], list[list]]:
    n = len(text)
    atoms: list[_RawAtom] = []
    bonds: list[list] = []  # [a, b, order or None, pos]
    pairs: set[tuple[int, int]] = set()
    prev: int | None = None
    pending: tuple[BondOrder, int] | None = None
    branches: list[tuple[int, int]] = []
    rings: dict[int, tuple[int, tuple[BondOrder, int] | None, int]] = {}
    i = 0

    def add_bond(a: int, b: int, bond: tuple[BondOrder, int] | None, pos: int) -> None:
        if a == b:
            raise SmilesError("syntax", pos, "ring closure to the same atom")
        key = (min(a, b), max(a, b))
        if key in pairs:
            raise SmilesError("syntax", pos, "duplicate bond between the same atoms")
        pairs.add(key)
        bonds.append([a, b, None if bond is None else bond[0], pos])

    while i < n:
        ch = text[i]
        if ch == "(":
            if prev is None or pending is not None:
                raise SmilesError("syntax", i, "branch without a preceding atom")
            branches.append((prev, i))
            i += 1
            if i < n and text[i] == ")":
                raise SmilesError("syntax", i, "empty branch")
            continue
        if ch == ")":
            if not branches:
                raise SmilesError("syntax", i, "unmatched ')'")
            if pending is not None:
                raise SmilesError("syntax", pending[1], "bond symbol without a following atom")
            prev = branches.pop()[0]
            i += 1
            continue
        if ch in _BOND_SYMBOLS:
            if prev is None or pending is not None:
                raise SmilesError("syntax", i, "misplaced bond symbol")
            pending = (_BOND_SYMBOLS[ch], i)
            i += 1
            continue
        if ch in "/\\":
            raise SmilesError("unsupported_feature", i, "double-bond stereo is not supported")
        if ch == "$":
            raise SmilesError("unsupported_feature", i, "quadruple bonds are not supported")
        if ch == ".":
            if prev is None or pending is not None or branches:
                raise SmilesError("syntax", i, "misplaced '.'")
            prev = None
            i += 1
            continue
        if ch.isdigit() or ch == "%":
            start = i
            if ch == "%":
                digits = text[i + 1:i + 3]
                if len(digits) != 2 or not digits.isdigit():
                    raise SmilesError("syntax", i, "'%' must be followed by two digits")
                num = int(text[i + 1:i + 3])
                i += 3
            else:
                num = int(ch)
                i += 1
            if prev is None:
                raise SmilesError("syntax", start, "ring-closure digit without an atom")
            if num in rings:
                other, bond, _ = rings.pop(num)
                if bond is not None and pending is not None and bond[0] != pending[0]:
                    raise SmilesError("syntax", start, "conflicting ring-closure bond orders")
                add_bond(other, prev, pending or bond, start)
            else:
                rings[num] = (prev, pending, start)
            pending = None
            continue
        if ch == "[":
            atom, i = _read_bracket(text, i)
        elif text.startswith(_ORGANIC_2, i):
            atom = _RawAtom(text[i:i + 2], False, 0, None, 0, i)
            i += 2
        elif ch in _ORGANIC_1:
            atom = _RawAtom(ch, False, 0, None, 0, i)
            i += 1
        elif ch in _AROMATIC_ORGANIC:
            atom = _RawAtom(ch.upper(), True, 0, None, 0, i)
            i += 1
        elif ch == "*":
            raise SmilesError("unsupported_feature", i, "wildcard atoms are not supported")
        else:
            raise SmilesError("syntax", i, f"unexpected character {ch!r}")
        idx = len(atoms)
        atoms.append(atom)
        if prev is not None:
            add_bond(prev, idx, pending, atom.pos)
        prev = idx
        pending = None

    if pending is not None:
        raise SmilesError("syntax", pending[1], "bond symbol without a following atom")
    if branches:
        raise SmilesError("syntax", branches[-1][1], "unclosed branch")
    if rings:
        pos = min(r[2] for r in rings.values())
        raise SmilesError("unclosed_ring", pos, "ring-closure digit never closed")
    if not atoms:
        raise SmilesError("syntax", 0, "no atoms")
    return atoms, bonds


def _read_bracket(text: str, start: int) -> tuple[_RawAtom, int]:
    len(text)
    end = text.find("]", start)
    if end < 0:
        raise SmilesError("syntax", start, "unclosed bracket atom")
    i = start + 1
    iso_start = i
    while i < end and text[i].isdigit():
        i += 1
    isotope = int(text[iso_start:i]) if i > iso_start else 0
    if i >= end:
        raise SmilesError("syntax", start, "bracket atom without element")
    aromatic = False
    symbol = None
    if text[i].isupper():
        if i + 1 < end and text[i + 1].islower() and elements.is_element(text[i:i + 2]):
            symbol = text[i:i + 2]
        elif elements.is_element(text[i]):
            symbol = text[i]
    elif text[i] == "*":
        raise SmilesError("unsupported_feature", i, "wildcard atoms are not supported")
    else:
        for sym in _BRACKET_AROMATIC:
            if text.startswith(sym, i):
                symbol, aromatic = sym.capitalize(), True
                break
    if symbol is None:
        raise SmilesError("syntax", i, "unknown element in bracket atom")
    if symbol == "H":
        raise SmilesError("unsupported_feature", i, "explicit hydrogen atoms are not supported")
    i += len(symbol)
    if i < end and text[i] == "@":
        raise SmilesError("unsupported_feature", i, "tetrahedral stereo is not supported")
    hcount = 0
    if i < end and text[i] == "H":
        i += 1
        hcount = 1
        if i < end and text[i].isdigit():
            hcount = int(text[i])
            i += 1
    charge = 0
    if i < end and text[i] in "+-":
        sign = 1 if text[i] == "+" else -1
        sym = text[i]
        i += 1
        if i < end and text[i].isdigit():
            j = i
            while j < end and text[j].isdigit():
                j += 1
            charge = sign * int(text[i:j])
            i = j
        else:
            charge = sign
            while i < end and text[i] == sym:
                charge += sign
                i += 1
    if i < end and text[i] == ":":
        j = i + 1
        while j < end and text[j].isdigit():
            j += 1
        if j == i + 1:
            raise SmilesError("syntax", i, "atom class without digits")
        i = j
    if i != end:
        if text[i] == "@":
            raise SmilesError("unsupported_feature", i, "tetrahedral stereo is not supported")
        raise SmilesError("syntax", i, "unexpected character in bracket atom")
    if abs(charge) > 8:
        raise SmilesError("syntax", start, "charge out of range")
    return _RawAtom(symbol, aromatic, charge, hcount, isotope, start), end + 1


def _lowest_valence(vals: tuple[int, ...], v: int) -> int | None:
    for t in vals:
        if t >= v:
            return t
    return None


def _finish(text: str, raw: list[_RawAtom], raw_bonds: list[list]) -> MolGraph:
    n = len(raw)
    adj: list[list[int]] = [[] for _ in range(n)]
    orders: list[BondOrder] = []
    for bi, (a, b, order, pos) in enumerate(raw_bonds):
        if order is None:
            order = BondOrder.AROMATIC if raw[a].aromatic and raw[b].aromatic else BondOrder.SINGLE
        elif order == BondOrder.AROMATIC and not (raw[a].aromatic and raw[b].aromatic):
            raise SmilesError("syntax", pos, "aromatic bond between non-aromatic atoms")
        orders.append(order)
        adj[a].append(bi)
        adj[b].append(bi)

    # atoms that must receive one double bond in the Kekule structure
    needs = [False] * n
    for ai, atom in enumerate(raw):
        if not atom.aromatic:
            continue
        if not any(orders[bi] == BondOrder.AROMATIC for bi in adj[ai]):
            raise SmilesError("valence", atom.pos, "aromatic atom outside an aromatic system")
        vals = elements.allowed_valences(atom.element, atom.charge)
        if not vals:
            continue
        v = sum(1 if orders[bi] == BondOrder.AROMATIC else int(orders[bi]) for bi in adj[ai])
        v += atom.hcount or 0
        target = _lowest_valence(vals, v)
        if target is None:
            raise SmilesError("valence", atom.pos, "aromatic atom exceeds allowed valence")
        needs[ai] = target - v >= 1

    kekule = [1 if o == BondOrder.AROMATIC else int(o) for o in orders]
    arom_bonds = [bi for bi, o in enumerate(orders) if o == BondOrder.AROMATIC]
    if arom_bonds:
        matched = _kekulize(n, raw_bonds, arom_bonds, needs)
        if matched is None:
            bad = next(ai for ai in range(n) if needs[ai])
            raise SmilesError("valence", raw[bad].pos, "cannot kekulize aromatic system")
        for bi in matched:
            kekule[bi] = 2

    atoms: list[Atom] = []
    for ai, atom in enumerate(raw):
        v = sum(kekule[bi] for bi in adj[ai])
        vals = elements.allowed_valences(atom.element, atom.charge)
        if atom.hcount is None:
            target = _lowest_valence(vals, v) if vals is not None else None
            if target is None:
                raise SmilesError("valence", atom.pos,
                                  f"{atom.element} exceeds its allowed valence")
            implicit, explicit = target - v, 0
        else:
            implicit, explicit = 0, atom.hcount
            if vals is not None and v + explicit > (max(vals) if vals else -1):
                raise SmilesError("valence", atom.pos,
                                  f"[{atom.element}] exceeds its allowed valence")
        atoms.append(Atom(atom.element, False, atom.charge, explicit, implicit, atom.isotope))

    bonds = [Bond(a, b, BondOrder(kekule[bi]), kekule[bi])
             for bi, (a, b, _, _) in enumerate(raw_bonds)]
    return perceive_aromaticity(MolGraph(tuple(atoms), tuple(bonds)))


def _kekulize(n: int, raw_bonds: list[list], arom_bonds: list[int],
              needs: list[bool]) -> list[int] | None:
    """Choose aromatic bonds to make double so every needy atom gets one."""
    cand: dict[int, list[tuple[int, int]]] = {}
    for bi in arom_bonds:
        a, b = raw_bonds[bi][0], raw_bonds[bi][1]
        if needs[a] and needs[b]:
            cand.setdefault(a, []).append((b, bi))
            cand.setdefault(b, []).append((a, bi))
    todo = [a for a in range(n) if needs[a]]
    if not todo:
        return []
    if len(todo) % 2:
        return None
    matched: dict[int, int] = {}
    chosen: list[int] = []

    def solve() -> bool:
        best, best_opts = None, None
        for a in todo:
            if a in matched:
                continue
            opts = [(b, bi) for b, bi in cand.get(a, ()) if b not in matched]
            if best is None or len(opts) < len(best_opts):
                best, best_opts = a, opts
                if not opts:
                    break
        if best is None:
            return True
        for b, bi in best_opts:
            matched[best] = b
            matched[b] = best
            chosen.append(bi)
            if solve():
                return True
            chosen.pop()
            del matched[best], matched[b]
        return False

    return chosen if solve() else None


_LONE_PAIR_DONORS = {"N": 3, "P": 3, "O": 2, "S": 2, "Se": 2, "Te": 2, "As": 3}


def _pi_electrons(mol: MolGraph, ai: int, ring_bonds: frozenset[int]) -> int | None:
    atom = mol.atoms[ai]
    ring = mol.rings
    doubles = [(n, bi) for n, bi in mol.neighbors[ai] if mol.bonds[bi].kekule == 2]
    if any(mol.bonds[bi].kekule == 3 for _, bi in mol.neighbors[ai]):
        return None
    if len(doubles) > 1:
        return None
    if doubles:
        n, bi = doubles[0]
        if bi in ring_bonds or ring.bond_in_ring(bi):
            return 1
        if atom.element != "C" or mol.atoms[n].element == "C":
            return None
        return 0
    connections = mol.degree(ai) + atom.total_h
    if atom.element == "C":
        if atom.charge == -1 and connections == 3:
            return 2
        if atom.charge == 1 and connections == 3:
            return 0
        return None
    if atom.element == "B" and atom.charge == 0 and connections == 3:
        return 0
    donor = _LONE_PAIR_DONORS.get(atom.element)
    if donor is not None and atom.charge == 0 and connections == donor:
        return 2
    if atom.element == "N" and atom.charge == -1 and connections == 2:
        return 2
    return None


def perceive_aromaticity(mol: MolGraph) -> MolGraph:
    """Mark atoms and bonds of Hückel-aromatic SSSR rings as aromatic.

    Works on the Kekule orders stored in each bond; any previous aromatic
    flags are discarded.
    """
    info = mol.rings
    arom_atoms: set[int] = set()
    arom_bonds: set[int] = set()

    def huckel(ring_atoms, ring_bonds) -> bool:
        total = 0
        for ai in ring_atoms:
            e = _pi_electrons(mol, ai, ring_bonds)
            if e is None:
                return False
            total += e
        return total >= 2 and (total - 2) % 4 == 0

    rings = list(zip(info.sssr, info.sssr_bonds))
    single = [huckel(cyc, cbonds) for cyc, cbonds in rings]
    for (cyc, cbonds), ok in zip(rings, single):
        if ok:
            arom_atoms.update(cyc)
            arom_bonds.update(cbonds)
    # ortho-fused pairs are also tested as one envelope (azulene and the like)
    for x in range(len(rings)):
        for y in range(x + 1, len(rings)):
            if single[x] and single[y]:
                continue
            shared = rings[x][1] & rings[y][1]
            if len(shared) != 1:
                continue
            atoms_xy = set(rings[x][0]) | set(rings[y][0])
            bonds_xy = rings[x][1] | rings[y][1]
            envelope = bonds_xy - shared
            if huckel(atoms_xy, bonds_xy | envelope):
                arom_atoms.update(atoms_xy)
                arom_bonds.update(bonds_xy)
    atoms = tuple(
        Atom(a.element, i in arom_atoms, a.charge, a.explicit_h, a.implicit_h, a.isotope)
        for i, a in enumerate(mol.atoms)
    )
    bonds = tuple(
        Bond(b.begin, b.end, BondOrder.AROMATIC if i in arom_bonds else BondOrder(b.kekule),
             b.kekule)
        for i, b in enumerate(mol.bonds)
    )
    out = MolGraph(atoms, bonds)
    # ring perception depends only on connectivity; reuse it
    out.__dict__["rings"] = info
    return out


def read_smiles_file(path) -> list[tuple[str, str]]:
    """Read a SMILES list file: ``SMILES[<TAB>identifier]`` per line, ``#`` comments."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n").rstrip("\r")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t", 1) if "\t" in line else line.split(None, 1)
            smi = parts[0].strip()
            ident = parts[1].strip() if len(parts) > 1 else f"line{lineno}"
            out.append((smi, ident))
    return out
