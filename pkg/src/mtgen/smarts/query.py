"""SMARTS subset parser.

Atom primitives: element symbols (aliphatic uppercase, aromatic lowercase),
``#n``, ``*``, ``a``, ``A``, ``D<n>``, ``X<n>``, ``H<n>``, ``h<n>``, ``R<n>``,
``r<n>``, ``v<n>``, charges and isotopes. Bond primitives: ``- = # : ~ @``.
Logical operators ``!``, ``&`` (or juxtaposition), ``,`` and ``;`` follow
Daylight precedence. Disconnected components (``.``) are allowed.
Recursive SMARTS and chirality are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from mtgen.chem import elements


class SmartsError(ValueError):
    def __init__(self, position: int, message: str):
        super().__init__(message)
        self.position = position
        self.message = message

    def __str__(self) -> str:
        return f"syntax error at {self.position}: {self.message}"


class UnsupportedPrimitive(SmartsError):
    def __init__(self, position: int, primitive: str):
        super().__init__(position, primitive)
        self.primitive = primitive

    def __str__(self) -> str:
        return f"unsupported primitive {self.primitive!r} at {self.position}"


# Expression trees are nested tuples:
#   ("prim", name, value) | ("not", expr) | ("and", (e1, e2, ...)) | ("or", (...))
Expr = tuple

TRUE: Expr = ("prim", "true", None)


@dataclass(frozen=True)
class QueryBond:
    begin: int
    end: int
    expr: Expr


@dataclass(frozen=True)
class QueryGraph:
    atoms: tuple[Expr, ...]
    bonds: tuple[QueryBond, ...]
    name: str = ""
    smarts: str = ""
    neighbors: tuple[tuple[tuple[int, int], ...], ...] = field(default=(), compare=False)

    def __post_init__(self):
        adj: list[list[tuple[int, int]]] = [[] for _ in self.atoms]
        for bi, b in enumerate(self.bonds):
            adj[b.begin].append((b.end, bi))
            adj[b.end].append((b.begin, bi))
        object.__setattr__(self, "neighbors", tuple(tuple(a) for a in adj))

    @property
    def num_atoms(self) -> int:
        return len(self.atoms)


_DEFAULT_BOND: Expr = ("or", (("prim", "bond", 1), ("prim", "bond", 4)))
_ORGANIC_2 = ("Cl", "Br")
_ORGANIC_1 = "BCNOPSFI"
_AROM_1 = "bcnops"
_BOND_CHARS = "-=#:~@!/\\"
_BRACKET_AROM = ("se", "as", "te", "b", "c", "n", "o", "p", "s")


def _element(symbol: str, aromatic: bool | None) -> Expr:
    z = elements.atomic_number(symbol)
    if aromatic is None:
        return ("prim", "z", z)
    return ("and", (("prim", "z", z), ("prim", "arom", aromatic)))


class _Parser:
    def __init__(self, text: str):
        self.s = text
        self.i = 0

    def peek(self, k: int = 0) -> str:
        j = self.i + k
        return self.s[j] if j < len(self.s) else ""

    def number(self) -> int | None:
        j = self.i
        while j < len(self.s) and self.s[j].isdigit():
            j += 1
        if j == self.i:
            return None
        val = int(self.s[self.i:j])
        self.i = j
        return val

    # ---- top level ----
    def parse(self) -> tuple[list[Expr], list[QueryBond]]:
        atoms: list[Expr] = []
        bonds: list[QueryBond] = []
        seen_pairs: set[tuple[int, int]] = set()
        prev: int | None = None
        pending: tuple[Expr, int] | None = None
        branches: list[int] = []
        rings: dict[int, tuple[int, Expr | None, int]] = {}
        s = self.s

        def bond(a: int, b: int, expr: Expr | None, pos: int) -> None:
            key = (min(a, b), max(a, b))
            if a == b or key in seen_pairs:
                raise SmartsError(pos, "invalid ring closure")
            seen_pairs.add(key)
            bonds.append(QueryBond(a, b, expr if expr is not None else _DEFAULT_BOND))

        while self.i < len(s):
            ch = s[self.i]
            pos = self.i
            if ch == "(":
                if prev is None or pending is not None:
                    raise SmartsError(pos, "branch without preceding atom")
                branches.append(prev)
                self.i += 1
                continue
            if ch == ")":
                if not branches or pending is not None:
                    raise SmartsError(pos, "unbalanced ')'")
                prev = branches.pop()
                self.i += 1
                continue
            if ch == ".":
                if prev is None or pending is not None or branches:
                    raise SmartsError(pos, "misplaced '.'")
                prev = None
                self.i += 1
                continue
            if ch in _BOND_CHARS:
                if prev is None or pending is not None:
                    raise SmartsError(pos, "misplaced bond")
                pending = (self.bond_expr(), pos)
                continue
            if ch.isdigit() or ch == "%":
                if prev is None:
                    raise SmartsError(pos, "ring closure without atom")
                if ch == "%":
                    digits = s[self.i + 1:self.i + 3]
                    if len(digits) != 2 or not digits.isdigit():
                        raise SmartsError(pos, "'%' needs two digits")
                    num = int(digits)
                    self.i += 3
                else:
                    num = int(ch)
                    self.i += 1
                expr = pending[0] if pending else None
                if num in rings:
                    other, oexpr, _ = rings.pop(num)
                    bond(other, prev, expr if expr is not None else oexpr, pos)
                else:
                    rings[num] = (prev, expr, pos)
                pending = None
                continue
            atom = self.atom()
            atoms.append(atom)
            idx = len(atoms) - 1
            if prev is not None:
                bond(prev, idx, pending[0] if pending else None, pos)
            prev = idx
            pending = None
        if pending is not None:
            raise SmartsError(pending[1], "dangling bond")
        if branches:
            raise SmartsError(len(s) - 1, "unclosed branch")
        if rings:
            raise SmartsError(min(r[2] for r in rings.values()), "unclosed ring")
        if not atoms:
            raise SmartsError(0, "no atoms")
        return atoms, bonds

    def atom(self) -> Expr:
        s, i = self.s, self.i
        ch = s[i]
        if ch == "[":
            end = s.find("]", i)
            if end < 0:
                raise SmartsError(i, "unclosed '['")
            inner = _Parser(s[i + 1:end])
            try:
                expr = inner.atom_expr()
            except SmartsError as exc:
                exc.position += i + 1
                raise
            if inner.i != end - i - 1:
                raise SmartsError(i + 1 + inner.i, "unexpected character in bracket")
            self.i = end + 1
            return expr
        if s.startswith(_ORGANIC_2, i):
            self.i += 2
            return _element(s[i:i + 2], False)
        if ch in _ORGANIC_1:
            self.i += 1
            return _element(ch, False)
        if ch in _AROM_1:
            self.i += 1
            return _element(ch.upper(), True)
        if ch == "*":
            self.i += 1
            return TRUE
        if ch == "a":
            self.i += 1
            return ("prim", "arom", True)
        if ch == "A":
            self.i += 1
            return ("prim", "arom", False)
        if ch == "$":
            raise UnsupportedPrimitive(i, "$(...)")
        raise SmartsError(i, f"unexpected character {ch!r}")

    # ---- atom expressions ----
    def atom_expr(self) -> Expr:
        return self._low(self.atom_primitive)

    def bond_expr(self) -> Expr:
        return self._low(self.bond_primitive, bond=True)

    def _low(self, prim, bond: bool = False) -> Expr:
        parts = [self._or(prim, bond)]
        while self.peek() == ";":
            self.i += 1
            parts.append(self._or(prim, bond))
        return parts[0] if len(parts) == 1 else ("and", tuple(parts))

    def _or(self, prim, bond: bool) -> Expr:
        parts = [self._and(prim, bond)]
        while self.peek() == ",":
            self.i += 1
            parts.append(self._and(prim, bond))
        return parts[0] if len(parts) == 1 else ("or", tuple(parts))

    def _and(self, prim, bond: bool) -> Expr:
        parts = [self._not(prim)]
        while True:
            c = self.peek()
            if c == "&":
                self.i += 1
                parts.append(self._not(prim))
            elif c and c not in ",;]" and (not bond or c in _BOND_CHARS):
                parts.append(self._not(prim))
            else:
                break
        return parts[0] if len(parts) == 1 else ("and", tuple(parts))

    def _not(self, prim) -> Expr:
        if self.peek() == "!":
            self.i += 1
            return ("not", self._not(prim))
        return prim()

    def bond_primitive(self) -> Expr:
        c = self.peek()
        pos = self.i
        self.i += 1
        if c == "-":
            return ("prim", "bond", 1)
        if c == "=":
            return ("prim", "bond", 2)
        if c == "#":
            return ("prim", "bond", 3)
        if c == ":":
            return ("prim", "bond", 4)
        if c == "~":
            return TRUE
        if c == "@":
            return ("prim", "ringbond", True)
        if c in "/\\":
            raise UnsupportedPrimitive(pos, c)
        raise SmartsError(pos, f"bad bond primitive {c!r}")

    def atom_primitive(self) -> Expr:
        s = self.s
        pos = self.i
        c = self.peek()
        if not c:
            raise SmartsError(pos, "missing atom primitive")
        if c == "$":
            raise UnsupportedPrimitive(pos, "$(...)")
        if c == "@":
            raise UnsupportedPrimitive(pos, "@")
        if c == "^":
            raise UnsupportedPrimitive(pos, "^")
        if c.isdigit():
            return ("prim", "isotope", self.number())
        if c == "#":
            self.i += 1
            z = self.number()
            if z is None:
                raise SmartsError(pos, "'#' needs an atomic number")
            return ("prim", "z", z)
        if c == "*":
            self.i += 1
            return TRUE
        if c in "+-":
            self.i += 1
            n = self.number()
            if n is None:
                n = 1
                while self.peek() == c:
                    self.i += 1
                    n += 1
            return ("prim", "charge", n if c == "+" else -n)
        two = s[self.i:self.i + 2]
        if c.isupper() and len(two) == 2 and two[1].islower() and elements.is_element(two):
            # two-letter symbols (Hg, Ru, Xe) win over the H, R, X, D primitives
            self.i += 2
            return _element(two, False)
        if c in "DXRrvxh" or (c == "H" and not self._is_hydrogen_element()):
            self.i += 1
            n = self.number()
            if c == "x":
                raise UnsupportedPrimitive(pos, "x")
            if c == "D":
                return ("prim", "degree", 1 if n is None else n)
            if c == "X":
                return ("prim", "conn", 1 if n is None else n)
            if c == "H":
                return ("prim", "hcount", 1 if n is None else n)
            if c == "h":
                return ("prim", "implicit_h", 1 if n is None else n)
            if c == "v":
                return ("prim", "valence", 1 if n is None else n)
            if c == "R":
                return ("prim", "ring_count", n)
            return ("prim", "ring_size", n)
        if c == "H":
            self.i += 1
            return ("prim", "false", None)
        if c.isupper():
            two = s[self.i:self.i + 2]
            if len(two) == 2 and two[1].islower() and elements.is_element(two):
                self.i += 2
                return _element(two, False)
            if elements.is_element(c):
                self.i += 1
                return _element(c, False)
        if c == "a":
            self.i += 1
            if self.peek() == "s":
                self.i += 1
                return _element("As", True)
            return ("prim", "arom", True)
        if c == "A":
            self.i += 1
            return ("prim", "arom", False)
        for sym in _BRACKET_AROM:
            if s.startswith(sym, self.i):
                self.i += len(sym)
                return _element(sym.capitalize(), True)
        raise SmartsError(pos, f"unknown atom primitive {c!r}")

    def _is_hydrogen_element(self) -> bool:
        # [H], [2H], [H+]: bracket holding only a hydrogen atom
        rest = self.s[self.i + 1:]
        start = self.s[:self.i]
        return start.strip("0123456789") == "" and (rest == "" or rest[0] in "+-")


def parse_smarts(pattern: str, name: str = "") -> QueryGraph:
    """Parse ``pattern`` into a :class:`QueryGraph`.

    Raises:
        UnsupportedPrimitive: for recursive SMARTS, chirality and other
            primitives outside the supported subset.
        SmartsError: for malformed patterns, with the character position.
    """
    if not pattern:
        raise SmartsError(0, "empty pattern")
    atoms, bonds = _Parser(pattern).parse()
    return QueryGraph(tuple(atoms), tuple(bonds), name=name, smarts=pattern)

