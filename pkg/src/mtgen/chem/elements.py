"""Element table: atomic numbers, average masses and default valences."""

from __future__ import annotations

# symbol -> (atomic number, average atomic mass)
_ELEMENTS: dict[str, tuple[int, float]] = {
    "H": (1, 1.008), "He": (2, 4.003), "Li": (3, 6.941), "Be": (4, 9.012),
    "B": (5, 10.812), "C": (6, 12.011), "N": (7, 14.007), "O": (8, 15.999),
    "F": (9, 18.998), "Ne": (10, 20.18), "Na": (11, 22.99), "Mg": (12, 24.305),
    "Al": (13, 26.982), "Si": (14, 28.086), "P": (15, 30.974), "S": (16, 32.067),
    "Cl": (17, 35.453), "Ar": (18, 39.948), "K": (19, 39.098), "Ca": (20, 40.078),
    "Sc": (21, 44.956), "Ti": (22, 47.867), "V": (23, 50.942), "Cr": (24, 51.996),
    "Mn": (25, 54.938), "Fe": (26, 55.845), "Co": (27, 58.933), "Ni": (28, 58.693),
    "Cu": (29, 63.546), "Zn": (30, 65.39), "Ga": (31, 69.723), "Ge": (32, 72.61),
    "As": (33, 74.922), "Se": (34, 78.96), "Br": (35, 79.904), "Kr": (36, 83.8),
    "Rb": (37, 85.468), "Sr": (38, 87.62), "Y": (39, 88.906), "Zr": (40, 91.224),
    "Nb": (41, 92.906), "Mo": (42, 95.94), "Tc": (43, 98.0), "Ru": (44, 101.07),
    "Rh": (45, 102.906), "Pd": (46, 106.42), "Ag": (47, 107.868), "Cd": (48, 112.411),
    "In": (49, 114.818), "Sn": (50, 118.71), "Sb": (51, 121.76), "Te": (52, 127.6),
    "I": (53, 126.904), "Xe": (54, 131.29), "Cs": (55, 132.905), "Ba": (56, 137.328),
    "La": (57, 138.906), "Hf": (72, 178.49), "Ta": (73, 180.948), "W": (74, 183.84),
    "Re": (75, 186.207), "Os": (76, 190.23), "Ir": (77, 192.217), "Pt": (78, 195.078),
    "Au": (79, 196.967), "Hg": (80, 200.59), "Tl": (81, 204.383), "Pb": (82, 207.2),
    "Bi": (83, 208.98), "Po": (84, 209.0), "At": (85, 210.0), "Rn": (86, 222.0),
    "Fr": (87, 223.0), "Ra": (88, 226.0), "Ho": (67, 164.93),
}

SYMBOLS: dict[int, str] = {z: s for s, (z, _) in _ELEMENTS.items()}

# Default valences for main-group elements, indexed by atomic number.
_VALENCES: dict[int, tuple[int, ...]] = {
    1: (1,), 2: (0,), 3: (1,), 4: (2,), 5: (3,), 6: (4,), 7: (3,), 8: (2,), 9: (1,),
    10: (0,), 11: (1,), 12: (2,), 13: (3,), 14: (4,), 15: (3, 5), 16: (2, 4, 6),
    17: (1,), 18: (0,), 19: (1,), 20: (2,), 31: (3,), 32: (4,), 33: (3, 5),
    34: (2, 4, 6), 35: (1,), 36: (0,), 37: (1,), 38: (2,), 49: (3,), 50: (2, 4),
    51: (3, 5), 52: (2, 4, 6), 53: (1, 3, 5), 54: (0,), 55: (1,), 56: (2,),
}

ORGANIC_SUBSET = frozenset({"B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I"})
AROMATIC_SYMBOLS = frozenset({"b", "c", "n", "o", "p", "s", "se", "as", "te"})


def is_element(symbol: str) -> bool:
    return symbol in _ELEMENTS


def atomic_number(symbol: str) -> int:
    return _ELEMENTS[symbol][0]


def atomic_mass(symbol: str) -> float:
    return _ELEMENTS[symbol][1]


def allowed_valences(symbol: str, charge: int = 0) -> tuple[int, ...] | None:
    """Allowed valences for ``symbol`` carrying ``charge``.

    A charged main-group atom takes the valences of its isoelectronic
    neighbour (N+ behaves like C, O- like F, C- like N, and so on).
    Returns None when the element has no valence rules (metals).
    """
    z = atomic_number(symbol)
    if z not in _VALENCES:
        return None
    if charge == 0:
        return _VALENCES[z]
    if z in (6, 14, 32):
        v = 4 - abs(charge)
        return (v,) if v >= 0 else ()
    if z == 5 and charge > 0:
        v = 3 - charge
        return (v,) if v >= 0 else ()
    return _VALENCES.get(z - charge, ())
