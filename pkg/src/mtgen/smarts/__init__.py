"""SMARTS-subset queries, substructure matching and catalogue screening."""

from mtgen.smarts.catalogue import (
    Catalogue,
    FilterStages,
    ScreenResult,
    SmartsStage,
    bundled_catalogues,
    load_catalogue_file,
    parse_catalogue_lines,
    screen,
)
from mtgen.smarts.match import (
    all_matches,
    count_matches,
    find_match,
    has_match,
    matches_at,
    matching_atoms,
    substructure_match,
)
from mtgen.smarts.query import QueryBond, QueryGraph, SmartsError, UnsupportedPrimitive, parse_smarts

__all__ = [
    "Catalogue",
    "FilterStages",
    "QueryBond",
    "QueryGraph",
    "ScreenResult",
    "SmartsError",
    "SmartsStage",
    "UnsupportedPrimitive",
    "all_matches",
    "bundled_catalogues",
    "count_matches",
    "find_match",
    "has_match",
    "load_catalogue_file",
    "matches_at",
    "matching_atoms",
    "parse_catalogue_lines",
    "parse_smarts",
    "screen",
    "substructure_match",
]
