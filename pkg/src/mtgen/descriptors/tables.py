"""Loaders for the bundled descriptor data tables."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from mtgen.smarts.query import QueryGraph, parse_smarts


def _rows(name: str) -> list[list[str]]:
    text = resources.files("mtgen.data").joinpath(name).read_text(encoding="utf-8")
    return [
        line.split("\t")
        for line in text.splitlines()
        if line.strip() and not line.startswith("#")
    ]


@dataclass(frozen=True)
class AdsParams:
    a: float
    b: float
    c: float
    d: float
    e: float
    f: float
    dmax: float


QED_PROPERTIES = ("MW", "ALOGP", "HBA", "HBD", "PSA", "ROTB", "AROM", "ALERTS")


@lru_cache(maxsize=None)
def qed_params() -> tuple[dict[str, AdsParams], dict[str, tuple[float, ...]]]:
    """ADS parameters per property and the weight sets (``mean``, ``max``, ``none``)."""
    params: dict[str, AdsParams] = {}
    weights: dict[str, list[float]] = {"mean": [], "max": [], "none": []}
    rows = {r[0]: r for r in _rows("qed_params.tsv")}
    for prop in QED_PROPERTIES:
        r = rows[prop]
        params[prop] = AdsParams(*(float(x) for x in r[1:8]))
        for key, val in zip(("mean", "max", "none"), r[8:11]):
            weights[key].append(float(val))
    return params, {k: tuple(v) for k, v in weights.items()}


@dataclass(frozen=True)
class TypedPattern:
    type: str
    query: QueryGraph
    value: float


@lru_cache(maxsize=None)
def alogp_table() -> tuple[tuple[TypedPattern, ...], tuple[TypedPattern, ...]]:
    """(heavy-atom rows, hydrogen rows), each in priority order."""
    heavy, hydro = [], []
    for t, smarts, val, kind in _rows("alogp_contrib.tsv"):
        row = TypedPattern(t, parse_smarts(smarts, name=t), float(val))
        (heavy if kind == "heavy" else hydro).append(row)
    return tuple(heavy), tuple(hydro)


@lru_cache(maxsize=None)
def psa_table() -> dict[tuple, float]:
    """Key ``(element, nbrs, h, charge, single, double, triple, aromatic, ring3)``."""
    out: dict[tuple, float] = {}
    for r in _rows("psa_contrib.tsv"):
        el, nums, ring3, val = r[0], tuple(int(x) for x in r[1:8]), r[8], float(r[9])
        rings = (0, 1) if ring3 == "*" else (int(ring3),)
        for flag in rings:
            out[(el, *nums, flag)] = val
    return out


@lru_cache(maxsize=None)
def qed_alerts() -> tuple[tuple[str, QueryGraph], ...]:
    return tuple((aid, parse_smarts(smarts, name=aid)) for aid, smarts in _rows("qed_alerts.tsv"))


@lru_cache(maxsize=None)
def sa_fragments() -> dict[int, float]:
    """Morgan radius-2 environment identifier -> fragment score."""
    return {int(r[0], 16): float(r[1]) for r in _rows("sa_fragments.tsv")}
