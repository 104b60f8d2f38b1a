"""Quantitative estimate of drug-likeness."""

from __future__ import annotations

import math

from mtgen.chem.mol import MolGraph
from mtgen.descriptors import tables
from mtgen.descriptors.properties import PropertyVector, compute_properties


def ads(x: float, p: tables.AdsParams) -> float:
    """Asymmetric double sigmoid desirability, normalized by its maximum."""
    rise = 1.0 + math.exp(-(x - p.c + p.d / 2.0) / p.e)
    fall = 1.0 + math.exp(-(x - p.c - p.d / 2.0) / p.f)
    return (p.a + p.b / rise * (1.0 - 1.0 / fall)) / p.dmax


def desirabilities(props: PropertyVector) -> tuple[float, ...]:
    params, _ = tables.qed_params()
    return tuple(ads(float(x), params[name])
                 for name, x in zip(tables.QED_PROPERTIES, props.as_tuple()))


def qed(props: PropertyVector, weights: str = "mean") -> float:
    """Weighted geometric mean of the eight desirabilities.

    Args:
        props: descriptor vector from :func:`compute_properties`.
        weights: ``"mean"`` (default), ``"max"`` or ``"none"`` (unweighted).
    """
    _, wsets = tables.qed_params()
    if weights not in wsets:
        raise ValueError(f"unknown QED weight set {weights!r}")
    w = wsets[weights]
    d = desirabilities(props)
    return math.exp(sum(wi * math.log(di) for wi, di in zip(w, d)) / sum(w))


def qed_of(mol: MolGraph, weights: str = "mean") -> float:
    return qed(compute_properties(mol), weights)
