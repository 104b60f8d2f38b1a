"""Drug-likeness (QED), synthetic accessibility and their property inputs."""

from mtgen.descriptors.properties import (
    PropertyVector,
    alert_count,
    alogp,
    aromatic_ring_count,
    compute_properties,
    hba,
    hbd,
    molecular_weight,
    rotatable_bonds,
    tpsa,
)
from mtgen.descriptors.qed import ads, desirabilities, qed, qed_of
from mtgen.descriptors.sa import sa_score

QED_MIN_DEFAULT = 0.8
SA_MAX_DEFAULT = 3.0


def passes_thresholds(qed_value: float, sa_value: float,
                      qed_min: float = QED_MIN_DEFAULT, sa_max: float = SA_MAX_DEFAULT) -> bool:
    """Keep iff QED >= qed_min and SA <= sa_max (both inclusive)."""
    return qed_value >= qed_min and sa_value <= sa_max


__all__ = [
    "PropertyVector",
    "QED_MIN_DEFAULT",
    "SA_MAX_DEFAULT",
    "ads",
    "alert_count",
    "alogp",
    "aromatic_ring_count",
    "compute_properties",
    "desirabilities",
    "hba",
    "hbd",
    "molecular_weight",
    "passes_thresholds",
    "qed",
    "qed_of",
    "rotatable_bonds",
    "sa_score",
    "tpsa",
]
