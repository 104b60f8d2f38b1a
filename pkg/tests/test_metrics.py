
import numpy as np
import pytest

from helpers import dbscan_closure, labels_to_clusters
from mtgen.metrics import (
    GenerationStats,
    dbscan,
    generation_stats,
    scaffold_cluster_report,
    scaffold_groups,
    score_histogram,
    split_generated,
    tanimoto_distance_matrix,
)


def test_stats_example():
    st = generation_stats(["CCO", "OCC", "C1CC", "c1ccccc1", "CCN"], {"CCN"})
    assert (st.n_gen, st.n_val, st.n_uni, st.n_unk) == (5, 4, 3, 2)
    assert st.validity == 80.0 and st.uniqueness == 75.0


def test_undefined_percentages():
    st = generation_stats(["C1CC"], set())
    assert st.validity == 0.0 and st.uniqueness is None and st.novelty is None
    assert GenerationStats(0, 0, 0, 0).validity is None


def test_count_ordering_enforced():
    with pytest.raises(ValueError):
        GenerationStats(3, 4, 1, 0)


def test_split_keeps_first_seen_order():
    split = split_generated(["OCC", "c1ccccc1", "CCO"], set())
    assert [s for s, _ in split.novel] == ["CCO", "c1ccccc1"]


def test_histogram_bins():
    assert score_histogram([-7.3, -7.26, -7.25, -6.6], 0.25) == [
        (-7.5, 2), (-7.25, 1), (-7.0, 0), (-6.75, 1)]
    assert score_histogram([]) == []
    with pytest.raises(ValueError):
        score_histogram([1.0], 0)


def test_dbscan_basic_and_validation():
    d = np.array([[0, 0.1, 0.9], [0.1, 0, 0.9], [0.9, 0.9, 0]])
    assert dbscan(d, 0.2, 2) == [0, 0, -1]
    assert dbscan(d, 0.2, 2, weights=[1, 1, 2]) == [0, 0, 1]
    with pytest.raises(ValueError):
        dbscan(np.array([[0, 1], [0.5, 0]]), 0.2)
    with pytest.raises(ValueError):
        dbscan(np.array([[1.0]]), 0.2)


@pytest.mark.parametrize("seed", range(10))
def test_dbscan_equals_closure_oracle(seed):
    rng = np.random.default_rng(seed)
    pts = rng.random((12, 2))
    d = np.round(np.sqrt(((pts[:, None] - pts[None]) ** 2).sum(-1)), 2)
    for eps in (0.1, 0.2, 0.3):
        for mp in (1, 2, 3):
            assert labels_to_clusters(dbscan(d, eps, mp)) == dbscan_closure(d, eps, mp)


def test_scaffold_groups_weight_by_distinct_molecules():
    groups, n, acyclic = scaffold_groups(["Cc1ccccc1", "CCc1ccccc1", "CCc1ccccc1", "CCO"])
    assert groups == {"c1ccccc1": 2} and n == 3 and acyclic == 1


def test_shared_scaffold_forms_one_cluster():
    rep = scaffold_cluster_report([["Cc1ccccc1", "Oc1ccccc1"], ["Cc1ccccc1", "C1CCNCC1"]], [0.2, 0.4])
    assert rep.counts(0) == {0.2: 1, 0.4: 1}
    assert rep.counts(1) == {0.2: 0, 0.4: 0}
    assert all(r.n_noise == 2 for r in rep.rows if r.cycle == 1)


def test_distance_matrix_symmetry():
    d = tanimoto_distance_matrix(["CCO", "CCN", "c1ccccc1"])
    assert np.allclose(d, d.T) and np.all(np.diag(d) == 0)
    assert np.all((d >= 0) & (d <= 1))
