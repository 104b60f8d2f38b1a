from decimal import Decimal

import pytest
from hypothesis import given, settings, strategies as st

from helpers import ABLATED_COUNTS, REGULAR_COUNTS
from mtgen.affinity import (
    CsvOracle,
    MockOracle,
    ScoreCache,
    ScoreRecord,
    Target,
    ThresholdState,
    build_fixed_set,
    decay,
    default_targets,
    evaluate,
    load_mock_references,
    read_scores_csv,
    run_schedule,
    step,
    update_patience,
    write_scores_csv,
)
from mtgen.chem import canonical_smiles, parse_smiles
from mtgen.affinity.oracle import SCORE_MAX, SCORE_MIN

ST = ThresholdState.initial()


def rec(*scores):
    return ScoreRecord(f"m{scores}", tuple((f"T{i}", s) for i, s in enumerate(scores)))


def test_evaluate_global_and_individual():
    assert evaluate(rec(-8.0, -7.5, -7.0), ST)
    assert not evaluate(rec(-9.0, -9.0, -6.9), ST)  # one target too weak
    assert not evaluate(rec(-7.4, -7.2, -7.1), ST)  # mean too weak
    assert evaluate(rec(-7.5, -7.5, -7.5), ST)  # both bounds inclusive


def test_evaluate_missing_target():
    with pytest.raises(KeyError):
        evaluate(rec(-9.0), ST, targets=["T0", "T1"])


def test_decay_and_patience_examples():
    st, decayed, stop = step(ST, 60)
    assert decayed and not stop and (st.t_global, st.t_ind) == (Decimal("-7.6"), Decimal("-7.1"))
    assert st.counter == 0
    st = ST
    for k in range(3):
        st, decayed, stop = step(st, 10)
        assert not decayed and stop == (k == 2)


def test_counter_resets_on_decay():
    st, _ = update_patience(ThresholdState.initial(), False)
    st, _ = update_patience(st, False)
    assert st.counter == 2
    st, _ = update_patience(st, True)
    assert st.counter == 0


def test_scripted_schedules_reach_published_thresholds():
    traj = run_schedule(ST, ABLATED_COUNTS)
    assert len(traj) == 15 and traj[-1][2]
    assert (traj[-1][0].t_global, traj[-1][0].t_ind) == (Decimal("-8.5"), Decimal("-8.0"))
    traj = run_schedule(ST, REGULAR_COUNTS)
    assert len(traj) == 13 and traj[-1][2]
    assert (traj[-1][0].global_value, traj[-1][0].ind_value) == (-8.3, -7.8)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 120), min_size=1, max_size=40))
def test_thresholds_never_increase_and_stop_exactly_at_patience(counts):
    st = ST
    run = 0
    for n in counts:
        new, decayed, stop = step(st, n)
        assert new.t_global <= st.t_global and new.t_ind <= st.t_ind
        run = 0 if n >= 50 else run + 1
        assert stop == (run >= 3)
        st = new
        if stop:
            break


def test_invalid_state():
    with pytest.raises(ValueError):
        ThresholdState.initial(delta=-0.1)
    with pytest.raises(ValueError):
        decay(ST, -1)


def test_mock_oracle_is_deterministic_and_bounded():
    oracle = MockOracle.bundled(seed=5)
    t = default_targets()[0]
    for s in ("CCO", "c1ccccc1", "CC(=O)Oc1ccccc1C(=O)O"):
        a, b = oracle.score(s, t), oracle.score(s, t)
        assert a == b and SCORE_MIN <= a <= SCORE_MAX
    assert MockOracle.bundled(seed=6).score("CCO", t) != oracle.score("CCO", t)


def test_mock_reference_scores_best():
    oracle = MockOracle.bundled()
    for t, smi in load_mock_references():
        can = canonical_smiles(parse_smiles(smi))
        assert oracle.score(can, t) < oracle.score("CCO", t)


def test_mock_unknown_target():
    with pytest.raises(KeyError):
        MockOracle.bundled().score("CCO", Target("nope"))


def test_score_cache_calls_oracle_once():
    calls = []

    class Counting:
        def score(self, smiles, target):
            calls.append((smiles, target.id))
            return -7.0

    cache = ScoreCache(Counting())
    t = Target("A")
    cache.get("CCO", t)
    cache.get("CCO", t)
    assert calls == [("CCO", "A")]


def test_csv_round_trip_and_missing_pair(tmp_path):
    p = tmp_path / "s.csv"
    write_scores_csv(p, [("CCO", "A", -7.25), ("CCN", "A", -6.0)])
    assert read_scores_csv(p) == [("CCO", "A", -7.25), ("CCN", "A", -6.0)]
    oracle = CsvOracle(p)
    assert oracle.score("CCO", Target("A")) == -7.25
    with pytest.raises(KeyError):
        oracle.score("CCO", Target("B"))
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b,c\n")
    with pytest.raises(ValueError):
        read_scores_csv(bad)


def test_build_fixed_set():
    targets = [Target("A"), Target("B")]

    class Table:
        def score(self, smiles, target):
            return {"CCO": -8.0, "CCN": -6.0}[smiles] - (0.5 if target.id == "B" else 0.0)

    res = build_fixed_set(["CCO", "CCN"], ScoreCache(Table()), targets, -7.5)
    assert res.kept == ("CCO",) and len(res.records) == 2
    assert build_fixed_set(["CCN"], ScoreCache(Table()), targets, -9.0).empty
