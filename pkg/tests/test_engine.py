import json
from pathlib import Path

import pytest

from mtgen.engine import (
    DEMO_CONFIG,
    ConfigError,
    DataError,
    DatasetStore,
    Interrupted,
    LEDGER_NAME,
    LedgerError,
    LedgerWriter,
    RunConfig,
    derive_seed,
    load_config,
    parallel_map,
    parse_config_text,
    read_ledger,
    replay,
    report_from_ledger,
    resume,
    resume_workflow,
    run_workflow,
)
from mtgen.smarts.catalogue import SmartsStage

TINY = """\
phases = 1:0.9:40
affinity_cycles = 2
qed_min = 0
sa_max = 10
smarts_stage = off
t_global_start = -4
t_ind_start = -3
n_min = 1
seed = 3
hidden = 16
latent = 8
fc = 16
general_epochs = 3
finetune_epochs = 1
batch_size = 20
"""


def tiny(**over) -> RunConfig:
    cfg = parse_config_text(TINY)
    return RunConfig.from_dict({**cfg.to_dict(), **over})


# configuration

def test_defaults_and_demo_parse():
    cfg = RunConfig()
    assert cfg.phase(0).n_chemical == 40 and cfg.phase(5).ta_threshold == 0.6
    demo = parse_config_text(DEMO_CONFIG)
    assert demo.seed == 7 and demo.smarts_stage is SmartsStage.IN_LOOP
    assert demo.report_thresholds == ((-6.0, -5.5), (-5.5, -5.0))


def test_config_text_round_trip():
    cfg = parse_config_text(DEMO_CONFIG)
    assert parse_config_text(cfg.to_text()) == cfg
    assert RunConfig.from_dict(cfg.to_dict()) == cfg


@pytest.mark.parametrize("text", [
    "bogus = 1", "phases = 0:0.4:10", "phases = 1:1.5:10", "smarts_stage = sometimes",
    "oracle = csv", "targets = A, A", "z_every_step = maybe", "affinity_cycles = x",
    "report_thresholds = -8",
])
def test_config_errors(text):
    with pytest.raises(ConfigError):
        parse_config_text(text)


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.cfg")


def test_relative_paths_and_env_override(tmp_path, monkeypatch):
    p = tmp_path / "r.cfg"
    p.write_text("fixed_set = data/f.smi\n")
    assert load_config(p).fixed_set == str(tmp_path / "data" / "f.smi")
    monkeypatch.setenv("MTGEN_FIXED_SET", "/elsewhere/f.smi")
    assert load_config(p).fixed_set == "/elsewhere/f.smi"


def test_demo_file_matches_constant():
    path = Path(__file__).parents[1] / "configs" / "demo.cfg"
    assert path.read_text() == DEMO_CONFIG


# ledger

def test_ledger_round_trip_and_tamper(tmp_path):
    path = tmp_path / "l.jsonl"
    w = LedgerWriter(path)
    w.append_many([("a", {"x": 1}), ("b", {"y": [1, 2]})])
    w.append("c", {})
    events = read_ledger(path)
    assert [e.event for e in events] == ["a", "b", "c"] and events[1].data == {"y": [1, 2]}
    assert LedgerWriter.open(path).events == events
    lines = path.read_text().splitlines(keepends=True)
    rec = json.loads(lines[1])
    rec["data"]["y"] = [1, 3]
    path.write_text(lines[0] + json.dumps(rec) + "\n" + lines[2])
    with pytest.raises(LedgerError):
        read_ledger(path)


def test_ledger_truncated_line(tmp_path):
    path = tmp_path / "l.jsonl"
    LedgerWriter(path).append("a", {"x": 1})
    path.write_text(path.read_text()[:-5])
    with pytest.raises(LedgerError):
        read_ledger(path)


def test_ledger_rejects_nan(tmp_path):
    with pytest.raises(ValueError):
        LedgerWriter(tmp_path / "l.jsonl").append("a", {"x": float("nan")})


# store and helpers

def test_store_invariants():
    st = DatasetStore(("A", "B"))
    assert st.add(["B", "C", "C", "D"], 0, 0) == ["C", "D"]
    assert st.cumulative() == {"A", "B", "C", "D"}
    with pytest.raises(ValueError):
        st.set_updated(["A"])
    st.set_updated(["D"])
    st.reseed()
    assert st.sizes() == (2, 1, 1) and st.training_set() == ["A", "B", "D"]
    with pytest.raises(ValueError):
        DatasetStore(("A", "A"))


def test_derive_seed_is_stable_and_distinct():
    assert derive_seed(1, "sample", 0, 0) == derive_seed(1, "sample", 0, 0)
    assert derive_seed(1, "sample", 0, 1) != derive_seed(1, "sample", 1, 0)
    assert 0 <= derive_seed(2**62, "x") < 2**63


def test_parallel_map_keeps_order():
    items = list(range(30))
    assert parallel_map(abs, [-i for i in items], threads=3) == items


# workflow

@pytest.fixture(scope="module")
def tiny_run(tmp_path_factory):
    run = tmp_path_factory.mktemp("tiny")
    rep = run_workflow(tiny(), run)
    return run, rep


def test_tiny_run_finishes_with_reports(tiny_run):
    run, rep = tiny_run
    assert rep.finished
    events = read_ledger(run / LEDGER_NAME)
    names = [e.event for e in events]
    assert names[0] == "run_start" and names[-1] == "run_end"
    assert names.count("chemical_cycle_end") == 2 and names.count("affinity_cycle_end") == 2
    assert {p.name for p in (run / "reports").iterdir()} >= {"thresholds.csv", "candidates.csv"}
    assert report_from_ledger(run).tables == rep.tables


def test_stage_counts_chain_and_permissive_filters_pass_everything(tiny_run):
    run, _ = tiny_run
    ev = {}
    for e in read_ledger(run / LEDGER_NAME):
        ev.setdefault(e.event, []).append(e.data)
    for s1, d, ta, s2 in zip(ev["stage1"], ev["descriptors"], ev["ta"], ev["stage2"]):
        assert s1["n_out"] == d["n_in"] and d["n_out"] == ta["n_in"] and ta["n_out"] == s2["n_in"]
        assert d["n_out"] == d["n_in"]  # qed >= 0 and sa <= 10 always hold
        assert s2["n_out"] == s2["n_in"] and not s2["applied"]


def test_finetunes_start_from_general_weights(tiny_run):
    run, _ = tiny_run
    events = read_ledger(run / LEDGER_NAME)
    general = next(e.data["sha256"] for e in events if e.event == "general_weights")
    tunes = [e.data for e in events if e.event == "finetune"]
    assert tunes and all(t["init_sha256"] == general for t in tunes)
    # no fine-tune after the final affinity cycle
    assert [t["stage"] for t in tunes] == ["initial", "chemical", "affinity", "chemical"]


def test_resume_of_finished_run_is_a_no_op(tiny_run):
    run, rep = tiny_run
    before = (run / LEDGER_NAME).read_bytes()
    assert resume(run).finished
    assert resume_workflow(run).tables == rep.tables
    assert (run / LEDGER_NAME).read_bytes() == before


def test_interrupt_and_resume_is_byte_identical(tiny_run, tmp_path):
    run, rep = tiny_run
    with pytest.raises(Interrupted):
        run_workflow(tiny(), tmp_path, stop_after=1)
    assert not resume(tmp_path).finished
    assert resume_workflow(tmp_path).tables == rep.tables
    assert (tmp_path / LEDGER_NAME).read_bytes() == (run / LEDGER_NAME).read_bytes()


def test_start_refuses_existing_ledger(tiny_run):
    with pytest.raises(DataError):
        run_workflow(tiny(), tiny_run[0])


def test_missing_or_altered_checkpoint(tiny_run, tmp_path):
    run, _ = tiny_run
    with pytest.raises(Interrupted):
        run_workflow(tiny(), tmp_path, stop_after=1)
    state = replay(read_ledger(tmp_path / LEDGER_NAME))
    ck = tmp_path / state.current.path
    data = ck.read_bytes()
    ck.write_bytes(data[:-1] + bytes([data[-1] ^ 1]))
    with pytest.raises(DataError):
        resume(tmp_path)
    ck.unlink()
    with pytest.raises(DataError):
        resume(tmp_path)


def test_zero_affinity_cycles_gives_fixed_only_report(tmp_path):
    rep = run_workflow(tiny(affinity_cycles=0), tmp_path)
    names = [e.event for e in read_ledger(tmp_path / LEDGER_NAME)]
    assert names == ["run_start", "general_weights", "fixed_set", "run_end"]
    assert rep.finished and not any(rep.candidates.values())


def test_general_weights_reused(tiny_run, tmp_path):
    run, _ = tiny_run
    state = replay(read_ledger(run / LEDGER_NAME))
    cfg = tiny(general_weights=str(run / state.general.path), affinity_cycles=0)
    run_workflow(cfg, tmp_path)
    ev = next(e for e in read_ledger(tmp_path / LEDGER_NAME) if e.event == "general_weights")
    assert ev.data["sha256"] == state.general.sha256 and not ev.data["trained"]


def test_missing_fixed_set_is_a_data_error(tmp_path):
    with pytest.raises(DataError):
        run_workflow(tiny(fixed_set=str(tmp_path / "none.smi")), tmp_path / "r")
