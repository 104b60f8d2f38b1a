"""One test per primary acceptance criterion.

The terminal summary lists one PASS/FAIL line per criterion; it is printed
by the hook in conftest.py.
"""

import random
import re
import time
from decimal import Decimal

import numpy as np
import pytest

from helpers import (
    ABLATED_COUNTS,
    GRID_MOLECULES,
    GRID_QUERIES,
    REGULAR_COUNTS,
    brute_force_match,
    dbscan_closure,
    gradient_check,
    labels_to_clusters,
    read_panel,
    spearman,
)
from mtgen.affinity import ThresholdState, evaluate, run_schedule
from mtgen.chem import canonical_smiles, parse_smiles
from mtgen.descriptors import qed_of, sa_score
from mtgen.engine import (
    DEMO_CONFIG,
    LEDGER_NAME,
    Interrupted,
    RunConfig,
    derive_seed,
    parse_config_text,
    read_ledger,
    replay,
    report_from_ledger,
    resume_workflow,
    run_workflow,
)
from mtgen.engine.workflow import _bundled, _canonical_list, train_general
from mtgen.metrics import dbscan, generation_stats
from mtgen.smarts import parse_smarts, substructure_match
from mtgen.vae import (
    Batch,
    ModelDims,
    TrainConfig,
    VaeParams,
    Vocabulary,
    decode_probs,
    default_dims,
    encode,
    from_bytes,
    kl_divergence,
    sample,
    to_bytes,
    train,
)
from mtgen.vae.checkpoint import save_checkpoint

VOCAB = Vocabulary.default()


def _schedule(counts):
    t0 = time.perf_counter()
    traj = run_schedule(ThresholdState.initial(), counts)
    return traj, time.perf_counter() - t0


def test_primary_threshold_trajectory_ablated():
    traj, dt = _schedule(ABLATED_COUNTS)
    assert sum(d for _, d, _ in traj) == 10 and len(traj) == 15
    final, _, stop = traj[-1]
    assert stop and not any(s for _, _, s in traj[:-1])
    assert (final.t_global, final.t_ind) == (Decimal("-8.5"), Decimal("-8.0"))
    assert dt < 1.0


def test_primary_threshold_trajectory_regular():
    traj, dt = _schedule(REGULAR_COUNTS)
    assert sum(d for _, d, _ in traj) == 8 and len(traj) == 13
    final, _, stop = traj[-1]
    assert stop and not any(s for _, _, s in traj[:-1])
    assert (final.t_global, final.t_ind) == (Decimal("-8.3"), Decimal("-7.8"))
    assert dt < 1.0


def test_primary_vae_gradients():
    t0 = time.perf_counter()
    for z_every_step in (False, True):
        errs = gradient_check(z_every_step)
        assert max(errs.values()) < 1e-4, errs
    assert kl_divergence(np.zeros((1, 4)), np.zeros((1, 4))) == 0.0
    for d in (1, 2, 5):
        assert kl_divergence(np.ones((1, d)), np.zeros((1, d))) == pytest.approx(0.5 * d, abs=1e-12)
    assert time.perf_counter() - t0 < 60


def test_primary_vae_shapes_and_contracts(tmp_path):
    p = VaeParams.init(ModelDims(), np.random.default_rng(0))
    b = Batch.from_sequences([VOCAB.encode("CCO"), VOCAB.encode("c1ccccc1O")], VOCAB.bos, VOCAB.eos, VOCAB.pad)
    mu, logvar, _ = encode(p, b.enc, b.enc_mask)
    assert mu.shape == logvar.shape == (2, 128)
    probs = decode_probs(p, mu, b.dec_in)
    assert np.abs(probs.sum(axis=-1) - 1.0).max() <= 1e-6

    small = VaeParams.init(default_dims(VOCAB, 16, 8, 12), np.random.default_rng(1))
    out = sample(small, VOCAB, 30, seed=2, max_len=10)
    assert len(out) == 30
    assert all(len(VOCAB.tokenize(re.sub(r"<r\d>", "*", s))) <= 10 for s in out)
    assert out == sample(small, VOCAB, 30, seed=2, max_len=10)

    cfg = TrainConfig(epochs=2, batch_size=3, seed=5)
    r1 = train(small, ["CCO", "CCN", "c1ccccc1"], VOCAB, cfg)
    r2 = train(small, ["CCO", "CCN", "c1ccccc1"], VOCAB, cfg)
    assert r1.params.equal(r2.params)
    back = from_bytes(to_bytes(r1.params, 5)).params
    assert back.equal(r1.params)
    assert sample(back, VOCAB, 10, seed=3) == sample(r1.params, VOCAB, 10, seed=3)


def test_primary_toy_learning():
    t0 = time.perf_counter()
    corpus, skipped = _canonical_list(_bundled("toy_corpus.smi"), "corpus", VOCAB, 60)
    assert len(corpus) == 100 and skipped == 0
    p = VaeParams.init(default_dims(VOCAB, 128, 128, 128), np.random.default_rng(0))
    res = train(p, corpus, VOCAB, TrainConfig(epochs=200, batch_size=20, seed=0))
    assert len(res.trace) == 200 and res.trace[-1].total < res.trace[0].total

    target = "CC(=O)Oc1ccccc1C(=O)O"
    p = VaeParams.init(default_dims(VOCAB, 64, 32, 64), np.random.default_rng(0))
    res = train(p, [target] * 64, VOCAB, TrainConfig(epochs=60, batch_size=16, seed=0))
    out = sample(res.params, VOCAB, 100, seed=1)
    assert sum(s == target for s in out) >= 50
    assert time.perf_counter() - t0 < 600


# Each class lists spellings of one molecule; the brute force works on class ids.
CLASSES = [["CCO", "OCC", "C(O)C"], ["c1ccccc1", "C1=CC=CC=C1"], ["CCN", "NCC"], ["CC(=O)O", "OC(C)=O"],
           ["C1CC1"], ["Oc1ccccc1", "c1ccc(O)cc1"], ["CC(C)C", "C(C)(C)C"], ["C#N", "N#C"]]
INVALID = ["C1CC", "C(C", "c1cccc1", "[Xx]", "CC)"]


def test_primary_metrics_identities():
    rng = random.Random(2024)
    canon = [canonical_smiles(parse_smiles(c[0])) for c in CLASSES]
    for _ in range(1000):
        n = rng.randint(1, 25)
        picks = []
        for _ in range(n):
            if rng.random() < 0.25:
                picks.append((None, rng.choice(INVALID)))
            else:
                k = rng.randrange(len(CLASSES))
                picks.append((k, rng.choice(CLASSES[k])))
        known_ids = {k for k in range(len(CLASSES)) if rng.random() < 0.3}
        st = generation_stats([s for _, s in picks], {canon[k] for k in known_ids})
        valid = [k for k, _ in picks if k is not None]
        uniq = set(valid)
        unk = uniq - known_ids
        assert (st.n_gen, st.n_val, st.n_uni, st.n_unk) == (n, len(valid), len(uniq), len(unk))
        assert st.validity == pytest.approx(100 * len(valid) / n, abs=1e-12)
        if valid:
            assert st.uniqueness == pytest.approx(100 * len(uniq) / len(valid), abs=1e-12)
            assert st.novelty == pytest.approx(100 * len(unk) / len(uniq), abs=1e-12)
            chain = st.validity * st.uniqueness * st.novelty / 1e4
            assert abs(chain - 100 * len(unk) / n) <= 1e-9
        else:
            assert st.uniqueness is None and st.novelty is None


def test_primary_matcher_and_dbscan_oracles():
    for smi in GRID_MOLECULES:
        mol = parse_smiles(smi)
        assert mol.num_atoms <= 8
        for q in GRID_QUERIES:
            query = parse_smarts(q)
            assert query.num_atoms <= 4
            assert substructure_match(mol, query)[0] == brute_force_match(mol, query), (smi, q)
    for seed in range(50):
        rng = np.random.default_rng(seed)
        pts = rng.random((12, 2))
        d = np.round(np.sqrt(((pts[:, None] - pts[None]) ** 2).sum(-1)), 2)
        eps = float(rng.choice([0.1, 0.15, 0.2, 0.3]))
        mp = int(rng.integers(1, 5))
        assert labels_to_clusters(dbscan(d, eps, mp)) == dbscan_closure(d, eps, mp), seed


def test_primary_descriptor_fidelity():
    rows = read_panel()
    assert len(rows) == 50
    q = [qed_of(parse_smiles(s)) for s, _, _ in rows]
    sa = [sa_score(parse_smiles(s)) for s, _, _ in rows]
    assert max(abs(a - r[1]) for a, r in zip(q, rows)) <= 0.05
    assert spearman(q, [r[1] for r in rows]) >= 0.9
    assert max(abs(a - r[2]) for a, r in zip(sa, rows)) <= 1.0
    assert spearman(sa, [r[2] for r in rows]) >= 0.9


def _files(directory):
    return {p.name: p.read_bytes() for p in sorted(directory.iterdir())}


def test_primary_desk_run(tmp_path):
    demo = parse_config_text(DEMO_CONFIG)
    assert demo.phase(0).n_chemical == 2 and len(demo.phases) == 2 and demo.affinity_cycles == 2
    assert all(p.generation_size == 200 for p in demo.phases) and demo.oracle == "mock"

    # One general model serves every run; its training counts toward the budget.
    t0 = time.perf_counter()
    corpus, _ = _canonical_list(_bundled("toy_corpus.smi"), "corpus", VOCAB, demo.max_len)
    params, _ = train_general(corpus, demo, derive_seed(demo.seed, "general"), VOCAB)
    weights = tmp_path / "general.mtgw"
    save_checkpoint(params, weights, seed=demo.seed)
    cfg = RunConfig.from_dict({**demo.to_dict(), "general_weights": str(weights)})
    full = run_workflow(cfg, tmp_path / "full")
    assert time.perf_counter() - t0 < 300
    assert full.finished

    # ledger replay reproduces the reports byte for byte
    replayed = tmp_path / "replayed"
    report_from_ledger(tmp_path / "full").write(replayed)
    assert _files(replayed) == _files(tmp_path / "full" / "reports")

    # interrupt after three chemical cycles, then resume
    with pytest.raises(Interrupted):
        run_workflow(cfg, tmp_path / "cut", stop_after=3)
    resume_workflow(tmp_path / "cut")
    assert (tmp_path / "cut" / LEDGER_NAME).read_bytes() == (tmp_path / "full" / LEDGER_NAME).read_bytes()
    assert _files(tmp_path / "cut" / "reports") == _files(tmp_path / "full" / "reports")

    # every candidate re-passes evaluate at its reporting thresholds
    events = read_ledger(tmp_path / "full" / LEDGER_NAME)
    state = replay(events)
    n = 0
    for (tg, ti), smiles in full.candidates.items():
        th = ThresholdState(Decimal(str(tg)), Decimal(str(ti)))
        for s in smiles:
            assert evaluate(state.record(s), th)
            n += 1
    assert n > 0

    # the ablated run first departs from the regular one at a stage-2 event
    abl_cfg = RunConfig.from_dict({**cfg.to_dict(), "smarts_stage": "post_generation"})
    run_workflow(abl_cfg, tmp_path / "ablated")
    ablated = read_ledger(tmp_path / "ablated" / LEDGER_NAME)
    assert ablated[0].data["config"].pop("smarts_stage") == "post_generation"
    assert events[0].data["config"].pop("smarts_stage") == "in_loop"
    first = next(i for i, (a, b) in enumerate(zip(events, ablated)) if (a.event, a.data) != (b.event, b.data))
    assert events[first].event == ablated[first].event == "stage2"
    assert events[first].data["flagged"] == ablated[first].data["flagged"]
    assert events[first].data["applied"] and not ablated[first].data["applied"]


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
