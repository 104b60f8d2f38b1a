"""The two-level active-learning loop.

Chemical cycles (sample, filter, accumulate, fine-tune) run inside affinity
cycles (score, threshold-filter, decay, fine-tune). Every state change is
expressed as ledger events and applied through :func:`apply_event`, for
live runs and for replay alike, so a state rebuilt from the ledger equals
the state the live run held at that point.

Event schema (``data`` fields):

* ``run_start``: version, seed, seed_generated, config
* ``general_weights``: path, sha256, trained, n_train, n_skipped, final_loss
* ``fixed_set``: smiles, scores (smiles -> per-target list)
* ``finetune``: stage (initial|chemical|affinity), affinity_cycle, chemical_cycle,
  init_sha256, n_train, epochs, seed, path, sha256, final_loss
* ``generate``: affinity_cycle, chemical_cycle, seed, n_gen, n_val, n_uni, n_unk,
  n_unencodable, validity, uniqueness, novelty
* ``stage1``: n_in, n_out, rejected ([smiles, [pattern ids]])
* ``descriptors``: n_in, n_out, qed_min, sa_max, kept ([smiles, qed, sa])
* ``ta``: n_in, n_out, threshold
* ``stage2``: mode, applied, n_in, n_out, flagged ([smiles, [pattern ids]])
* ``accumulate``: added, n_accumulated
* ``chemical_cycle_end``: affinity_cycle, chemical_cycle, n_done
* ``score``: affinity_cycle, targets, scores (newly scored smiles -> list)
* ``affinity_filter``: affinity_cycle, t_global, t_ind, n_in, passed
* ``thresholds``: affinity_cycle, n_passed, decayed, stop, t_global, t_ind, counter
* ``update``: affinity_cycle, n_updated
* ``affinity_cycle_end``: affinity_cycle
* ``run_end``: reason (cap|patience)

Thresholds are written as decimal strings. Checkpoint paths are relative to
the run directory.
"""

from __future__ import annotations

import functools
import hashlib
import logging
import math
import secrets
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from decimal import Decimal
from multiprocessing import get_context
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

import mtgen
from mtgen.affinity import (
    CsvOracle,
    MockOracle,
    ScoreRecord,
    Target,
    ThresholdState,
    evaluate,
    load_mock_references,
    step,
)
from mtgen.chem import canonical_smiles, read_smiles_file, try_parse
from mtgen.descriptors import compute_properties, qed, sa_score
from mtgen.engine.config import RunConfig
from mtgen.engine.ledger import Event, LedgerError, LedgerWriter, read_ledger
from mtgen.engine.store import DatasetStore
from mtgen.fingerprints import Fingerprint, max_similarity, morgan_fingerprint
from mtgen.metrics import split_generated
from mtgen.smarts import FilterStages, SmartsStage, load_catalogue_file
from mtgen.smarts.catalogue import STAGE1, STAGE2, bundled_catalogues
from mtgen.vae import (
    CheckpointError,
    TrainConfig,
    Vocabulary,
    VaeParams,
    default_dims,
    finetune,
    load_checkpoint,
    sample,
    save_checkpoint,
    train,
)

log = logging.getLogger(__name__)

LEDGER_NAME = "ledger.jsonl"
REPORT_DIR = "reports"
CHECKPOINT_DIR = "checkpoints"


class DataError(RuntimeError):
    """Unusable input data, missing or altered checkpoint, corrupt ledger."""


class Interrupted(RuntimeError):
    """The run stopped at a cycle boundary and can be resumed."""


def derive_seed(master: int, *parts: object) -> int:
    """Independent 63-bit stream seed for one (purpose, cycle indices) tuple."""
    text = "\x1f".join(str(p) for p in (master, *parts))
    return int.from_bytes(hashlib.blake2b(text.encode(), digest_size=8).digest(), "big") >> 1


def new_seed() -> int:
    return secrets.randbits(63)


def sha256_file(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def parallel_map(fn: Callable, items: Sequence, threads: int = 1) -> list:
    """``list(map(fn, items))``, fanned out over worker processes when
    ``threads`` > 1. Results keep input order, so output never depends on
    the worker count."""
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (threads * 4))
    with ProcessPoolExecutor(max_workers=threads, mp_context=get_context("fork")) as pool:
        return list(pool.map(fn, items, chunksize=chunk))


# ---------------------------------------------------------------- filters


@functools.lru_cache(maxsize=8)
def _filter_stages(mode: str, motif_file: str, catalogue_file: str) -> FilterStages:
    cats = bundled_catalogues()
    stage1 = tuple(load_catalogue_file(motif_file)) if motif_file else (cats[STAGE1],)
    stage2 = tuple(load_catalogue_file(catalogue_file)) if catalogue_file else tuple(cats[n] for n in STAGE2)
    return FilterStages(stage1, stage2, SmartsStage(mode))


@dataclass(frozen=True)
class Assessment:
    """Per-molecule filter inputs, computed in a worker."""

    smiles: str
    stage1_hits: tuple[str, ...]
    qed: float | None = None
    sa: float | None = None
    descriptors_pass: bool = False
    fp_bits: int = 0
    stage2_hits: tuple[str, ...] = ()


def assess(smiles: str, *, mode: str, motif_file: str, catalogue_file: str, qed_min: float,
           sa_max: float, qed_weights: str, fp_radius: int, fp_bits: int) -> Assessment:
    """Stage-1 hits, then QED and SA, then the fingerprint and stage-2 hits
    for molecules that get that far."""
    stages = _filter_stages(mode, motif_file, catalogue_file)
    mol = try_parse(smiles)
    s1 = tuple(f"{c}:{p}" for c, p in stages.screen_stage1(mol).matches)
    if s1:
        return Assessment(smiles, s1)
    try:
        props = compute_properties(mol)
    except ValueError:
        return Assessment(smiles, ())
    q = qed(props, qed_weights)
    sa = sa_score(mol)
    if not (q >= qed_min and sa <= sa_max):
        return Assessment(smiles, (), round(q, 6), round(sa, 6))
    fp = morgan_fingerprint(mol, fp_radius, fp_bits).bits
    s2: tuple[str, ...] = ()
    if stages.mode is not SmartsStage.OFF:
        s2 = tuple(f"{c}:{p}" for c, p in stages.screen_stage2(mol).matches)
    return Assessment(smiles, (), round(q, 6), round(sa, 6), True, fp, s2)


def _score_one(smiles: str, *, oracle, targets: tuple[Target, ...]) -> list[float]:
    return [oracle.score(smiles, t) for t in targets]


# ------------------------------------------------------------------ state


@dataclass(frozen=True)
class WeightsRef:
    path: str  # relative to the run directory unless absolute
    sha256: str


@dataclass
class RunState:
    """Everything needed to continue a run; rebuilt by folding ledger events."""

    config: RunConfig | None = None
    seed: int | None = None
    version: str = ""
    general: WeightsRef | None = None
    current: WeightsRef | None = None
    store: DatasetStore | None = None
    scores: dict[str, tuple[float, ...]] = field(default_factory=dict)
    thresholds: ThresholdState | None = None
    affinity_cycle: int = 0
    chemical_cycle: int = 0
    chemical_done: int = 0
    finished: bool = False
    end_reason: str = ""
    ledger_position: int = 0

    @property
    def targets(self) -> tuple[str, ...]:
        return self.config.targets

    def record(self, smiles: str) -> ScoreRecord:
        return ScoreRecord(smiles, tuple(zip(self.targets, self.scores[smiles])))


def _thresholds_from(cfg: RunConfig) -> ThresholdState:
    return ThresholdState.initial(cfg.t_global_start, cfg.t_ind_start, cfg.delta, cfg.n_min, cfg.patience)


def apply_event(state: RunState, name: str, data: dict) -> None:
    """Fold one event into the state. Raises LedgerError on inconsistency."""
    if name == "run_start":
        state.config = RunConfig.from_dict(data["config"])
        state.seed = int(data["seed"])
        state.version = data["version"]
        state.thresholds = _thresholds_from(state.config)
    elif state.config is None:
        raise LedgerError(f"event {name!r} before run_start")
    elif name == "general_weights":
        state.general = WeightsRef(data["path"], data["sha256"])
    elif name == "fixed_set":
        state.store = DatasetStore(tuple(data["smiles"]))
        state.scores.update({k: tuple(v) for k, v in data["scores"].items()})
    elif name == "finetune":
        if state.general is None or data["init_sha256"] != state.general.sha256:
            raise LedgerError("fine-tune lineage does not start from the general weights")
        state.current = WeightsRef(data["path"], data["sha256"])
    elif name == "accumulate":
        state.store.add(data["added"], data["affinity_cycle"], data["chemical_cycle"])
    elif name == "chemical_cycle_end":
        if (data["affinity_cycle"], data["chemical_cycle"]) != (state.affinity_cycle, state.chemical_cycle):
            raise LedgerError("chemical cycle out of order")
        state.chemical_cycle += 1
        state.chemical_done += 1
    elif name == "score":
        state.scores.update({k: tuple(v) for k, v in data["scores"].items()})
    elif name == "affinity_filter":
        state.store.set_updated(data["passed"])
    elif name == "thresholds":
        t = state.thresholds
        state.thresholds = ThresholdState(Decimal(data["t_global"]), Decimal(data["t_ind"]), t.delta,
                                          t.n_min, t.patience, data["counter"], t.cycle + 1)
    elif name == "update":
        state.store.reseed()
    elif name == "affinity_cycle_end":
        if data["affinity_cycle"] != state.affinity_cycle:
            raise LedgerError("affinity cycle out of order")
        state.affinity_cycle += 1
        state.chemical_cycle = 0
    elif name == "run_end":
        state.finished = True
        state.end_reason = data["reason"]
    elif name not in ("generate", "stage1", "descriptors", "ta", "stage2"):
        raise LedgerError(f"unknown event {name!r}")
    state.ledger_position += 1


def replay(events: Sequence[Event]) -> RunState:
    state = RunState()
    for ev in events:
        apply_event(state, ev.event, ev.data)
    return state


# --------------------------------------------------------------- workflow


def _canonical_list(path: str, what: str, vocab: Vocabulary, max_len: int) -> tuple[list[str], int]:
    """Canonical, deduplicated, encodable SMILES from a file, and the skip count."""
    try:
        rows = read_smiles_file(path)
    except OSError as exc:
        raise DataError(f"cannot read {what} {path}: {exc.strerror}") from None
    out, seen, skipped = [], set(), 0
    for smi, _ in rows:
        mol = try_parse(smi)
        if mol is None or mol.is_empty:
            skipped += 1
            continue
        can = canonical_smiles(mol)
        if can in seen:
            continue
        if not _encodable(can, vocab, max_len):
            skipped += 1
            continue
        seen.add(can)
        out.append(can)
    return out, skipped


def _encodable(smiles: str, vocab: Vocabulary, max_len: int) -> bool:
    return vocab.can_encode(smiles) and len(vocab.tokenize(smiles)) + 1 <= max_len


def _bundled(name: str) -> str:
    from importlib import resources
    return str(resources.files("mtgen.data").joinpath(name))


def make_oracle(cfg: RunConfig):
    if cfg.oracle == "csv":
        try:
            return CsvOracle(cfg.oracle_csv)
        except (OSError, ValueError) as exc:
            raise DataError(f"cannot load oracle scores: {exc}") from None
    return MockOracle.bundled(seed=cfg.oracle_seed)


def make_targets(cfg: RunConfig) -> tuple[Target, ...]:
    names = {t.id: t.name for t, _ in load_mock_references()}
    return tuple(Target(t, names.get(t, "")) for t in cfg.targets)


class Workflow:
    """Drives a run directory. Construct with :meth:`start` or :meth:`resume`."""

    def __init__(self, run_dir: Path, writer: LedgerWriter, state: RunState, threads: int = 1):
        self.run_dir = Path(run_dir)
        self.writer = writer
        self.state = state
        self.threads = max(1, int(threads))
        self.vocab = Vocabulary.default()
        self._general: VaeParams | None = None
        self._current: VaeParams | None = None
        self._fps: dict[str, Fingerprint] = {}

    # construction

    @classmethod
    def start(cls, config: RunConfig, run_dir: str | Path, threads: int = 1) -> "Workflow":
        run_dir = Path(run_dir)
        ledger = run_dir / LEDGER_NAME
        if ledger.exists() and ledger.stat().st_size:
            raise DataError(f"{ledger} already exists; resume the run or choose another directory")
        generated = config.seed is None
        if generated:
            config = config.with_seed(new_seed())
        (run_dir / CHECKPOINT_DIR).mkdir(parents=True, exist_ok=True)
        (run_dir / "run.cfg").write_text(config.to_text(), encoding="utf-8")
        wf = cls(run_dir, LedgerWriter(ledger), RunState(), threads)
        wf._emit([("run_start", {"version": mtgen.__version__, "seed": config.seed,
                                 "seed_generated": generated, "config": config.to_dict()})])
        return wf

    @classmethod
    def resume(cls, run_dir: str | Path, threads: int = 1) -> "Workflow":
        run_dir = Path(run_dir)
        ledger = run_dir / LEDGER_NAME
        if not ledger.exists():
            raise DataError(f"no ledger at {ledger}")
        events = read_ledger(ledger)
        if not events:
            raise DataError(f"{ledger} is empty")
        state = replay(events)
        wf = cls(run_dir, LedgerWriter(ledger, events), state, threads)
        wf._verify_checkpoints()
        return wf

    def _resolve(self, path: str) -> Path:
        p = Path(path)
        return p if p.is_absolute() else self.run_dir / p

    def _verify_checkpoints(self) -> None:
        for ref in (self.state.general, self.state.current):
            if ref is None:
                continue
            p = self._resolve(ref.path)
            if not p.exists():
                raise DataError(f"missing checkpoint {p}")
            if sha256_file(p) != ref.sha256:
                raise DataError(f"checkpoint {p} does not match the ledger checksum")

    # plumbing

    @property
    def config(self) -> RunConfig:
        return self.state.config

    def _emit(self, events: list[tuple[str, dict]]) -> None:
        self.writer.append_many(events)
        for ev in self.writer.events[-len(events):]:
            apply_event(self.state, ev.event, ev.data)

    def _load(self, ref: WeightsRef) -> VaeParams:
        try:
            return load_checkpoint(self._resolve(ref.path), expect_vocab=len(self.vocab)).params
        except (OSError, CheckpointError) as exc:
            raise DataError(f"cannot load checkpoint {ref.path}: {exc}") from None

    def general_params(self) -> VaeParams:
        if self._general is None:
            self._general = self._load(self.state.general)
        return self._general

    def current_params(self) -> VaeParams:
        if self._current is None:
            self._current = self._load(self.state.current)
        return self._current

    def _train_config(self, epochs: int, seed: int) -> TrainConfig:
        c = self.config
        return TrainConfig(epochs=epochs, batch_size=c.batch_size, learning_rate=c.learning_rate,
                           momentum=c.momentum, kl_warmup=c.kl_warmup, max_len=c.max_len, seed=seed)

    def _fp(self, smiles: str) -> Fingerprint:
        fp = self._fps.get(smiles)
        if fp is None:
            fp = morgan_fingerprint(try_parse(smiles), self.config.fp_radius, self.config.fp_bits)
            self._fps[smiles] = fp
        return fp

    def _score(self, smiles: Sequence[str]) -> dict[str, list[float]]:
        fn = functools.partial(_score_one, oracle=make_oracle(self.config), targets=make_targets(self.config))
        try:
            values = parallel_map(fn, smiles, self.threads)
        except KeyError as exc:
            raise DataError(f"oracle unavailable: {exc.args[0]}") from None
        for s, v in zip(smiles, values):
            if not all(math.isfinite(x) for x in v):
                raise DataError(f"oracle returned a non-finite score for {s}")
        return dict(zip(smiles, values))

    # setup steps

    def _setup_general(self) -> None:
        c = self.config
        if c.general_weights:
            p = Path(c.general_weights)
            if not p.exists():
                raise DataError(f"general weights {p} not found")
            self._general = load_checkpoint(p, expect_vocab=len(self.vocab)).params
            self._emit([("general_weights", {"path": str(p.resolve()), "sha256": sha256_file(p), "trained": False,
                                             "n_train": 0, "n_skipped": 0, "final_loss": None})])
            return
        corpus, skipped = _canonical_list(c.general_corpus or _bundled("toy_corpus.smi"), "general corpus",
                                          self.vocab, c.max_len)
        if not corpus:
            raise DataError("general corpus has no usable molecules")
        params, loss = train_general(corpus, c, derive_seed(self.state.seed, "general"), self.vocab)
        rel = f"{CHECKPOINT_DIR}/general.mtgw"
        save_checkpoint(params, self.run_dir / rel, seed=self.state.seed)
        self._general = params
        self._emit([("general_weights", {"path": rel, "sha256": sha256_file(self.run_dir / rel), "trained": True,
                                         "n_train": len(corpus), "n_skipped": skipped, "final_loss": loss})])

    def _setup_fixed(self) -> None:
        c = self.config
        fixed, skipped = _canonical_list(c.fixed_set or _bundled("toy_fixed.smi"), "fixed set",
                                         self.vocab, c.max_len)
        if not fixed:
            raise DataError("fixed specific set has no usable molecules")
        if skipped:
            log.warning("fixed set: skipped %d unusable entries", skipped)
        self._emit([("fixed_set", {"smiles": fixed, "scores": self._score(fixed)})])

    def _finetune(self, stage: str, smiles: list[str], a: int, c: int | None) -> tuple[str, dict]:
        cfg = self.config
        seed = derive_seed(self.state.seed, "finetune", stage, a, c)
        res = finetune(self.general_params(), smiles, self.vocab, self._train_config(cfg.finetune_epochs, seed))
        rel = f"{CHECKPOINT_DIR}/{stage}_a{a}" + (f"_c{c}" if c is not None else "") + ".mtgw"
        save_checkpoint(res.params, self.run_dir / rel, seed=self.state.seed)
        self._current = res.params
        loss = round(res.trace[-1].total, 6) if res.trace else None
        return "finetune", {"stage": stage, "affinity_cycle": a, "chemical_cycle": c,
                            "init_sha256": self.state.general.sha256, "n_train": len(smiles),
                            "epochs": cfg.finetune_epochs, "seed": seed, "path": rel,
                            "sha256": sha256_file(self.run_dir / rel), "final_loss": loss}

    # cycles

    def run_chemical_cycle(self) -> None:
        st, cfg = self.state, self.config
        a, c = st.affinity_cycle, st.chemical_cycle
        phase = cfg.phase(a)
        seed = derive_seed(st.seed, "sample", a, c)
        raw = sample(self.current_params(), self.vocab, phase.generation_size, seed, cfg.max_len, cfg.temperature)
        split = split_generated(raw, st.store.cumulative())
        novel = sorted(s for s, _ in split.novel)
        usable = [s for s in novel if _encodable(s, self.vocab, cfg.max_len)]
        stats = split.stats
        events: list[tuple[str, dict]] = [("generate", {
            "affinity_cycle": a, "chemical_cycle": c, "seed": seed,
            "n_gen": stats.n_gen, "n_val": stats.n_val, "n_uni": stats.n_uni, "n_unk": stats.n_unk,
            "n_unencodable": len(novel) - len(usable),
            "validity": _r(stats.validity), "uniqueness": _r(stats.uniqueness), "novelty": _r(stats.novelty)})]

        fn = functools.partial(assess, mode=cfg.smarts_stage.value, motif_file=cfg.motif_file,
                               catalogue_file=cfg.catalogue_file, qed_min=cfg.qed_min, sa_max=cfg.sa_max,
                               qed_weights=cfg.qed_weights, fp_radius=cfg.fp_radius, fp_bits=cfg.fp_bits)
        results = parallel_map(fn, usable, self.threads)

        s1 = [r for r in results if not r.stage1_hits]
        events.append(("stage1", {"n_in": len(results), "n_out": len(s1),
                                  "rejected": [[r.smiles, list(r.stage1_hits)] for r in results if r.stage1_hits]}))
        s2 = [r for r in s1 if r.descriptors_pass]
        events.append(("descriptors", {"n_in": len(s1), "n_out": len(s2), "qed_min": cfg.qed_min,
                                       "sa_max": cfg.sa_max, "kept": [[r.smiles, r.qed, r.sa] for r in s2]}))
        refs = [self._fp(s) for s in st.store.training_set()]
        s3 = []
        for r in s2:
            fp = Fingerprint(r.fp_bits, cfg.fp_bits)
            if max_similarity(fp, refs) < phase.ta_threshold:
                s3.append(r)
                self._fps[r.smiles] = fp
        events.append(("ta", {"n_in": len(s2), "n_out": len(s3), "threshold": phase.ta_threshold}))
        mode = cfg.smarts_stage
        applied = mode is SmartsStage.IN_LOOP
        flagged = [[r.smiles, list(r.stage2_hits)] for r in s3 if r.stage2_hits]
        s4 = [r for r in s3 if not r.stage2_hits] if applied else s3
        events.append(("stage2", {"mode": mode.value, "applied": applied, "n_in": len(s3), "n_out": len(s4),
                                  "flagged": flagged}))
        added = [r.smiles for r in s4]
        if not added:
            log.info("chemical cycle %d.%d: no survivors", a, c)
        events.append(("accumulate", {"affinity_cycle": a, "chemical_cycle": c, "added": added,
                                      "n_accumulated": len(st.store.accumulated) + len(added)}))
        train_set = sorted(set(st.store.training_set()) | set(added))
        events.append(self._finetune("chemical", train_set, a, c))
        events.append(("chemical_cycle_end", {"affinity_cycle": a, "chemical_cycle": c,
                                              "n_done": st.chemical_done + 1}))
        self._emit(events)

    def run_affinity_cycle(self) -> None:
        st, cfg = self.state, self.config
        a = st.affinity_cycle
        acc = sorted(st.store.accumulated)
        pending = [s for s in acc if s not in st.scores]
        new = self._score(pending)
        th = st.thresholds
        scores = {**st.scores, **{k: tuple(v) for k, v in new.items()}}
        passed = [s for s in acc if evaluate(ScoreRecord(s, tuple(zip(cfg.targets, scores[s]))), th)]
        after, decayed, stop = step(th, len(passed))
        ending = stop or a + 1 >= cfg.affinity_cycles
        events: list[tuple[str, dict]] = [
            ("score", {"affinity_cycle": a, "targets": list(cfg.targets), "scores": new}),
            ("affinity_filter", {"affinity_cycle": a, "t_global": str(th.t_global), "t_ind": str(th.t_ind),
                                 "n_in": len(acc), "passed": passed}),
            ("thresholds", {"affinity_cycle": a, "n_passed": len(passed), "decayed": decayed, "stop": stop,
                            "t_global": str(after.t_global), "t_ind": str(after.t_ind), "counter": after.counter}),
            ("update", {"affinity_cycle": a, "n_updated": len(passed)}),
        ]
        if not ending:
            events.append(self._finetune("affinity", sorted(set(st.store.fixed) | set(passed)), a, None))
        events.append(("affinity_cycle_end", {"affinity_cycle": a}))
        if ending:
            events.append(("run_end", {"reason": "patience" if stop else "cap"}))
        self._emit(events)

    def run(self, stop_after: int | None = None) -> RunState:
        """Continue to the end, or raise Interrupted once ``stop_after``
        chemical cycles (counted over the whole run) are complete."""
        st = self.state
        if st.general is None:
            self._setup_general()
        if st.store is None:
            self._setup_fixed()
        if st.finished:
            return st
        if self.config.affinity_cycles == 0:
            self._emit([("run_end", {"reason": "cap"})])
            return st
        if st.current is None:
            self._emit([self._finetune("initial", st.store.training_set(), 0, None)])
        while not st.finished:
            if st.chemical_cycle < self.config.phase(st.affinity_cycle).n_chemical:
                if stop_after is not None and st.chemical_done >= stop_after:
                    raise Interrupted(f"stopped after {st.chemical_done} chemical cycles")
                self.run_chemical_cycle()
            else:
                self.run_affinity_cycle()
        return st


def _r(x: float | None) -> float | None:
    return None if x is None else round(x, 6)


def train_general(corpus: list[str], cfg: RunConfig, seed: int, vocab: Vocabulary) -> tuple[VaeParams, float | None]:
    dims = default_dims(vocab, cfg.hidden, cfg.latent, cfg.fc, cfg.z_every_step)
    init = VaeParams.init(dims, np.random.default_rng(seed))
    tc = TrainConfig(epochs=cfg.general_epochs, batch_size=cfg.batch_size, learning_rate=cfg.learning_rate,
                     momentum=cfg.momentum, kl_warmup=cfg.kl_warmup, max_len=cfg.max_len, seed=seed)
    res = train(init, corpus, vocab, tc)
    return res.params, (round(res.trace[-1].total, 6) if res.trace else None)
