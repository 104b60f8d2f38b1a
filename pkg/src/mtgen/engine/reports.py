"""CSV reports derived from the ledger alone.

Live runs and the ``report`` command both call :func:`build_report` on the
event list, so regenerating from a ledger reproduces the files byte for
byte. Floats are written with 6 decimals; undefined values are empty.

Tables:

* ``thresholds.csv``: affinity_cycle, t_global, t_ind, n_in, n_passed, decayed,
  counter, stop, t_global_next, t_ind_next
* ``set_sizes.csv``: step, affinity_cycle, chemical_cycle, point, fixed, accumulated, updated
* ``generation.csv``: per chemical cycle, the generation statistics and the
  number of molecules left after each filter
* ``candidate_counts.csv``: t_global, t_ind, n_candidates, n_stage2_clean
* ``candidates.csv``: t_global, t_ind, smiles, one column per target, global,
  stage2_hits, fingerprint (hex, folded bits as configured)
* ``histograms.csv``: set, affinity_cycle, bin_lower, count
* ``clusters.csv``: affinity_cycle, epsilon, min_pts, n_molecules, n_scaffolds,
  n_acyclic, n_clusters, n_noise (scaffold clusters of each updated set)
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from decimal import Decimal
from pathlib import Path
from typing import Sequence

from mtgen.affinity import ScoreRecord, ThresholdState, evaluate
from mtgen.chem import try_parse
from mtgen.engine.ledger import Event
from mtgen.fingerprints import morgan_fingerprint
from mtgen.metrics import scaffold_cluster_report, score_histogram

TABLES = ("thresholds", "set_sizes", "generation", "candidate_counts", "candidates", "histograms", "clusters")


def _f(x) -> str:
    return "" if x is None else f"{float(x):.6f}"


def _csv(header: Sequence[str], rows: list[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


@dataclass
class RunReport:
    tables: dict[str, str] = field(default_factory=dict)
    candidates: dict[tuple[float, float], list[str]] = field(default_factory=dict)
    finished: bool = False

    def write(self, directory: str | Path) -> list[Path]:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        out = []
        for name in TABLES:
            p = directory / f"{name}.csv"
            p.write_text(self.tables[name], encoding="utf-8", newline="")
            out.append(p)
        return out


def build_report(events: Sequence[Event]) -> RunReport:
    from mtgen.engine.workflow import RunState, apply_event

    state = RunState()
    thr_rows, size_rows, gen_rows, hist_rows = [], [], [], []
    gen: dict = {}
    scores: dict[str, tuple[float, ...]] = {}
    scored_generated: list[str] = []
    stage2_hits: dict[str, list[str]] = {}
    updated_sets: list[list[str]] = []
    fixed_scores: dict[str, list[float]] = {}
    last_filter: dict = {}

    def sizes(point, a, c):
        f, acc, upd = state.store.sizes()
        size_rows.append([len(size_rows), a, c, point, f, acc, upd])

    for ev in events:
        apply_event(state, ev.event, ev.data)
        d = ev.data
        if ev.event == "fixed_set":
            fixed_scores = d["scores"]
            sizes("fixed", "", "")
        elif ev.event == "generate":
            gen = dict(d)
        elif ev.event in ("stage1", "descriptors", "ta", "stage2"):
            gen["after_" + ev.event] = d["n_out"]
            if ev.event == "stage2":
                for smi, hits in d["flagged"]:
                    stage2_hits[smi] = hits
        elif ev.event == "accumulate":
            gen_rows.append([
                gen["affinity_cycle"], gen["chemical_cycle"], gen["n_gen"], gen["n_val"], gen["n_uni"],
                gen["n_unk"], _f(gen["validity"]), _f(gen["uniqueness"]), _f(gen["novelty"]),
                gen["n_unencodable"], gen["after_stage1"], gen["after_descriptors"], gen["after_ta"],
                gen["after_stage2"], len(d["added"]),
            ])
        elif ev.event == "chemical_cycle_end":
            sizes("chemical", d["affinity_cycle"], d["chemical_cycle"])
        elif ev.event == "score":
            for smi, vals in d["scores"].items():
                scores[smi] = tuple(vals)
                scored_generated.append(smi)
        elif ev.event == "affinity_filter":
            last_filter = d
            a = d["affinity_cycle"]
            globals_ = [sum(scores[s]) / len(scores[s]) for s in sorted(state.store.accumulated)]
            for lo, n in score_histogram(globals_, state.config.histogram_bin):
                hist_rows.append(["accumulated", a, _f(lo), n])
            updated_sets.append(list(d["passed"]))
        elif ev.event == "thresholds":
            lf = last_filter
            thr_rows.append([d["affinity_cycle"], _f(Decimal(lf["t_global"])), _f(Decimal(lf["t_ind"])),
                             lf["n_in"], d["n_passed"], int(d["decayed"]), d["counter"], int(d["stop"]),
                             _f(Decimal(d["t_global"])), _f(Decimal(d["t_ind"]))])
        elif ev.event == "update":
            sizes("affinity", d["affinity_cycle"], "")

    report = RunReport(finished=state.finished)
    cfg = state.config
    if cfg is None:
        raise ValueError("ledger has no run_start event")
    targets = list(cfg.targets)

    if fixed_scores:
        fixed_globals = [sum(v) / len(v) for _, v in sorted(fixed_scores.items())]
        hist_rows = [["fixed", "", _f(lo), n] for lo, n in score_histogram(fixed_globals, cfg.histogram_bin)] + hist_rows

    count_rows, cand_rows = [], []
    pool = sorted(set(scored_generated))
    for tg, ti in cfg.report_thresholds:
        th = ThresholdState.initial(tg, ti)
        recs = [ScoreRecord(s, tuple(zip(targets, scores[s]))) for s in pool]
        passing = sorted((r for r in recs if evaluate(r, th)), key=lambda r: (r.global_score, r.key))
        report.candidates[(tg, ti)] = [r.key for r in passing]
        clean = sum(1 for r in passing if r.key not in stage2_hits)
        count_rows.append([_f(tg), _f(ti), len(passing), clean])
        for r in passing:
            fp = morgan_fingerprint(try_parse(r.key), cfg.fp_radius, cfg.fp_bits).to_hex()
            cand_rows.append([_f(tg), _f(ti), r.key, *(_f(v) for _, v in r.scores), _f(r.global_score),
                              ";".join(stage2_hits.get(r.key, [])), fp])

    cluster_rows = []
    if updated_sets:
        rep = scaffold_cluster_report(updated_sets, cfg.cluster_epsilons, cfg.min_pts, cfg.fp_radius, cfg.fp_bits)
        cluster_rows = [[r.cycle, _f(r.epsilon), rep.min_pts, r.n_molecules, r.n_scaffolds, r.n_acyclic,
                         r.n_clusters, r.n_noise] for r in rep.rows]

    t = report.tables
    t["thresholds"] = _csv(["affinity_cycle", "t_global", "t_ind", "n_in", "n_passed", "decayed", "counter",
                            "stop", "t_global_next", "t_ind_next"], thr_rows)
    t["set_sizes"] = _csv(["step", "affinity_cycle", "chemical_cycle", "point", "fixed", "accumulated",
                           "updated"], size_rows)
    t["generation"] = _csv(["affinity_cycle", "chemical_cycle", "n_gen", "n_val", "n_uni", "n_unk", "validity",
                            "uniqueness", "novelty", "n_unencodable", "after_stage1", "after_descriptors",
                            "after_ta", "after_stage2", "added"], gen_rows)
    t["candidate_counts"] = _csv(["t_global", "t_ind", "n_candidates", "n_stage2_clean"], count_rows)
    t["candidates"] = _csv(["t_global", "t_ind", "smiles", *targets, "global", "stage2_hits", "fingerprint"],
                           cand_rows)
    t["histograms"] = _csv(["set", "affinity_cycle", "bin_lower", "count"], hist_rows)
    t["clusters"] = _csv(["affinity_cycle", "epsilon", "min_pts", "n_molecules", "n_scaffolds", "n_acyclic",
                          "n_clusters", "n_noise"], cluster_rows)
    return report
