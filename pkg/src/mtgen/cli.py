"""Command-line interface.

Exit codes: 0 success, 1 usage or configuration error, 2 data error,
3 interrupted (the run can be resumed). Errors go to standard error as a
single line ``mtgen:error:<kind>: <message>`` with kind one of usage,
config, data, interrupted.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import mtgen

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERRUPTED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _fail(kind: str, message: str) -> None:
    print(f"mtgen:error:{kind}: {message}", file=sys.stderr)


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _read_smiles(path: str) -> list[str]:
    from mtgen.chem import read_smiles_file
    from mtgen.engine import DataError

    try:
        return [s for s, _ in read_smiles_file(path)]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None


def _targets(text: str | None):
    from mtgen.engine.workflow import make_targets
    from mtgen.engine import RunConfig

    ids = tuple(t.strip() for t in text.split(",") if t.strip()) if text else RunConfig.targets
    return make_targets(RunConfig(targets=ids))


def _oracle(args):
    from mtgen.engine.workflow import make_oracle
    from mtgen.engine import RunConfig

    return make_oracle(RunConfig(oracle=args.oracle, oracle_seed=args.oracle_seed, oracle_csv=args.oracle_csv or ""))


# ---------------------------------------------------------------- commands


def cmd_train_general(args) -> int:
    from mtgen.engine import RunConfig, load_config
    from mtgen.engine.workflow import DataError, _canonical_list, _bundled, derive_seed, new_seed, train_general
    from mtgen.vae import Vocabulary, save_checkpoint
    from dataclasses import replace

    cfg = load_config(args.config) if args.config else RunConfig()
    over = {k: getattr(args, k) for k in ("hidden", "latent", "fc", "batch_size", "max_len")
            if getattr(args, k) is not None}
    if args.epochs is not None:
        over["general_epochs"] = args.epochs
    cfg = replace(cfg, **over)
    seed = args.seed if args.seed is not None else cfg.seed
    if seed is None:
        seed = new_seed()
        print(f"seed={seed}")
    vocab = Vocabulary.default()
    corpus, skipped = _canonical_list(args.corpus or cfg.general_corpus or _bundled("toy_corpus.smi"),
                                      "general corpus", vocab, cfg.max_len)
    if not corpus:
        raise DataError("general corpus has no usable molecules")
    params, loss = train_general(corpus, cfg, derive_seed(seed, "general"), vocab)
    save_checkpoint(params, args.out, seed=seed)
    print(f"trained on {len(corpus)} molecules ({skipped} skipped); final loss {loss}; wrote {args.out}")
    return EXIT_OK


def cmd_build_fixed_set(args) -> int:
    from mtgen.affinity import ScoreCache, build_fixed_set, write_scores_csv
    from mtgen.chem import canonical_smiles, try_parse

    cans = []
    for s in _read_smiles(args.input):
        mol = try_parse(s)
        if mol is not None and not mol.is_empty:
            c = canonical_smiles(mol)
            if c not in cans:
                cans.append(c)
    targets = _targets(args.targets)
    res = build_fixed_set(cans, ScoreCache(_oracle(args), args.oracle_seed), targets, args.threshold)
    Path(args.out).write_text("".join(s + "\n" for s in res.kept), encoding="utf-8")
    if args.scores_out:
        write_scores_csv(args.scores_out, [(r.key, t, v) for r in res.records for t, v in r.scores])
    if res.empty:
        print(f"warning: no molecule scored <= {args.threshold} on every target", file=sys.stderr)
    print(f"kept {len(res.kept)} of {len(cans)}; wrote {args.out}")
    return EXIT_OK


def _run_common(wf, args) -> int:
    from mtgen.engine import REPORT_DIR, Interrupted, build_report

    try:
        wf.run(args.stop_after)
    except (Interrupted, KeyboardInterrupt) as exc:
        _fail("interrupted", f"{exc or 'keyboard interrupt'}; resume with: mtgen resume --run {wf.run_dir}")
        return EXIT_INTERRUPTED
    rep = build_report(wf.writer.events)
    paths = rep.write(wf.run_dir / REPORT_DIR)
    st = wf.state
    print(f"finished ({st.end_reason}) after {st.affinity_cycle} affinity cycles; "
          f"reports in {paths[0].parent}")
    return EXIT_OK


def cmd_run(args) -> int:
    from mtgen.engine import Workflow, load_config
    from mtgen.engine.workflow import new_seed

    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    elif cfg.seed is None:
        cfg = cfg.with_seed(new_seed())
        print(f"seed={cfg.seed}")
    wf = Workflow.start(cfg, args.out, args.threads)
    return _run_common(wf, args)


def cmd_resume(args) -> int:
    from mtgen.engine import Workflow

    return _run_common(Workflow.resume(args.run, args.threads), args)


def cmd_report(args) -> int:
    from mtgen.engine import REPORT_DIR, report_from_ledger

    rep = report_from_ledger(args.run)
    out = Path(args.out) if args.out else Path(args.run) / REPORT_DIR
    rep.write(out)
    print(f"wrote {len(rep.tables)} tables to {out}" + ("" if rep.finished else " (run not finished)"))
    return EXIT_OK


def cmd_filter(args) -> int:
    from mtgen.chem import canonical_smiles, try_parse
    from mtgen.engine.workflow import assess
    from mtgen.fingerprints import Fingerprint, max_similarity, morgan_fingerprint

    refs = []
    if args.ta_ref:
        for s in _read_smiles(args.ta_ref):
            m = try_parse(s)
            if m is not None and not m.is_empty:
                refs.append(morgan_fingerprint(m, 4, 2048))
    cols = ["smiles", "canonical", "valid", "stage1", "qed", "sa", "descriptors", "ta", "stage2", "keep"]
    print("\t".join(cols))
    for smi in _read_smiles(args.input):
        mol = try_parse(smi)
        if mol is None or mol.is_empty:
            if args.all:
                print("\t".join([smi, "", "0", "", "", "", "", "", "", "0"]))
            continue
        can = canonical_smiles(mol)
        r = assess(can, mode=args.smarts_stage, motif_file=args.motif_file or "",
                   catalogue_file=args.catalogue_file or "", qed_min=args.qed_min, sa_max=args.sa_max,
                   qed_weights="mean", fp_radius=4, fp_bits=2048)
        s1 = "pass" if not r.stage1_hits else ";".join(r.stage1_hits)
        desc = "pass" if r.descriptors_pass else ("fail" if r.qed is not None else "error")
        ta = ""
        if r.descriptors_pass and refs:
            ta = "pass" if max_similarity(Fingerprint(r.fp_bits, 2048), refs) < args.ta_threshold else "fail"
        s2 = ""
        if r.descriptors_pass and args.smarts_stage != "off":
            s2 = "pass" if not r.stage2_hits else ";".join(r.stage2_hits)
        keep = (not r.stage1_hits and r.descriptors_pass and ta != "fail"
                and (args.smarts_stage != "in_loop" or not r.stage2_hits))
        if keep or args.all:
            q = "" if r.qed is None else f"{r.qed:.6f}"
            sa = "" if r.sa is None else f"{r.sa:.6f}"
            print("\t".join([smi, can, "1", s1, q, sa, desc, ta, s2, "1" if keep else "0"]))
    return EXIT_OK


def cmd_score(args) -> int:
    import functools

    from mtgen.affinity import write_scores_csv
    from mtgen.chem import canonical_smiles, try_parse
    from mtgen.engine import DataError, parallel_map
    from mtgen.engine.workflow import _score_one

    cans = []
    for s in _read_smiles(args.input):
        mol = try_parse(s)
        if mol is None or mol.is_empty:
            raise DataError(f"cannot parse {s!r}")
        cans.append(canonical_smiles(mol))
    cans = sorted(set(cans))
    targets = _targets(args.targets)
    try:
        vals = parallel_map(functools.partial(_score_one, oracle=_oracle(args), targets=targets), cans, args.threads)
    except KeyError as exc:
        raise DataError(str(exc.args[0])) from None
    rows = [(s, t.id, v) for s, vs in zip(cans, vals) for t, v in zip(targets, vs)]
    if args.out:
        write_scores_csv(args.out, rows)
    else:
        import csv
        from mtgen.affinity.oracle import CSV_HEADER
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(CSV_HEADER)
        w.writerows((s, t, f"{v:.6f}") for s, t, v in rows)
    return EXIT_OK


def cmd_stats(args) -> int:
    from mtgen.chem import canonical_smiles, try_parse
    from mtgen.metrics import generation_stats

    known = set()
    if args.known:
        for s in _read_smiles(args.known):
            m = try_parse(s)
            if m is not None and not m.is_empty:
                known.add(canonical_smiles(m))
    st = generation_stats(_read_smiles(args.generated), known)
    fmt = lambda x: "" if x is None else f"{x:.6f}"
    print("n_gen\tn_val\tn_uni\tn_unk\tvalidity\tuniqueness\tnovelty")
    print(f"{st.n_gen}\t{st.n_val}\t{st.n_uni}\t{st.n_unk}\t{fmt(st.validity)}\t{fmt(st.uniqueness)}\t{fmt(st.novelty)}")
    return EXIT_OK


# ------------------------------------------------------------------ parser


def _oracle_flags(p):
    p.add_argument("--targets", help="comma-separated target ids (default: the three bundled targets)")
    p.add_argument("--oracle", choices=("mock", "csv"), default="mock")
    p.add_argument("--oracle-seed", type=int, default=0)
    p.add_argument("--oracle-csv", help="score file for --oracle csv")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mtgen", description="Multi-target molecular generation with two-level active learning.")
    p.add_argument("--version", action="version", version=f"mtgen {mtgen.__version__}")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    t = sub.add_parser("train-general", help="train the general VAE weights")
    t.add_argument("--out", required=True, help="checkpoint path to write")
    t.add_argument("--corpus", help="SMILES file (default: bundled toy corpus)")
    t.add_argument("--config", help="take model and training settings from a run config")
    t.add_argument("--epochs", type=_positive)
    t.add_argument("--hidden", type=_positive)
    t.add_argument("--latent", type=_positive)
    t.add_argument("--fc", type=_positive)
    t.add_argument("--batch-size", type=_positive)
    t.add_argument("--max-len", type=_positive)
    t.add_argument("--seed", type=int)
    t.set_defaults(func=cmd_train_general)

    b = sub.add_parser("build-fixed-set", help="keep molecules that score below a threshold on every target")
    b.add_argument("--in", dest="input", required=True)
    b.add_argument("--out", required=True)
    b.add_argument("--threshold", type=float, default=-7.5)
    b.add_argument("--scores-out", help="also write all scores as CSV")
    _oracle_flags(b)
    b.set_defaults(func=cmd_build_fixed_set)

    r = sub.add_parser("run", help="start a workflow run")
    r.add_argument("--config", required=True)
    r.add_argument("--out", required=True, help="run directory")
    r.add_argument("--seed", type=int, help="master seed (overrides the config)")
    r.add_argument("--threads", type=_positive, default=1, help="worker processes")
    r.add_argument("--stop-after", type=int, help="stop after this many chemical cycles (resumable)")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("resume", help="continue a run from its ledger")
    s.add_argument("--run", required=True)
    s.add_argument("--threads", type=_positive, default=1)
    s.add_argument("--stop-after", type=int)
    s.set_defaults(func=cmd_resume)

    rp = sub.add_parser("report", help="regenerate the CSV reports from a ledger")
    rp.add_argument("--run", required=True)
    rp.add_argument("--out", help="output directory (default: RUN/reports)")
    rp.set_defaults(func=cmd_report)

    f = sub.add_parser("filter", help="apply the chemical filters to a SMILES file")
    f.add_argument("--in", dest="input", required=True)
    f.add_argument("--qed-min", type=float, default=0.8)
    f.add_argument("--sa-max", type=float, default=3.0)
    f.add_argument("--smarts-stage", choices=("in_loop", "post_generation", "off"), default="in_loop")
    f.add_argument("--motif-file")
    f.add_argument("--catalogue-file")
    f.add_argument("--ta-ref", help="reference SMILES for the similarity filter")
    f.add_argument("--ta-threshold", type=float, default=0.4)
    f.add_argument("--all", action="store_true", help="print rejected molecules too")
    f.set_defaults(func=cmd_filter)

    sc = sub.add_parser("score", help="score molecules with the affinity oracle")
    sc.add_argument("--in", dest="input", required=True)
    sc.add_argument("--out")
    sc.add_argument("--threads", type=_positive, default=1)
    _oracle_flags(sc)
    sc.set_defaults(func=cmd_score)

    st = sub.add_parser("stats", help="validity, uniqueness and novelty of generated SMILES")
    st.add_argument("--generated", required=True)
    st.add_argument("--known", help="SMILES already in the specific set")
    st.set_defaults(func=cmd_stats)
    return p


def main(argv: list[str] | None = None) -> int:
    from mtgen.engine import ConfigError, DataError, LedgerError
    from mtgen.vae import CheckpointError

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        _fail("usage", str(exc))
        return EXIT_USAGE
    except SystemExit as exc:  # --help, --version
        return int(exc.code or 0)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "stop_after", None) is not None and args.stop_after < 0:
        _fail("usage", "--stop-after must be >= 0")
        return EXIT_USAGE
    try:
        return args.func(args)
    except ConfigError as exc:
        _fail("config", str(exc))
        return EXIT_USAGE
    except (DataError, LedgerError, CheckpointError, ValueError, OSError) as exc:
        _fail("data", str(exc))
        return EXIT_DATA
    except KeyboardInterrupt:
        _fail("interrupted", "keyboard interrupt")
        return EXIT_INTERRUPTED


if __name__ == "__main__":
    sys.exit(main())
