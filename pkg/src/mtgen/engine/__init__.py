"""Active-learning workflow engine: configuration, ledger, dataset store, cycles, reports."""

from pathlib import Path

from mtgen.engine.config import DEMO_CONFIG, ConfigError, Phase, RunConfig, load_config, parse_config_text
from mtgen.engine.ledger import Event, LedgerError, LedgerWriter, read_ledger
from mtgen.engine.reports import TABLES, RunReport, build_report
from mtgen.engine.store import DatasetStore, Provenance
from mtgen.engine.workflow import (
    LEDGER_NAME,
    REPORT_DIR,
    DataError,
    Interrupted,
    RunState,
    Workflow,
    apply_event,
    derive_seed,
    parallel_map,
    replay,
)


def run_workflow(config: RunConfig, run_dir: str | Path, threads: int = 1,
                 stop_after: int | None = None) -> RunReport:
    """Start a run and write its reports. Raises Interrupted at ``stop_after``."""
    wf = Workflow.start(config, run_dir, threads)
    return _finish(wf, stop_after)


def resume(run_dir: str | Path) -> RunState:
    """The state at the last completed cycle boundary, checkpoints verified."""
    return Workflow.resume(run_dir).state


def resume_workflow(run_dir: str | Path, threads: int = 1, stop_after: int | None = None) -> RunReport:
    return _finish(Workflow.resume(run_dir, threads), stop_after)


def report_from_ledger(run_dir: str | Path) -> RunReport:
    return build_report(read_ledger(Path(run_dir) / LEDGER_NAME))


def _finish(wf: Workflow, stop_after: int | None) -> RunReport:
    wf.run(stop_after)
    rep = build_report(wf.writer.events)
    rep.write(wf.run_dir / REPORT_DIR)
    return rep


__all__ = [
    "DEMO_CONFIG",
    "ConfigError",
    "DataError",
    "DatasetStore",
    "Event",
    "Interrupted",
    "LEDGER_NAME",
    "LedgerError",
    "LedgerWriter",
    "Phase",
    "Provenance",
    "REPORT_DIR",
    "RunConfig",
    "RunReport",
    "RunState",
    "TABLES",
    "Workflow",
    "apply_event",
    "build_report",
    "derive_seed",
    "load_config",
    "parallel_map",
    "parse_config_text",
    "read_ledger",
    "replay",
    "report_from_ledger",
    "resume",
    "resume_workflow",
    "run_workflow",
]
