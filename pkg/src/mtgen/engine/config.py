"""Run configuration: a flat ``key = value`` file.

Lines starting with ``#`` are comments. Unknown keys are rejected. Dataset
paths may be overridden by environment variables (and only those):
``MTGEN_GENERAL_CORPUS``, ``MTGEN_FIXED_SET``, ``MTGEN_GENERAL_WEIGHTS``.
Relative paths resolve against the config file's directory.
"""

from __future__ import annotations

import configparser
import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from mtgen.smarts.catalogue import SmartsStage

ENV_OVERRIDES = {
    "general_corpus": "MTGEN_GENERAL_CORPUS",
    "fixed_set": "MTGEN_FIXED_SET",
    "general_weights": "MTGEN_GENERAL_WEIGHTS",
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Phase:
    """One affinity cycle's worth of chemical cycles."""

    n_chemical: int
    ta_threshold: float
    generation_size: int

    def __post_init__(self):
        if self.n_chemical < 1:
            raise ConfigError("each phase needs at least one chemical cycle")
        if not 0 < self.ta_threshold <= 1:
            raise ConfigError("ta_threshold must be in (0, 1]")
        if self.generation_size < 1:
            raise ConfigError("generation_size must be >= 1")

    def to_text(self) -> str:
        return f"{self.n_chemical}:{self.ta_threshold}:{self.generation_size}"


@dataclass(frozen=True)
class RunConfig:
    """All workflow settings; defaults are full-scale settings.

    ``phases`` lists one entry per affinity cycle; the last entry repeats
    until ``affinity_cycles`` cycles have run or patience stops the run.
    """

    phases: tuple[Phase, ...] = (Phase(40, 0.4, 3500), Phase(10, 0.6, 3500))
    affinity_cycles: int = 20
    generation_size: int = 3500
    ta_threshold: float = 0.4
    qed_min: float = 0.8
    sa_max: float = 3.0
    qed_weights: str = "mean"
    t_global_start: float = -7.5
    t_ind_start: float = -7.0
    delta: float = 0.1
    n_min: int = 50
    patience: int = 3
    smarts_stage: SmartsStage = SmartsStage.IN_LOOP
    seed: int | None = None
    targets: tuple[str, ...] = ("SARS2-7RNW", "SARS1-2GX4", "MERS-7ENE")
    oracle: str = "mock"
    oracle_seed: int = 0
    oracle_csv: str = ""
    general_corpus: str = ""
    fixed_set: str = ""
    general_weights: str = ""
    motif_file: str = ""
    catalogue_file: str = ""
    fp_radius: int = 4
    fp_bits: int = 2048
    hidden: int = 256
    latent: int = 128
    fc: int = 256
    z_every_step: bool = False
    general_epochs: int = 50
    finetune_epochs: int = 10
    batch_size: int = 32
    learning_rate: float = 0.05
    momentum: float = 0.9
    kl_warmup: float = 1.0 / 3.0
    max_len: int = 60
    temperature: float = 1.0
    report_thresholds: tuple[tuple[float, float], ...] = ((-8.0, -8.0), (-7.5, -7.0))
    histogram_bin: float = 0.25
    cluster_epsilons: tuple[float, ...] = (0.2, 0.4, 0.6)
    min_pts: int = 2

    def __post_init__(self):
        if not self.phases:
            raise ConfigError("at least one phase is required")
        if self.affinity_cycles < 0:
            raise ConfigError("affinity_cycles must be >= 0")
        if self.delta < 0:
            raise ConfigError("delta must be >= 0")
        if self.patience < 1 or self.n_min < 0:
            raise ConfigError("patience >= 1 and n_min >= 0 required")
        if not 0 <= self.qed_min <= 1 or not 1 <= self.sa_max <= 10:
            raise ConfigError("qed_min must be in [0, 1] and sa_max in [1, 10]")
        if self.oracle not in ("mock", "csv"):
            raise ConfigError("oracle must be 'mock' or 'csv'")
        if self.oracle == "csv" and not self.oracle_csv:
            raise ConfigError("oracle = csv needs oracle_csv")
        if not self.targets or len(set(self.targets)) != len(self.targets):
            raise ConfigError("targets must be non-empty and unique")
        if self.histogram_bin <= 0 or any(e <= 0 for e in self.cluster_epsilons) or self.min_pts < 1:
            raise ConfigError("histogram_bin, cluster_epsilons must be > 0 and min_pts >= 1")
        if self.qed_weights not in ("mean", "max", "none"):
            raise ConfigError("qed_weights must be mean, max or none")

    def phase(self, affinity_cycle: int) -> Phase:
        return self.phases[min(affinity_cycle, len(self.phases) - 1)]

    def with_seed(self, seed: int) -> "RunConfig":
        return replace(self, seed=seed)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["phases"] = [p.to_text() for p in self.phases]
        out["smarts_stage"] = self.smarts_stage.value
        out["targets"] = list(self.targets)
        out["report_thresholds"] = [list(p) for p in self.report_thresholds]
        out["cluster_epsilons"] = list(self.cluster_epsilons)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        return _build({k: v for k, v in data.items()}, base_dir=None, raw=False)

    def to_text(self) -> str:
        lines = []
        for k, v in self.to_dict().items():
            if k == "phases":
                v = ", ".join(v)
            elif k == "report_thresholds":
                v = ", ".join(f"{g}:{i}" for g, i in v)
            elif isinstance(v, list):
                v = ", ".join(str(x) for x in v)
            elif v is None:
                continue
            lines.append(f"{k} = {v}")
        return "\n".join(lines) + "\n"


_BOOL = {"1": True, "true": True, "yes": True, "on": True, "0": False, "false": False, "no": False, "off": False}


def _split(text: str) -> list[str]:
    return [p.strip() for p in str(text).split(",") if p.strip()]


def _parse_phases(text: str, ta_default: float, g_default: int) -> tuple[Phase, ...]:
    out = []
    for item in _split(text):
        parts = item.split(":")
        if not 1 <= len(parts) <= 3:
            raise ConfigError(f"bad phase {item!r}; expected n[:ta[:generation_size]]")
        try:
            n = int(parts[0])
            ta = float(parts[1]) if len(parts) > 1 else ta_default
            g = int(parts[2]) if len(parts) > 2 else g_default
        except ValueError:
            raise ConfigError(f"bad phase {item!r}") from None
        out.append(Phase(n, ta, g))
    return tuple(out)


def _convert(name: str, value, typ: str):
    if typ in ("int", "int | None"):
        return None if value in (None, "", "none") else int(value)
    if typ == "float":
        return float(value)
    if typ == "bool":
        if isinstance(value, bool):
            return value
        try:
            return _BOOL[str(value).strip().lower()]
        except KeyError:
            raise ConfigError(f"{name}: expected a boolean, got {value!r}") from None
    if typ == "SmartsStage":
        try:
            return SmartsStage(str(value).strip())
        except ValueError:
            raise ConfigError(f"smarts_stage must be in_loop, post_generation or off, got {value!r}") from None
    if typ == "tuple[str, ...]":
        return tuple(value) if isinstance(value, (list, tuple)) else tuple(_split(value))
    if typ == "tuple[float, ...]":
        return tuple(float(x) for x in (value if isinstance(value, (list, tuple)) else _split(value)))
    if typ == "tuple[tuple[float, float], ...]":
        items = value if isinstance(value, (list, tuple)) else [p.split(":") for p in _split(value)]
        try:
            return tuple((float(a), float(b)) for a, b in items)
        except ValueError:
            raise ConfigError(f"{name}: expected global:individual pairs") from None
    return str(value)


def _build(values: dict, base_dir: Path | None, raw: bool = True) -> RunConfig:
    known = {f.name: f for f in fields(RunConfig)}
    unknown = sorted(set(values) - set(known))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    kwargs = {}
    try:
        for name, value in values.items():
            if name == "phases":
                continue
            kwargs[name] = _convert(name, value, str(known[name].type))
        ta = kwargs.get("ta_threshold", RunConfig.ta_threshold)
        g = kwargs.get("generation_size", RunConfig.generation_size)
        if "phases" in values:
            ph = values["phases"]
            kwargs["phases"] = _parse_phases(", ".join(ph) if isinstance(ph, (list, tuple)) else ph, ta, g)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None
    for key, env in ENV_OVERRIDES.items():
        if raw and os.environ.get(env):
            kwargs[key] = os.environ[env]
    if base_dir is not None:
        for key in ("general_corpus", "fixed_set", "general_weights", "oracle_csv",
                    "motif_file", "catalogue_file"):
            v = kwargs.get(key)
            if v and not Path(v).is_absolute():
                kwargs[key] = str((base_dir / v).resolve())
    return RunConfig(**kwargs)


def parse_config_text(text: str, base_dir: Path | None = None) -> RunConfig:
    cp = configparser.ConfigParser(interpolation=None, comment_prefixes=("#",),
                                   inline_comment_prefixes=("#",), strict=True)
    cp.optionxform = str
    try:
        cp.read_string("[run]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config: {exc}") from None
    return _build(dict(cp["run"]), base_dir)


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config_text(text, path.resolve().parent)


DEMO_CONFIG = """\
# Desk-scale demonstration run on the bundled toy data with the mock oracle.
phases = 2:0.6:200, 2:0.7:200
affinity_cycles = 2
qed_min = 0.5
sa_max = 4.0
t_global_start = -5.5
t_ind_start = -5.0
n_min = 5
smarts_stage = in_loop
seed = 7
hidden = 128
latent = 128
fc = 128
general_epochs = 200
finetune_epochs = 5
batch_size = 20
report_thresholds = -6.0:-5.5, -5.5:-5.0
"""
