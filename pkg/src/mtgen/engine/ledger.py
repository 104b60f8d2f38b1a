"""Append-only JSON-lines event ledger with a rolling checksum.

Each line is a JSON object::

    {"seq": n, "event": name, "data": {...}, "sum": hex}

where ``sum`` is the SHA-256 of the previous line's ``sum`` (64 zeros for
the first line) followed by the canonical JSON of ``[seq, event, data]``.
Editing, dropping or reordering any line breaks every later checksum.
Keys are sorted and floats written by ``json`` itself, so equal event
streams give byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

GENESIS = "0" * 64


class LedgerError(ValueError):
    """Malformed or tampered ledger."""


@dataclass(frozen=True)
class Event:
    seq: int
    event: str
    data: dict
    checksum: str


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True, allow_nan=False)


def chain(prev: str, seq: int, event: str, data: dict) -> str:
    return hashlib.sha256((prev + _canonical([seq, event, data])).encode()).hexdigest()


def format_line(seq: int, event: str, data: dict, prev: str) -> tuple[str, str]:
    s = chain(prev, seq, event, data)
    return _canonical({"seq": seq, "event": event, "data": data, "sum": s}) + "\n", s


def parse_lines(lines: Iterable[str], source: str = "<ledger>") -> list[Event]:
    events: list[Event] = []
    prev = GENESIS
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            raise LedgerError(f"{source}:{lineno}: blank line")
        try:
            obj = json.loads(line)
            seq, name, data, s = obj["seq"], obj["event"], obj["data"], obj["sum"]
        except (ValueError, KeyError, TypeError):
            raise LedgerError(f"{source}:{lineno}: not a ledger record") from None
        if set(obj) != {"seq", "event", "data", "sum"} or seq != lineno - 1:
            raise LedgerError(f"{source}:{lineno}: unexpected fields or sequence number")
        if chain(prev, seq, name, data) != s:
            raise LedgerError(f"{source}:{lineno}: checksum mismatch")
        events.append(Event(seq, name, data, s))
        prev = s
    return events


def read_ledger(path: str | Path) -> list[Event]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise LedgerError(f"cannot read ledger {path}: {exc.strerror}") from None
    if text and not text.endswith("\n"):
        raise LedgerError(f"{path}: last line is incomplete")
    return parse_lines(text.splitlines(), str(path))


class LedgerWriter:
    """Single writer. ``append_many`` writes a group of events in one call so
    an interruption leaves either all or none of a cycle's events on disk."""

    def __init__(self, path: str | Path, events: list[Event] | None = None):
        self.path = Path(path)
        self.events: list[Event] = list(events or [])
        self._prev = self.events[-1].checksum if self.events else GENESIS

    @classmethod
    def open(cls, path: str | Path) -> "LedgerWriter":
        path = Path(path)
        return cls(path, read_ledger(path) if path.exists() else [])

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self) -> Iterator[Event]:
        return iter(self.events)

    def append_many(self, items: Iterable[tuple[str, dict]]) -> None:
        lines, new = [], []
        prev = self._prev
        seq = len(self.events)
        for name, data in items:
            data = json.loads(_canonical(data))  # normalise tuples and key order
            line, prev = format_line(seq, name, data, prev)
            lines.append(line)
            new.append(Event(seq, name, data, prev))
            seq += 1
        if not lines:
            return
        with open(self.path, "a", encoding="utf-8", newline="\n") as fh:
            fh.write("".join(lines))
            fh.flush()
            os.fsync(fh.fileno())
        self.events.extend(new)
        self._prev = prev

    def append(self, name: str, data: dict) -> None:
        self.append_many([(name, data)])
