"""Binary checkpoint format for VAE weights.

Layout, little-endian throughout:

    4s   magic b"MTGW"
    u16  format version (1)
    u16  vocabulary size
    u32  hidden size
    u32  latent size
    u32  fully connected size
    u64  RNG seed of the run that produced the weights
    u32  number of tensors
    per tensor:
        u16  name length, then the UTF-8 name
        u32  rows
        u32  columns
        rows*columns float32 values, row-major

Per-step latent conditioning is implied by the row count of ``dec_Wx``.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from mtgen.vae.model import ModelDims, VaeParams

MAGIC = b"MTGW"
VERSION = 1
_HEADER = struct.Struct("<4sHHIIIQI")


class CheckpointError(ValueError):
    """Bad magic, unsupported version, truncation or shape mismatch."""


@dataclass(frozen=True)
class Checkpoint:
    params: VaeParams
    seed: int


def to_bytes(params: VaeParams, seed: int = 0) -> bytes:
    d = params.dims
    names = list(params)
    parts = [_HEADER.pack(MAGIC, VERSION, d.vocab, d.hidden, d.latent, d.fc, seed, len(names))]
    for name in names:
        arr = params[name]
        as32 = arr.astype("<f4")
        if not np.array_equal(as32.astype(arr.dtype), arr):
            raise CheckpointError(f"{name} holds values not representable as float32")
        raw = name.encode()
        parts.append(struct.pack("<H", len(raw)) + raw + struct.pack("<II", *arr.shape))
        parts.append(np.ascontiguousarray(as32).tobytes())
    return b"".join(parts)


def from_bytes(data: bytes, expect_vocab: int | None = None) -> Checkpoint:
    if len(data) < _HEADER.size:
        raise CheckpointError("truncated header")
    magic, version, vocab, hidden, latent, fc, seed, count = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise CheckpointError(f"bad magic {magic!r}")
    if version != VERSION:
        raise CheckpointError(f"unsupported format version {version}")
    if expect_vocab is not None and vocab != expect_vocab:
        raise CheckpointError(f"checkpoint vocabulary size {vocab}, expected {expect_vocab}")
    pos = _HEADER.size
    tensors: dict[str, np.ndarray] = {}
    for _ in range(count):
        if pos + 2 > len(data):
            raise CheckpointError("truncated tensor header")
        (n,) = struct.unpack_from("<H", data, pos)
        pos += 2
        if pos + n + 8 > len(data):
            raise CheckpointError("truncated tensor header")
        name = data[pos:pos + n].decode()
        pos += n
        rows, cols = struct.unpack_from("<II", data, pos)
        pos += 8
        size = rows * cols * 4
        if pos + size > len(data):
            raise CheckpointError(f"truncated data for {name}")
        tensors[name] = np.frombuffer(data, dtype="<f4", count=rows * cols, offset=pos) \
            .reshape(rows, cols).astype(np.float32)
        pos += size
    if pos != len(data):
        raise CheckpointError(f"{len(data) - pos} trailing bytes")
    dec_rows = tensors.get("dec_Wx", np.zeros((vocab, 0))).shape[0]
    dims = ModelDims(vocab, hidden, latent, fc, z_every_step=dec_rows == vocab + latent)
    try:
        params = VaeParams(dims, tensors)
    except ValueError as exc:
        raise CheckpointError(f"shape mismatch: {exc}") from None
    return Checkpoint(params, seed)


def save_checkpoint(params: VaeParams, path: str | Path, seed: int = 0) -> None:
    """Write atomically: a temporary file renamed over the target."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(to_bytes(params, seed))
    tmp.replace(path)


def load_checkpoint(path: str | Path, expect_vocab: int | None = None) -> Checkpoint:
    return from_bytes(Path(path).read_bytes(), expect_vocab)
