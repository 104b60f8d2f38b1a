"""Training, fine-tuning and sampling for the SMILES VAE."""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Sequence

import numpy as np

from mtgen.vae import model
from mtgen.vae.model import Batch, LossParts, ModelDims, VaeParams, elbo_loss, softmax
from mtgen.vae.vocab import Vocabulary

log = logging.getLogger(__name__)


class TrainingError(RuntimeError):
    """Raised when the loss stops being finite."""


@dataclass(frozen=True)
class TrainConfig:
    """Optimisation settings. ``kl_warmup`` is the fraction of epochs over
    which the KL weight ramps linearly from 0 to ``kl_weight``; 0 disables
    the ramp."""

    epochs: int = 50
    batch_size: int = 32
    learning_rate: float = 0.05
    momentum: float = 0.9
    clip_norm: float = 5.0
    kl_weight: float = 1.0
    kl_warmup: float = 1.0 / 3.0
    max_len: int = 60
    seed: int = 0
    teacher_forcing: bool = True

    def __post_init__(self):
        if self.epochs < 0 or self.batch_size < 1 or self.max_len < 1:
            raise ValueError("epochs >= 0, batch_size >= 1 and max_len >= 1 required")
        if not self.learning_rate > 0 or not 0 <= self.momentum < 1:
            raise ValueError("learning_rate > 0 and 0 <= momentum < 1 required")
        if self.kl_weight < 0 or not 0 <= self.kl_warmup <= 1:
            raise ValueError("kl_weight >= 0 and kl_warmup in [0, 1] required")
        if not self.teacher_forcing:
            raise ValueError("only teacher-forced training is implemented")

    def kl_at(self, epoch: int) -> float:
        span = self.kl_warmup * self.epochs
        if span <= 0:
            return self.kl_weight
        return self.kl_weight * min(1.0, epoch / span)

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class EpochLoss:
    """Per-molecule means over one epoch."""

    epoch: int
    total: float
    recon: float
    kl: float
    kl_weight: float


@dataclass
class TrainResult:
    params: VaeParams
    trace: list[EpochLoss] = field(default_factory=list)


def tokenize_dataset(smiles: Sequence[str], vocab: Vocabulary, max_len: int) -> list[list[int]]:
    """Token index lists; raises ValueError for unknown symbols or overlong strings."""
    out = []
    for s in smiles:
        seq = vocab.encode(s)
        if len(seq) + 1 > max_len:
            raise ValueError(f"{s!r} has {len(seq)} tokens; max_len {max_len} leaves room for {max_len - 1}")
        out.append(seq)
    return out


def encode_tokens(params: VaeParams, tokens: Sequence[int], vocab: Vocabulary) -> tuple[np.ndarray, np.ndarray]:
    """(mu, logvar) for one token sequence (EOS is appended)."""
    for t in tokens:
        if not 0 <= t < params.dims.vocab:
            raise ValueError(f"token index {t} outside vocabulary of {params.dims.vocab}")
    b = Batch.from_sequences([list(tokens)], vocab.bos, vocab.eos, vocab.pad)
    mu, logvar, _ = model.encode(params, b.enc, b.enc_mask)
    return mu[0], logvar[0]


def _check_vocab(params: VaeParams, vocab: Vocabulary) -> None:
    if params.dims.vocab != len(vocab):
        raise ValueError(f"model vocabulary size {params.dims.vocab} != {len(vocab)}")


def _round32(grad_step: np.ndarray, current: np.ndarray) -> np.ndarray:
    return (current.astype(np.float64) - grad_step).astype(np.float32)


def evaluate_loss(params: VaeParams, seqs: list[list[int]], vocab: Vocabulary, seed: int = 0,
                  kl_weight: float = 1.0, batch_size: int = 64) -> LossParts:
    """Per-molecule mean loss with fixed noise, no parameter update."""
    rng = np.random.default_rng(seed)
    tot = rec = kl = 0.0
    for start in range(0, len(seqs), batch_size):
        chunk = seqs[start:start + batch_size]
        b = Batch.from_sequences(chunk, vocab.bos, vocab.eos, vocab.pad)
        eps = rng.standard_normal((b.size, params.dims.latent))
        parts, _ = elbo_loss(params, b, eps, kl_weight, want_grad=False)
        tot += parts.total
        rec += parts.recon
        kl += parts.kl
    n = max(1, len(seqs))
    return LossParts(tot / n, rec / n, kl / n)


def train(params_init: VaeParams, smiles: Sequence[str], vocab: Vocabulary,
          config: TrainConfig) -> TrainResult:
    """Mini-batch SGD with momentum on the negative ELBO.

    Shuffling and reparameterisation noise come from one generator seeded
    with ``config.seed``, so equal inputs give bit-identical results.
    Parameters are kept at float32 precision between steps.
    """
    if not smiles:
        raise ValueError("training set is empty")
    _check_vocab(params_init, vocab)
    seqs = tokenize_dataset(smiles, vocab, config.max_len)
    params = params_init.astype(np.float32)
    velocity = {k: np.zeros(params[k].shape) for k in params}
    rng = np.random.default_rng(config.seed)
    trace: list[EpochLoss] = []
    n = len(seqs)
    for epoch in range(config.epochs):
        beta = config.kl_at(epoch)
        order = rng.permutation(n)
        tot = rec = kl = 0.0
        for start in range(0, n, config.batch_size):
            idx = order[start:start + config.batch_size]
            b = Batch.from_sequences([seqs[i] for i in idx], vocab.bos, vocab.eos, vocab.pad)
            eps = rng.standard_normal((b.size, params.dims.latent))
            parts, grads = elbo_loss(params, b, eps, beta)
            if not math.isfinite(parts.total):
                raise TrainingError(
                    f"non-finite loss at epoch {epoch}, batch {start // config.batch_size}: "
                    f"recon={parts.recon} kl={parts.kl}")
            tot += parts.total
            rec += parts.recon
            kl += parts.kl
            scale = 1.0 / b.size
            norm = math.sqrt(sum(float(np.sum(g * g)) for g in grads.values())) * scale
            if config.clip_norm and norm > config.clip_norm:
                scale *= config.clip_norm / norm
            for k in params:
                v = velocity[k]
                v *= config.momentum
                v += grads[k] * scale
                params.tensors[k] = _round32(config.learning_rate * v, params[k])
        trace.append(EpochLoss(epoch, tot / n, rec / n, kl / n, beta))
        log.debug("epoch %d total %.4f recon %.4f kl %.4f", epoch, tot / n, rec / n, kl / n)
    if not params.all_finite():
        raise TrainingError("parameters became non-finite")
    return TrainResult(params, trace)


def finetune(general: VaeParams, smiles: Sequence[str], vocab: Vocabulary,
             config: TrainConfig) -> TrainResult:
    """Train starting from a copy of the general weights (never in place)."""
    _check_vocab(general, vocab)
    return train(general.copy(), smiles, vocab, config)


def sample(params: VaeParams, vocab: Vocabulary, n: int, seed: int, max_len: int = 60,
           temperature: float = 1.0, z: np.ndarray | None = None) -> list[str]:
    """Decode ``n`` strings from z ~ N(0, I).

    Each string stops at EOS or after ``max_len`` tokens. ``temperature`` 0
    means greedy argmax decoding.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_vocab(params, vocab)
    rng = np.random.default_rng(seed)
    dims = params.dims
    if z is None:
        z = rng.standard_normal((n, dims.latent))
    z = np.atleast_2d(np.asarray(z, dtype=np.float64))
    h, _ = model.decoder_init(params, z)
    c = np.zeros_like(h)
    wx = params["dec_Wx"].astype(np.float64)
    wh = params["dec_Wh"].astype(np.float64)
    bias = params["dec_b"].astype(np.float64)
    zproj = z @ wx[dims.vocab:] if dims.z_every_step else 0.0
    hd = dims.hidden
    prev = np.full(n, vocab.bos)
    out = np.full((n, max_len), vocab.pad)
    done = np.zeros(n, dtype=bool)
    for t in range(max_len):
        a = wx[prev] + zproj + h @ wh + bias
        i = model._sigmoid(a[:, :hd])
        f = model._sigmoid(a[:, hd:2 * hd])
        g = np.tanh(a[:, 2 * hd:3 * hd])
        o = model._sigmoid(a[:, 3 * hd:])
        c = f * c + i * g
        h = o * np.tanh(c)
        logits = h @ params["W_out"] + params["b_out"]
        if temperature <= 0:
            tok = logits.argmax(axis=1)
        else:
            probs = softmax(logits / temperature)
            u = rng.random(n)
            tok = np.minimum((probs.cumsum(axis=1) < u[:, None]).sum(axis=1), dims.vocab - 1)
        tok = np.where(done, vocab.pad, tok)
        out[:, t] = tok
        done |= tok == vocab.eos
        prev = tok
        if done.all():
            break
    return [vocab.decode(row) for row in out]


def default_dims(vocab: Vocabulary, hidden: int = 256, latent: int = 128, fc: int = 256,
                 z_every_step: bool = False) -> ModelDims:
    return ModelDims(len(vocab), hidden, latent, fc, z_every_step)


def with_epochs(config: TrainConfig, epochs: int) -> TrainConfig:
    return replace(config, epochs=epochs)
