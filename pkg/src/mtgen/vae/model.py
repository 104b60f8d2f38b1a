"""LSTM encoder/decoder VAE: parameters, forward pass, analytic gradients.

Shapes use row-vector convention: activations are (batch, features) and a
weight maps ``x @ W`` from its row dimension to its column dimension.
Gate blocks in the LSTM weights are ordered input, forget, cell, output.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

LOGVAR_CLAMP = 10.0


@dataclass(frozen=True)
class ModelDims:
    vocab: int = 50
    hidden: int = 256
    latent: int = 128
    fc: int = 256
    z_every_step: bool = False

    @property
    def dec_input(self) -> int:
        return self.vocab + (self.latent if self.z_every_step else 0)

    def shapes(self) -> dict[str, tuple[int, int]]:
        d, h, l, f = self.vocab, self.hidden, self.latent, self.fc
        return {
            "enc_Wx": (d, 4 * h), "enc_Wh": (h, 4 * h), "enc_b": (1, 4 * h),
            "W_enc": (h, f), "b_enc": (1, f),
            "W_mu": (f, l), "b_mu": (1, l),
            "W_sigma": (f, l), "b_sigma": (1, l),
            "W_lat": (l, h), "b_lat": (1, h),
            "dec_Wx": (self.dec_input, 4 * h), "dec_Wh": (h, 4 * h), "dec_b": (1, 4 * h),
            "W_out": (h, d), "b_out": (1, d),
        }


class VaeParams:
    """Named weight tensors plus the dimensions they were built for."""

    def __init__(self, dims: ModelDims, tensors: dict[str, np.ndarray]):
        shapes = dims.shapes()
        if set(tensors) != set(shapes):
            missing = sorted(set(shapes) - set(tensors))
            extra = sorted(set(tensors) - set(shapes))
            raise ValueError(f"tensor names do not match dims (missing {missing}, extra {extra})")
        for name, shape in shapes.items():
            if tensors[name].shape != shape:
                raise ValueError(f"{name}: shape {tensors[name].shape}, expected {shape}")
        self.dims = dims
        self.tensors = tensors

    def __getitem__(self, name: str) -> np.ndarray:
        return self.tensors[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self.dims.shapes())

    def copy(self) -> "VaeParams":
        return VaeParams(self.dims, {k: v.copy() for k, v in self.tensors.items()})

    def astype(self, dtype) -> "VaeParams":
        return VaeParams(self.dims, {k: v.astype(dtype) for k, v in self.tensors.items()})

    def all_finite(self) -> bool:
        return all(np.all(np.isfinite(v)) for v in self.tensors.values())

    def equal(self, other: "VaeParams") -> bool:
        """Bitwise equality of every tensor."""
        return self.dims == other.dims and all(
            self[k].dtype == other[k].dtype and self[k].tobytes() == other[k].tobytes() for k in self
        )

    @classmethod
    def zeros(cls, dims: ModelDims, dtype=np.float64) -> "VaeParams":
        return cls(dims, {k: np.zeros(s, dtype=dtype) for k, s in dims.shapes().items()})

    @classmethod
    def init(cls, dims: ModelDims, rng: np.random.Generator, dtype=np.float32) -> "VaeParams":
        """Uniform(+-1/sqrt(fan_in)) weights, zero biases, forget-gate bias 1."""
        out = {}
        for name, shape in dims.shapes().items():
            if shape[0] == 1:
                arr = np.zeros(shape)
                if name in ("enc_b", "dec_b"):
                    h = dims.hidden
                    arr[0, h:2 * h] = 1.0
            else:
                # one-hot inputs: scale input weights like the recurrent ones
                fan_in = dims.hidden if name.endswith("Wx") else shape[0]
                bound = 1.0 / np.sqrt(fan_in)
                arr = rng.uniform(-bound, bound, size=shape)
            out[name] = arr.astype(dtype)
        return cls(dims, out)


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


@dataclass
class Batch:
    """Padded token matrices for one mini-batch.

    ``enc`` holds each sequence followed by EOS; ``dec_in`` starts with BOS;
    ``dec_out`` is ``dec_in`` shifted by one and ends with EOS. Masks are 1 at
    real positions.
    """

    enc: np.ndarray
    enc_mask: np.ndarray
    dec_in: np.ndarray
    dec_out: np.ndarray
    dec_mask: np.ndarray

    @classmethod
    def from_sequences(cls, seqs: list[list[int]], bos: int, eos: int, pad: int) -> "Batch":
        b = len(seqs)
        t = max(len(s) for s in seqs) + 1
        enc = np.full((b, t), pad, dtype=np.int64)
        dec_in = np.full((b, t), pad, dtype=np.int64)
        dec_out = np.full((b, t), pad, dtype=np.int64)
        mask = np.zeros((b, t))
        for r, s in enumerate(seqs):
            n = len(s) + 1
            enc[r, :n] = s + [eos]
            dec_in[r, :n] = [bos] + s
            dec_out[r, :n] = s + [eos]
            mask[r, :n] = 1.0
        return cls(enc, mask, dec_in, dec_out, mask.copy())

    @property
    def size(self) -> int:
        return self.enc.shape[0]


def _lstm_forward(n_steps: int, masks: np.ndarray, h: np.ndarray, c: np.ndarray,
                  wx_of, wh: np.ndarray, b: np.ndarray):
    """Masked LSTM over time. ``wx_of(t)`` returns the input projection at step t."""
    hdim = h.shape[1]
    cache = []
    hs = []
    for t in range(n_steps):
        a = wx_of(t) + h @ wh + b
        i = _sigmoid(a[:, :hdim])
        f = _sigmoid(a[:, hdim:2 * hdim])
        g = np.tanh(a[:, 2 * hdim:3 * hdim])
        o = _sigmoid(a[:, 3 * hdim:])
        c_new = f * c + i * g
        tc = np.tanh(c_new)
        h_new = o * tc
        m = masks[:, t:t + 1]
        cache.append((h, c, i, f, g, o, tc, m))
        h = m * h_new + (1.0 - m) * h
        c = m * c_new + (1.0 - m) * c
        hs.append(h)
    return h, c, hs, cache


def _lstm_backward(cache, dh_seq, dh: np.ndarray, dc: np.ndarray, wh: np.ndarray):
    """Reverse pass. ``dh_seq[t]`` is the loss gradient w.r.t. the step-t output.

    Returns (d pre-activations per step, dWh, db, dh0, dc0).
    """
    dwh = np.zeros_like(wh)
    db = np.zeros((1, wh.shape[1]))
    das = [None] * len(cache)
    for t in range(len(cache) - 1, -1, -1):
        h_prev, c_prev, i, f, g, o, tc, m = cache[t]
        if dh_seq is not None and dh_seq[t] is not None:
            dh = dh + dh_seq[t]
        dh_new = m * dh
        dc_new = m * dc + dh_new * o * (1.0 - tc * tc)
        do = dh_new * tc
        di = dc_new * g
        df = dc_new * c_prev
        dg = dc_new * i
        da = np.concatenate(
            [di * i * (1 - i), df * f * (1 - f), dg * (1 - g * g), do * o * (1 - o)], axis=1)
        das[t] = da
        dwh += h_prev.T @ da
        db += da.sum(axis=0, keepdims=True)
        dh = (1.0 - m) * dh + da @ wh.T
        dc = (1.0 - m) * dc + dc_new * f
    return das, dwh, db, dh, dc


def encode(params: VaeParams, enc: np.ndarray, enc_mask: np.ndarray):
    """Token matrix (batch, time) -> (mu, logvar, cache)."""
    p = params
    bsz = enc.shape[0]
    hdim = p.dims.hidden
    wx = p["enc_Wx"].astype(np.float64)
    h0 = np.zeros((bsz, hdim))
    h_t, _, _, lcache = _lstm_forward(
        enc.shape[1], enc_mask, h0, np.zeros((bsz, hdim)),
        lambda t: wx[enc[:, t]], p["enc_Wh"].astype(np.float64), p["enc_b"].astype(np.float64))
    pre = h_t @ p["W_enc"] + p["b_enc"]
    hp = np.maximum(pre, 0.0)
    mu = hp @ p["W_mu"] + p["b_mu"]
    logvar = hp @ p["W_sigma"] + p["b_sigma"]
    return mu.astype(np.float64), logvar.astype(np.float64), (lcache, h_t, pre, hp)


def clamp_logvar(logvar: np.ndarray) -> np.ndarray:
    return np.clip(logvar, -LOGVAR_CLAMP, LOGVAR_CLAMP)


def reparameterize(mu: np.ndarray, logvar: np.ndarray, eps: np.ndarray) -> np.ndarray:
    """z = mu + exp(logvar / 2) * eps, with logvar clamped to [-10, 10]."""
    mu = np.asarray(mu, dtype=np.float64)
    eps = np.asarray(eps, dtype=np.float64)
    if mu.shape != eps.shape or np.shape(logvar) != mu.shape:
        raise ValueError("mu, logvar and eps must have equal shapes")
    return mu + np.exp(0.5 * clamp_logvar(np.asarray(logvar, dtype=np.float64))) * eps


def kl_divergence(mu: np.ndarray, logvar: np.ndarray) -> float:
    """Sum over all entries of 0.5 * (mu^2 + exp(logvar) - 1 - logvar)."""
    lv = clamp_logvar(np.asarray(logvar, dtype=np.float64))
    mu = np.asarray(mu, dtype=np.float64)
    return float(0.5 * np.sum(mu * mu + np.exp(lv) - 1.0 - lv))


def decoder_init(params: VaeParams, z: np.ndarray):
    pre = z @ params["W_lat"] + params["b_lat"]
    return np.maximum(pre, 0.0).astype(np.float64), pre


def _dec_wx(params: VaeParams, dec_in: np.ndarray, z: np.ndarray):
    wx = params["dec_Wx"].astype(np.float64)
    d = params.dims.vocab
    if params.dims.z_every_step:
        zproj = z @ wx[d:]
        return lambda t: wx[dec_in[:, t]] + zproj
    return lambda t: wx[dec_in[:, t]]


def decode_logits(params: VaeParams, z: np.ndarray, dec_in: np.ndarray, dec_mask: np.ndarray | None = None):
    """Teacher-forced decoder. Returns (logits (batch, time, vocab), cache)."""
    z = np.asarray(z, dtype=np.float64)
    if z.ndim == 1:
        z = z[None, :]
    if dec_mask is None:
        dec_mask = np.ones(dec_in.shape)
    h0, pre0 = decoder_init(params, z)
    c0 = np.zeros_like(h0)
    _, _, hs, lcache = _lstm_forward(
        dec_in.shape[1], dec_mask, h0, c0, _dec_wx(params, dec_in, z),
        params["dec_Wh"].astype(np.float64), params["dec_b"].astype(np.float64))
    hstack = np.stack(hs, axis=1)
    logits = hstack @ params["W_out"] + params["b_out"]
    return logits.astype(np.float64), (lcache, hstack, pre0, z)


def decode_probs(params: VaeParams, z: np.ndarray, dec_in: np.ndarray) -> np.ndarray:
    logits, _ = decode_logits(params, z, dec_in)
    return softmax(logits)


@dataclass
class LossParts:
    total: float
    recon: float
    kl: float


def elbo_loss(params: VaeParams, batch: Batch, eps: np.ndarray, kl_weight: float = 1.0,
              want_grad: bool = True) -> tuple[LossParts, dict[str, np.ndarray] | None]:
    """Negative ELBO summed over the batch, and its gradient per tensor.

    recon is the cross-entropy summed over non-PAD decoder positions; kl is
    the closed-form divergence to N(0, I); total = recon + kl_weight * kl.
    """
    p = params
    mu, logvar, ecache = encode(p, batch.enc, batch.enc_mask)
    lv = clamp_logvar(logvar)
    std = np.exp(0.5 * lv)
    z = mu + std * eps
    logits, dcache = decode_logits(p, z, batch.dec_in, batch.dec_mask)
    probs = softmax(logits)
    bsz, tlen, vocab = probs.shape
    rows = np.arange(bsz)[:, None]
    cols = np.arange(tlen)[None, :]
    picked = probs[rows, cols, batch.dec_out]
    mask = batch.dec_mask
    recon = float(-np.sum(np.log(np.maximum(picked, 1e-300)) * mask))
    kl = kl_divergence(mu, logvar)
    parts = LossParts(recon + kl_weight * kl, recon, kl)
    if not want_grad:
        return parts, None

    grads: dict[str, np.ndarray] = {}
    # output layer
    dlogits = probs.copy()
    dlogits[rows, cols, batch.dec_out] -= 1.0
    dlogits *= mask[:, :, None]
    lcache, hstack, pre0, _ = dcache
    grads["W_out"] = np.einsum("bth,btd->hd", hstack, dlogits)
    grads["b_out"] = dlogits.sum(axis=(0, 1))[None, :]
    dhs = dlogits @ p["W_out"].astype(np.float64).T
    dh_seq = [dhs[:, t] for t in range(tlen)]
    hdim = p.dims.hidden
    das, dwh, db, dh0, _ = _lstm_backward(lcache, dh_seq, np.zeros((bsz, hdim)), np.zeros((bsz, hdim)),
                                          p["dec_Wh"].astype(np.float64))
    grads["dec_Wh"], grads["dec_b"] = dwh, db
    dwx = np.zeros(p["dec_Wx"].shape)
    dz = np.zeros_like(z)
    d = p.dims.vocab
    da_all = np.stack(das, axis=1)  # (b, t, 4h)
    np.add.at(dwx, batch.dec_in.reshape(-1), da_all.reshape(-1, 4 * hdim))
    if p.dims.z_every_step:
        da_sum = da_all.sum(axis=1)
        dwx[d:] = z.T @ da_sum
        dz += da_sum @ p["dec_Wx"][d:].astype(np.float64).T
    grads["dec_Wx"] = dwx
    dpre0 = dh0 * (pre0 > 0)
    grads["W_lat"] = z.T @ dpre0
    grads["b_lat"] = dpre0.sum(axis=0, keepdims=True)
    dz += dpre0 @ p["W_lat"].astype(np.float64).T

    # reparameterization and KL
    inside = (logvar > -LOGVAR_CLAMP) & (logvar < LOGVAR_CLAMP)
    dmu = dz + kl_weight * mu
    dlv = (dz * eps * 0.5 * std + kl_weight * 0.5 * (np.exp(lv) - 1.0)) * inside

    # encoder head
    elcache, h_t, pre, hp = ecache
    grads["W_mu"] = hp.T @ dmu
    grads["b_mu"] = dmu.sum(axis=0, keepdims=True)
    grads["W_sigma"] = hp.T @ dlv
    grads["b_sigma"] = dlv.sum(axis=0, keepdims=True)
    dhp = dmu @ p["W_mu"].astype(np.float64).T + dlv @ p["W_sigma"].astype(np.float64).T
    dpre = dhp * (pre > 0)
    grads["W_enc"] = h_t.T @ dpre
    grads["b_enc"] = dpre.sum(axis=0, keepdims=True)
    dh_t = dpre @ p["W_enc"].astype(np.float64).T
    das, dwh, db, _, _ = _lstm_backward(elcache, None, dh_t, np.zeros_like(dh_t),
                                        p["enc_Wh"].astype(np.float64))
    grads["enc_Wh"], grads["enc_b"] = dwh, db
    dwx = np.zeros(p["enc_Wx"].shape)
    np.add.at(dwx, batch.enc.reshape(-1), np.stack(das, axis=1).reshape(-1, 4 * hdim))
    grads["enc_Wx"] = dwx
    return parts, grads
