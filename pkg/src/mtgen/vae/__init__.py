"""Seq2Seq SMILES variational autoencoder in numpy."""

from mtgen.vae.checkpoint import (
    Checkpoint,
    CheckpointError,
    from_bytes,
    load_checkpoint,
    save_checkpoint,
    to_bytes,
)
from mtgen.vae.model import (
    Batch,
    LossParts,
    ModelDims,
    VaeParams,
    decode_logits,
    decode_probs,
    elbo_loss,
    encode,
    kl_divergence,
    reparameterize,
    softmax,
)
from mtgen.vae.training import (
    EpochLoss,
    TrainConfig,
    TrainingError,
    TrainResult,
    default_dims,
    encode_tokens,
    evaluate_loss,
    finetune,
    sample,
    tokenize_dataset,
    train,
)
from mtgen.vae.vocab import BOS, EOS, PAD, VOCAB_SIZE, Vocabulary

__all__ = [
    "BOS", "EOS", "PAD", "VOCAB_SIZE",
    "Batch", "Checkpoint", "CheckpointError", "EpochLoss", "LossParts", "ModelDims",
    "TrainConfig", "TrainResult", "TrainingError", "VaeParams", "Vocabulary",
    "decode_logits", "decode_probs", "default_dims", "elbo_loss", "encode", "encode_tokens",
    "evaluate_loss", "finetune", "from_bytes", "kl_divergence", "load_checkpoint",
    "reparameterize", "sample", "save_checkpoint", "softmax", "to_bytes",
    "tokenize_dataset", "train",
]
