"""Fixed 50-entry SMILES vocabulary and tokenizer."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

PAD, BOS, EOS = "<pad>", "<bos>", "<eos>"
VOCAB_SIZE = 50

_SYMBOLS = (
    "C", "c", "N", "n", "O", "o", "S", "s", "P", "p", "F", "Cl", "Br", "I", "B", "b", "H",
    "Si", "Se", "se",
    "(", ")", "[", "]", "=", "#", "+", "-", ".", "/", "\\", "@", ":", "*", "%",
    "0", "1", "2", "3", "4", "5", "6", "7", "8", "9",
)
_RESERVED = tuple(f"<r{i}>" for i in range(VOCAB_SIZE - 3 - len(_SYMBOLS)))
DEFAULT_TOKENS = (PAD, BOS, EOS) + _SYMBOLS + _RESERVED

_TOKEN_RE = re.compile(r"Cl|Br|Si|Se|se|.", re.DOTALL)


@dataclass(frozen=True)
class Vocabulary:
    """Ordered token list with index maps; PAD is index 0."""

    tokens: tuple[str, ...]
    index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(set(self.tokens)) != len(self.tokens):
            raise ValueError("duplicate tokens")
        for special in (PAD, BOS, EOS):
            if special not in self.tokens:
                raise ValueError(f"missing special token {special}")
        object.__setattr__(self, "index", {t: i for i, t in enumerate(self.tokens)})

    @classmethod
    def default(cls) -> "Vocabulary":
        return cls(DEFAULT_TOKENS)

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def pad(self) -> int:
        return self.index[PAD]

    @property
    def bos(self) -> int:
        return self.index[BOS]

    @property
    def eos(self) -> int:
        return self.index[EOS]

    @staticmethod
    def tokenize(smiles: str) -> list[str]:
        return _TOKEN_RE.findall(smiles)

    def encode(self, smiles: str) -> list[int]:
        """Token indices without BOS/EOS. Raises ValueError on unknown symbols."""
        out = []
        for tok in self.tokenize(smiles):
            idx = self.index.get(tok)
            if idx is None or tok.startswith("<"):
                raise ValueError(f"token {tok!r} not in vocabulary")
            out.append(idx)
        return out

    def decode(self, indices: Sequence[int]) -> str:
        """Join tokens, stopping at EOS and skipping PAD/BOS."""
        parts = []
        for i in indices:
            if i == self.eos:
                break
            if i in (self.pad, self.bos):
                continue
            parts.append(self.tokens[i])
        return "".join(parts)

    def can_encode(self, smiles: str) -> bool:
        try:
            self.encode(smiles)
        except ValueError:
            return False
        return True
