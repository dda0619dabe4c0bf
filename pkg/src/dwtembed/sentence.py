"""Fixed-size sentence vectors from a wavelet-packet + DCT pipeline.

For a sentence of ``N`` word vectors stacked into an ``N x d`` matrix:

1. every row is replaced by the concatenation of its ``2**L`` depth-``L``
   packet subbands (canonical A-before-D order); ``L = 0`` skips this step;
2. for ``K = 2`` every other column of each subband block is dropped,
   keeping columns 0, 2, 4, ... of the block;
3. each column is DCT-II transformed;
4. coefficient rows ``c[0] .. c[K-1]`` are concatenated, all of ``c[0]``
   first. Sentences shorter than ``K`` get zero rows for the missing
   coefficients.

The output length depends only on ``d``, ``L`` and ``K`` (see
:func:`sentence_dim`); it equals ``d`` whenever ``2**(L + K - 1)`` divides
``d``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .compress import average_words
from .dct import dct_columns
from .embeddings import EmbeddingTable
from .wavelet import make_filter, packet_level, subband_length

__all__ = [
    "EmptySentenceError",
    "SentenceEncoderConfig",
    "encode",
    "encode_avg",
    "encode_tokens",
    "lookup_tokens",
    "rowwise_packet",
    "sentence_dim",
]

OOV_POLICIES = ("skip", "zero")
EMPTY_POLICIES = ("zero", "error")


class EmptySentenceError(ValueError):
    """No word vectors left to encode."""


@dataclass(frozen=True)
class SentenceEncoderConfig:
    filter: str = "coif2"
    level: int = 1
    k: int = 1
    lowercase: bool = False
    oov_policy: str = "skip"
    empty_sentence_policy: str = "zero"

    def __post_init__(self):
        make_filter(self.filter)
        if self.level < 0:
            raise ValueError(f"level must be >= 0, got {self.level}")
        if self.k not in (1, 2):
            raise ValueError(f"only K = 1 or K = 2 coefficients are supported, got {self.k}")
        if self.oov_policy not in OOV_POLICIES:
            raise ValueError(f"oov_policy must be one of {OOV_POLICIES}")
        if self.empty_sentence_policy not in EMPTY_POLICIES:
            raise ValueError(f"empty_sentence_policy must be one of {EMPTY_POLICIES}")


def _block_widths(d: int, level: int) -> list[int]:
    if level == 0:
        return [d]
    return [subband_length(d, level)] * 2**level


def sentence_dim(d: int, cfg: SentenceEncoderConfig) -> int:
    """Length of every sentence vector produced for word dimension ``d``."""
    widths = _block_widths(d, cfg.level)
    if cfg.k == 2:
        widths = [-(-w // 2) for w in widths]
    return cfg.k * sum(widths)


def rowwise_packet(words, filt, level: int) -> np.ndarray:
    """Replace each row by its concatenated depth-``level`` packet subbands."""
    words = np.asarray(words, dtype=np.float64)
    if level == 0:
        return words
    return np.concatenate([s.coeffs for s in packet_level(words, filt, level)], axis=-1)


def encode(words, cfg: SentenceEncoderConfig) -> np.ndarray:
    """Encode an ``N x d`` stack of word vectors into one fixed-size vector."""
    try:
        m = np.array(words, dtype=np.float64)
    except ValueError:
        raise ValueError("ragged word vectors: all words need the same dimension") from None
    if m.ndim != 2 or m.shape[1] == 0:
        raise ValueError(f"expected an N x d matrix of word vectors, got shape {m.shape}")
    if m.shape[0] == 0:
        raise EmptySentenceError("sentence has no words")

    blocks = []
    if cfg.level == 0:
        blocks.append(m)
    else:
        blocks.extend(s.coeffs for s in packet_level(m, cfg.filter, cfg.level))
    if cfg.k == 2:
        blocks = [b[:, ::2] for b in blocks]
    spectrum = dct_columns(np.concatenate(blocks, axis=1))

    rows = spectrum[: cfg.k]
    if rows.shape[0] < cfg.k:
        rows = np.vstack([rows, np.zeros((cfg.k - rows.shape[0], rows.shape[1]))])
    return rows.reshape(-1)


def lookup_tokens(tokens: Sequence[str], table: EmbeddingTable, lowercase: bool, oov_policy: str):
    """Word vectors for ``tokens`` in order, applying the OOV policy.

    Returns ``(vectors, n_oov)``.
    """
    vectors = []
    n_oov = 0
    for tok in tokens:
        vec = table.get(tok.lower() if lowercase else tok)
        if vec is None:
            n_oov += 1
            if oov_policy == "zero":
                vectors.append(np.zeros(table.dim))
            continue
        vectors.append(vec)
    return vectors, n_oov


def encode_tokens(tokens: Sequence[str], table: EmbeddingTable, cfg: SentenceEncoderConfig) -> np.ndarray:
    vectors, _ = lookup_tokens(tokens, table, cfg.lowercase, cfg.oov_policy)
    if not vectors:
        if cfg.empty_sentence_policy == "zero":
            return np.zeros(sentence_dim(table.dim, cfg))
        raise EmptySentenceError(f"no known words in sentence {' '.join(tokens)!r}")
    return encode(np.vstack(vectors), cfg)


def encode_avg(
    tokens: Sequence[str],
    table: EmbeddingTable,
    lowercase: bool = False,
    oov_policy: str = "skip",
) -> np.ndarray:
    """Averaging baseline: mean of the looked-up word vectors."""
    vectors, _ = lookup_tokens(tokens, table, lowercase, oov_policy)
    if not vectors:
        raise EmptySentenceError(f"no known words in sentence {' '.join(tokens)!r}")
    return average_words(vectors)
