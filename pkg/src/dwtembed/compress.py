"""Reduced-dimension word vectors built from wavelet-packet subbands.

A :class:`CompressionSpec` names a filter and an ordered list of packet
paths; a word is compressed by concatenating those subbands. Label mapping
for the common configurations at ``d = 300``:

=============  ===============  ====
label          paths            dim
=============  ===============  ====
cA             A                150
cD             D                150
cD+cAD         D, AD            225
cA+cDA         A, DA            225
cD+cAD+cAAD    D, AD, AAD       263
=============  ===============  ====

Also here: the two non-spectral baselines, plain averaging and random
pooling (a fixed random subset of dimensions shared by every word).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embeddings import EmbeddingTable
from .wavelet import make_filter, packet_node, subband_length, validate_path

__all__ = [
    "DEFAULT_FILTER",
    "CompressionSpec",
    "average_words",
    "compress_table",
    "compress_word",
    "output_dim",
    "parse_paths",
    "random_pool",
    "random_pool_indices",
    "random_pool_table",
]

DEFAULT_FILTER = "coif2"


def parse_paths(text: str) -> tuple[str, ...]:
    """``"D,AD,AAD"`` -> ``("D", "AD", "AAD")``."""
    return tuple(p.strip().upper() for p in text.split(",") if p.strip())


@dataclass(frozen=True)
class CompressionSpec:
    filter: str = DEFAULT_FILTER
    paths: tuple[str, ...] = ("A",)
    label: str = ""

    def __post_init__(self):
        paths = tuple(self.paths)
        if not paths:
            raise ValueError("a compression spec needs at least one path")
        for p in paths:
            validate_path(p)
        if len(set(paths)) != len(paths):
            raise ValueError(f"duplicate paths in {paths}")
        make_filter(self.filter)
        object.__setattr__(self, "paths", paths)
        if not self.label:
            object.__setattr__(self, "label", "+".join("c" + p for p in paths))

    @classmethod
    def parse(cls, paths: str, filter: str = DEFAULT_FILTER) -> "CompressionSpec":
        return cls(filter=filter, paths=parse_paths(paths))


def output_dim(spec: CompressionSpec, d: int) -> int:
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    return sum(subband_length(d, len(p)) for p in spec.paths)


def compress_word(v, spec: CompressionSpec) -> np.ndarray:
    return np.concatenate([packet_node(v, spec.filter, p).coeffs for p in spec.paths], axis=-1)


def compress_table(table: EmbeddingTable, spec: CompressionSpec) -> EmbeddingTable:
    name = f"{table.name} [{spec.filter}:{spec.label}]".strip()
    if len(table) == 0:
        return table.replace(np.zeros((0, output_dim(spec, max(table.dim, 1)))), name)
    # rows are independent, so the whole matrix goes through in one pass
    return table.replace(compress_word(table.vectors, spec), name)


def random_pool_indices(n: int, keep: int, seed: int) -> np.ndarray:
    """Sorted random subset of ``keep`` distinct indices out of ``n``."""
    if not 1 <= keep <= n:
        raise ValueError(f"keep must be in [1, {n}], got {keep}")
    rng = np.random.default_rng(seed)
    return np.sort(rng.choice(n, size=keep, replace=False))


def random_pool(v, keep: int, seed: int) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    return v[..., random_pool_indices(v.shape[-1], keep, seed)]


def random_pool_table(table: EmbeddingTable, keep: int, seed: int) -> EmbeddingTable:
    """Apply one index draw to every word of ``table``."""
    return table.replace(random_pool(table.vectors, keep, seed), f"{table.name} [random{keep}]".strip())


def average_words(vs) -> np.ndarray:
    vs = list(vs)
    if not vs:
        raise ValueError("cannot average an empty list of vectors")
    lengths = {np.shape(v) for v in vs}
    if len(lengths) != 1 or len(next(iter(lengths))) != 1:
        raise ValueError(f"ragged vectors: shapes {sorted(lengths)}")
    return np.mean(np.asarray(vs, dtype=np.float64), axis=0)
