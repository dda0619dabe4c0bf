"""Word-embedding tables in the GloVe / fastText text formats.

One record per line: a token followed by ``d`` numbers, separated by spaces
or tabs. A leading ``"V D"`` line (the fastText ``.vec`` header) is detected
and skipped. Output is written without a header, LF-terminated.
"""

from __future__ import annotations

import io
import logging
import os
from dataclasses import dataclass, field
from typing import BinaryIO, Iterable

import numpy as np

__all__ = [
    "EmbeddingFormatError",
    "EmbeddingTable",
    "load_embeddings",
    "lookup",
    "save_embeddings",
]

log = logging.getLogger(__name__)


class EmbeddingFormatError(ValueError):
    """Empty input or vectors of inconsistent / unexpected dimension."""


@dataclass(frozen=True)
class EmbeddingTable:
    """Immutable vocabulary -> vector map with a uniform dimension.

    ``vectors`` is a ``(len(vocab), dim)`` array whose row ``i`` belongs to
    ``vocab[i]``. When ``lowercase`` is set, keys were lowercased at load time
    and queries are lowercased too.
    """

    vocab: tuple[str, ...]
    vectors: np.ndarray = field(repr=False)
    name: str = ""
    lowercase: bool = False
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        vectors = np.array(self.vectors, dtype=np.float64, copy=True)
        if vectors.ndim != 2:
            if vectors.size == 0 and not self.vocab:
                vectors = vectors.reshape(0, 0)
            else:
                raise ValueError("vectors must be a 2-D array")
        if vectors.shape[0] != len(self.vocab):
            raise ValueError(
                f"{len(self.vocab)} words but {vectors.shape[0]} vectors"
            )
        vectors.setflags(write=False)
        index = {}
        for i, word in enumerate(self.vocab):
            if word in index:
                raise ValueError(f"duplicate word {word!r}")
            index[word] = i
        object.__setattr__(self, "vocab", tuple(self.vocab))
        object.__setattr__(self, "vectors", vectors)
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_dict(cls, mapping: dict, name: str = "", lowercase: bool = False):
        words = list(mapping)
        vectors = np.array([mapping[w] for w in words], dtype=np.float64)
        return cls(tuple(words), vectors, name=name, lowercase=lowercase)

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return len(self.vocab)

    def __contains__(self, word: str) -> bool:
        return self.get(word) is not None

    def index(self, word: str) -> int | None:
        if self.lowercase:
            word = word.lower()
        return self._index.get(word)

    def get(self, word: str) -> np.ndarray | None:
        i = self.index(word)
        return None if i is None else self.vectors[i]

    def replace(self, vectors: np.ndarray, name: str | None = None) -> "EmbeddingTable":
        """Same vocabulary with new vectors (any width)."""
        return EmbeddingTable(
            self.vocab,
            vectors,
            name=self.name if name is None else name,
            lowercase=self.lowercase,
        )


def lookup(table: EmbeddingTable, word: str) -> np.ndarray | None:
    """Vector for ``word``, or ``None`` when it is out of vocabulary."""
    return table.get(word)


def _open_binary(source, mode: str):
    if isinstance(source, (str, os.PathLike)):
        return open(source, mode), True
    return source, False


def _is_header(fields: list[str]) -> bool:
    return len(fields) == 2 and all(f.isdigit() for f in fields)


def _lines(stream: BinaryIO) -> Iterable[tuple[int, str]]:
    for lineno, raw in enumerate(stream, start=1):
        yield lineno, raw.decode("utf-8").rstrip("\r\n")


def load_embeddings(
    source,
    expected_dim: int | None = None,
    lowercase: bool = False,
    max_vocab: int | None = None,
    name: str | None = None,
) -> tuple[EmbeddingTable, int]:
    """Parse a text embedding file.

    ``source`` is a path or a binary stream. Returns ``(table, n_skipped)``
    where ``n_skipped`` counts malformed lines (a token with no numbers, or
    values that do not parse as floats). Duplicate tokens keep their first
    occurrence. A line whose width disagrees with the rest is an error, not
    a skip.
    """
    stream, owned = _open_binary(source, "rb")
    words: list[str] = []
    rows: list[np.ndarray] = []
    seen: set[str] = set()
    dim = expected_dim
    skipped = 0
    saw_content = False
    try:
        for lineno, line in _lines(stream):
            fields = line.split()
            if not fields:
                continue
            if not saw_content:
                saw_content = True
                if _is_header(fields):
                    continue
            if max_vocab is not None and len(words) >= max_vocab:
                break
            token, values = fields[0], fields[1:]
            try:
                vec = np.array(values, dtype=np.float64)
            except ValueError:
                vec = None
            if vec is None or vec.size == 0 or not np.all(np.isfinite(vec)):
                skipped += 1
                continue
            if dim is None:
                dim = vec.size
            elif vec.size != dim:
                what = "expected" if expected_dim is not None else "inconsistent"
                raise EmbeddingFormatError(
                    f"line {lineno}: {vec.size} values for {token!r}, "
                    f"{what} dimension is {dim}"
                )
            if lowercase:
                token = token.lower()
            if token in seen:
                continue
            seen.add(token)
            words.append(token)
            rows.append(vec)
    finally:
        if owned:
            stream.close()
    if not words:
        raise EmbeddingFormatError("no embedding vectors found in input")
    if skipped:
        log.warning("skipped %d malformed embedding line(s)", skipped)
    if name is None:
        name = str(source) if isinstance(source, (str, os.PathLike)) else ""
    table = EmbeddingTable(tuple(words), np.vstack(rows), name=name, lowercase=lowercase)
    return table, skipped


def save_embeddings(table: EmbeddingTable, sink, precision: int = 6) -> None:
    """Write ``table`` as ``word v1 ... vd`` lines with fixed decimals.

    With ``precision=0`` values are rounded to integers, so a reload is only
    accurate to within 0.5.
    """
    if precision < 0:
        raise ValueError("precision must be >= 0")
    stream, owned = _open_binary(sink, "wb")
    try:
        text = io.TextIOWrapper(stream, encoding="utf-8", newline="\n", write_through=True)
        fmt = f"{{:.{precision}f}}"
        for word, vec in zip(table.vocab, table.vectors):
            text.write(word + " " + " ".join(fmt.format(v) for v in vec) + "\n")
        text.flush()
        text.detach()
    finally:
        if owned:
            stream.close()
