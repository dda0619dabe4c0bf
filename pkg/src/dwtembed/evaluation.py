"""Intrinsic evaluation of word and sentence embeddings.

Dataset formats (UTF-8, blank lines and ``#`` comments ignored):

* word similarity: ``word1 word2 score`` (whitespace or tab separated)
* categorization: ``word<TAB>category``
* sentence similarity: ``sentence1<TAB>sentence2<TAB>score``
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .embeddings import EmbeddingTable
from .sentence import EmptySentenceError, SentenceEncoderConfig, encode_avg, encode_tokens

__all__ = [
    "CategorizationDataset",
    "DatasetFormatError",
    "DegenerateCorrelationError",
    "EvalReport",
    "InsufficientDataError",
    "WordSimDataset",
    "cosine",
    "eval_categorization",
    "eval_sts",
    "eval_word_similarity",
    "kmeans",
    "knn",
    "load_categorization",
    "load_sts",
    "load_wordsim",
    "pearson",
    "purity",
    "rank_average",
    "spearman",
]

log = logging.getLogger(__name__)

KMEANS_RESTARTS = 10
KMEANS_MAX_ITER = 300


class DegenerateCorrelationError(ValueError):
    """Correlation is undefined because one input is constant."""


class InsufficientDataError(ValueError):
    """Too few in-vocabulary items to compute the metric."""


class DatasetFormatError(ValueError):
    pass


@dataclass(frozen=True)
class WordSimDataset:
    pairs: tuple[tuple[str, str, float], ...]
    name: str = ""

    def __post_init__(self):
        if not self.pairs:
            raise DatasetFormatError("word similarity dataset has no pairs")
        if any(np.isnan(score) for _, _, score in self.pairs):
            raise DatasetFormatError("NaN gold score")


@dataclass(frozen=True)
class CategorizationDataset:
    items: tuple[tuple[str, str], ...]
    name: str = ""

    def __post_init__(self):
        if self.k < 2:
            raise DatasetFormatError("categorization needs at least two categories")

    @property
    def k(self) -> int:
        return len({label for _, label in self.items})


@dataclass(frozen=True)
class EvalReport:
    metric: str
    value: float
    n_evaluated: int
    n_skipped_oov: int
    dataset: str = ""

    def as_kv(self) -> str:
        return "\n".join(
            [
                f"dataset={self.dataset}",
                f"metric={self.metric}",
                f"value={self.value:.6f}",
                f"n_evaluated={self.n_evaluated}",
                f"n_skipped_oov={self.n_skipped_oov}",
            ]
        )

    def as_table(self) -> str:
        header = ("dataset", "metric", "value", "evaluated", "skipped_oov")
        row = (self.dataset, self.metric, f"{self.value:.4f}", str(self.n_evaluated), str(self.n_skipped_oov))
        widths = [max(len(a), len(b)) for a, b in zip(header, row)]
        fmt = "  ".join(f"{{:<{w}}}" for w in widths)
        return fmt.format(*header).rstrip() + "\n" + fmt.format(*row).rstrip()


# -- similarity and correlation ---------------------------------------------


def cosine(u, v) -> float:
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"shape mismatch: {u.shape} vs {v.shape}")
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0 or nv == 0:
        raise ValueError("cosine similarity is undefined for a zero vector")
    return float(np.clip(u @ v / (nu * nv), -1.0, 1.0))


def rank_average(xs) -> np.ndarray:
    """1-based ranks; tied values share the mean of the ranks they span."""
    xs = np.asarray(xs, dtype=np.float64)
    order = np.argsort(xs, kind="stable")
    sorted_x = xs[order]
    ranks = np.empty(xs.size)
    # boundaries of runs of equal values
    starts = np.flatnonzero(np.r_[True, sorted_x[1:] != sorted_x[:-1]])
    ends = np.r_[starts[1:], xs.size]
    for s, e in zip(starts, ends):
        ranks[order[s:e]] = (s + e + 1) / 2.0
    return ranks


def pearson(xs, ys) -> float:
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    if x.size < 2:
        raise InsufficientDataError("correlation needs at least two points")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = np.sqrt(dx @ dx)
    sy = np.sqrt(dy @ dy)
    if sx == 0 or sy == 0:
        raise DegenerateCorrelationError("correlation is undefined for constant input")
    return float(np.clip((dx @ dy) / (sx * sy), -1.0, 1.0))


def spearman(xs, ys) -> float:
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    return pearson(rank_average(x), rank_average(y))


# -- word similarity and neighbours -----------------------------------------


def eval_word_similarity(table: EmbeddingTable, ds: WordSimDataset) -> EvalReport:
    """Spearman correlation of model cosine vs gold; OOV pairs are skipped."""
    model, gold = [], []
    skipped = 0
    for w1, w2, score in ds.pairs:
        v1, v2 = table.get(w1), table.get(w2)
        if v1 is None or v2 is None:
            skipped += 1
            continue
        model.append(cosine(v1, v2))
        gold.append(score)
    if len(model) < 2:
        raise InsufficientDataError(
            f"only {len(model)} of {len(ds.pairs)} pairs are in vocabulary"
        )
    if skipped:
        log.warning("%s: skipped %d OOV pair(s)", ds.name or "wordsim", skipped)
    return EvalReport("spearman", spearman(model, gold), len(model), skipped, ds.name)


def knn(table: EmbeddingTable, word: str, k: int) -> list[tuple[str, float]]:
    """Top-``k`` neighbours of ``word`` by cosine, excluding ``word`` itself.

    Ties keep vocabulary order. Zero vectors score 0 against everything.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    qi = table.index(word)
    if qi is None:
        raise KeyError(f"{word!r} is not in the vocabulary")
    vecs = table.vectors
    norms = np.linalg.norm(vecs, axis=1)
    q = vecs[qi]
    safe = np.where(norms == 0, 1.0, norms)
    sims = (vecs @ q) / (safe * (norms[qi] or 1.0))
    sims[norms == 0] = 0.0
    sims = np.clip(sims, -1.0, 1.0)
    order = np.argsort(-sims, kind="stable")
    order = order[order != qi][:k]
    return [(table.vocab[i], float(sims[i])) for i in order]


# -- concept categorization -------------------------------------------------


def _kmeans_pp_init(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    centers = [x[rng.integers(x.shape[0])]]
    d2 = ((x - centers[0]) ** 2).sum(axis=1)
    for _ in range(1, k):
        total = d2.sum()
        if total == 0:
            idx = rng.integers(x.shape[0])
        else:
            idx = rng.choice(x.shape[0], p=d2 / total)
        centers.append(x[idx])
        d2 = np.minimum(d2, ((x - x[idx]) ** 2).sum(axis=1))
    return np.array(centers)


def _lloyd(x: np.ndarray, centers: np.ndarray):
    labels = None
    for _ in range(KMEANS_MAX_ITER):
        dist = ((x[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new_labels = dist.argmin(axis=1)
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for j in range(centers.shape[0]):
            members = x[labels == j]
            if len(members):
                centers[j] = members.mean(axis=0)
    dist = ((x[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    labels = dist.argmin(axis=1)
    inertia = float(dist[np.arange(x.shape[0]), labels].sum())
    return labels, inertia


def kmeans(x, k: int, seed: int = 0, restarts: int = KMEANS_RESTARTS) -> tuple[np.ndarray, float]:
    """Lloyd's k-means with k-means++ seeding; best of ``restarts`` runs.

    Returns ``(labels, inertia)``. Restarts draw from one generator seeded
    with ``seed``; inertia ties go to the earliest restart.
    """
    x = np.asarray(x, dtype=np.float64)
    if not 1 <= k <= x.shape[0]:
        raise ValueError(f"k must be in [1, {x.shape[0]}], got {k}")
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(restarts):
        labels, inertia = _lloyd(x, _kmeans_pp_init(x, k, rng))
        if best is None or inertia < best[1]:
            best = (labels, inertia)
    return best


def purity(clusters, gold) -> float:
    """Fraction of items carrying their cluster's majority gold label."""
    clusters = np.asarray(clusters)
    gold = np.asarray(gold)
    if clusters.size == 0:
        raise ValueError("purity of an empty clustering")
    total = 0
    for c in np.unique(clusters):
        _, counts = np.unique(gold[clusters == c], return_counts=True)
        total += counts.max()
    return total / clusters.size


def eval_categorization(table: EmbeddingTable, ds: CategorizationDataset, seed: int = 0) -> EvalReport:
    words, labels = [], []
    skipped = 0
    for word, label in ds.items:
        vec = table.get(word)
        if vec is None:
            skipped += 1
            continue
        words.append(vec)
        labels.append(label)
    if len(words) < ds.k:
        raise InsufficientDataError(
            f"{len(words)} in-vocabulary words for {ds.k} categories"
        )
    if skipped:
        log.warning("%s: skipped %d OOV word(s)", ds.name or "categorization", skipped)
    clusters, _ = kmeans(np.vstack(words), ds.k, seed=seed)
    return EvalReport("purity", purity(clusters, labels), len(words), skipped, ds.name)


# -- sentence similarity ----------------------------------------------------


def eval_sts(
    pairs: Sequence[tuple[str, str, float]],
    table: EmbeddingTable,
    cfg: SentenceEncoderConfig,
    average: bool = False,
    name: str = "",
) -> EvalReport:
    """Pearson correlation of sentence-vector cosine vs gold.

    Sentences are whitespace-tokenized. With ``average=True`` the averaging
    baseline replaces the wavelet/DCT encoder (``cfg`` still supplies the
    lowercase and OOV settings). Pairs where either side has no usable
    vector are skipped.
    """
    model, gold = [], []
    skipped = 0
    for s1, s2, score in pairs:
        try:
            if average:
                e1 = encode_avg(s1.split(), table, cfg.lowercase, cfg.oov_policy)
                e2 = encode_avg(s2.split(), table, cfg.lowercase, cfg.oov_policy)
            else:
                e1 = encode_tokens(s1.split(), table, cfg)
                e2 = encode_tokens(s2.split(), table, cfg)
        except EmptySentenceError:
            skipped += 1
            continue
        if not e1.any() or not e2.any():
            skipped += 1
            continue
        model.append(cosine(e1, e2))
        gold.append(score)
    if len(model) < 2:
        raise InsufficientDataError(f"only {len(model)} of {len(pairs)} pairs could be encoded")
    if skipped:
        log.warning("%s: skipped %d pair(s) with no known words", name or "sts", skipped)
    return EvalReport("pearson", pearson(model, gold), len(model), skipped, name)


# -- dataset files ----------------------------------------------------------


def _data_lines(path):
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            yield lineno, line


def _score(text: str, path, lineno: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise DatasetFormatError(f"{path}:{lineno}: bad score {text!r}") from None
    if np.isnan(value):
        raise DatasetFormatError(f"{path}:{lineno}: NaN score")
    return value


def _name(path) -> str:
    return os.path.splitext(os.path.basename(os.fspath(path)))[0]


def load_wordsim(path) -> WordSimDataset:
    pairs = []
    for lineno, line in _data_lines(path):
        fields = line.split()
        if len(fields) != 3:
            raise DatasetFormatError(f"{path}:{lineno}: expected 3 columns, got {len(fields)}")
        pairs.append((fields[0], fields[1], _score(fields[2], path, lineno)))
    return WordSimDataset(tuple(pairs), _name(path))


def load_categorization(path) -> CategorizationDataset:
    items = []
    for lineno, line in _data_lines(path):
        fields = line.split("\t")
        if len(fields) != 2 or not all(f.strip() for f in fields):
            raise DatasetFormatError(f"{path}:{lineno}: expected word<TAB>category")
        items.append((fields[0].strip(), fields[1].strip()))
    return CategorizationDataset(tuple(items), _name(path))


def load_sts(path) -> list[tuple[str, str, float]]:
    pairs = []
    for lineno, line in _data_lines(path):
        fields = line.split("\t")
        if len(fields) != 3:
            raise DatasetFormatError(f"{path}:{lineno}: expected sentence<TAB>sentence<TAB>score")
        pairs.append((fields[0], fields[1], _score(fields[2], path, lineno)))
    if not pairs:
        raise DatasetFormatError(f"{path}: no sentence pairs")
    return pairs
