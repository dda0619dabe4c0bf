"""Orthogonal 1-D discrete wavelet transform with periodized boundaries.

Each analysis step convolves the signal circularly with a low-pass filter
``h`` and a high-pass filter ``g`` and keeps the even-indexed outputs::

    cA[n] = sum_k h[k] * x[(2n - k) mod M]
    cD[n] = sum_k g[k] * x[(2n - k) mod M]

where ``M`` is the (even) working length. Odd-length signals are extended by
repeating their last sample once, so both subbands always hold
``ceil(len(x) / 2)`` coefficients.

Wavelet-packet nodes are addressed by strings over ``{"A", "D"}`` read left
to right: ``"AD"`` is the detail subband of the level-1 approximation (the
``cAD`` of the usual figure labelling).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import numpy as np

from ._taps import LOWPASS_TAPS

__all__ = [
    "FILTER_NAMES",
    "Subband",
    "UnknownWaveletError",
    "WaveletFilter",
    "dwt_1d",
    "idwt_1d",
    "make_filter",
    "packet_level",
    "packet_node",
    "packet_paths",
    "subband_length",
    "validate_path",
]

FILTER_NAMES: tuple[str, ...] = tuple(LOWPASS_TAPS)


class UnknownWaveletError(ValueError):
    """Raised for a wavelet family name outside the supported set."""


@dataclass(frozen=True)
class WaveletFilter:
    """Orthogonal quadrature-mirror filter pair (decomposition taps)."""

    name: str
    h: np.ndarray = field(repr=False)
    g: np.ndarray = field(repr=False)

    @property
    def len(self) -> int:
        return self.h.shape[0]


@dataclass(frozen=True)
class Subband:
    path: str
    coeffs: np.ndarray
    source_len: int


@lru_cache(maxsize=None)
def make_filter(name: str) -> WaveletFilter:
    """Return the filter pair for ``name`` (haar, db2-db10, sym2-sym10, coif1-coif5).

    The high-pass taps follow ``g[k] = (-1)**k * h[len - 1 - k]``.
    """
    try:
        taps = LOWPASS_TAPS[name]
    except (KeyError, TypeError):
        raise UnknownWaveletError(
            f"unknown wavelet {name!r}; supported: {', '.join(FILTER_NAMES)}"
        ) from None
    h = np.array(taps, dtype=np.float64)
    signs = np.where(np.arange(h.size) % 2 == 0, 1.0, -1.0)
    g = signs * h[::-1]
    h.setflags(write=False)
    g.setflags(write=False)
    return WaveletFilter(name, h, g)


def _as_filter(filt: WaveletFilter | str) -> WaveletFilter:
    return make_filter(filt) if isinstance(filt, str) else filt


@lru_cache(maxsize=256)
def _gather_index(m: int, taps: int) -> np.ndarray:
    # idx[n, k] = (2n - k) mod m
    idx = (2 * np.arange(m // 2)[:, None] - np.arange(taps)[None, :]) % m
    idx.setflags(write=False)
    return idx


def _periodize(x: np.ndarray) -> np.ndarray:
    if x.shape[-1] % 2:
        return np.concatenate([x, x[..., -1:]], axis=-1)
    return x


def dwt_1d(signal, filt: WaveletFilter | str) -> tuple[np.ndarray, np.ndarray]:
    """Single-level periodized DWT along the last axis.

    Accepts a vector or a stack of rows (``(..., n)``); each row is
    transformed independently. Returns ``(cA, cD)``, each of trailing
    length ``ceil(n / 2)``.
    """
    filt = _as_filter(filt)
    x = np.asarray(signal, dtype=np.float64)
    if x.ndim == 0 or x.shape[-1] == 0:
        raise ValueError("cannot transform an empty signal")
    x = _periodize(x)
    windows = x[..., _gather_index(x.shape[-1], filt.len)]
    return windows @ filt.h, windows @ filt.g


def idwt_1d(cA, cD, filt: WaveletFilter | str, orig_len: int) -> np.ndarray:
    """Invert :func:`dwt_1d`, returning ``orig_len`` samples along the last axis."""
    filt = _as_filter(filt)
    a = np.asarray(cA, dtype=np.float64)
    d = np.asarray(cD, dtype=np.float64)
    half = a.shape[-1] if a.ndim else 0
    if a.shape != d.shape or half != math.ceil(orig_len / 2) or orig_len < 1:
        raise ValueError(
            f"subband lengths {a.shape[-1:]} / {d.shape[-1:]} do not fit "
            f"a signal of length {orig_len}"
        )
    m = 2 * half
    idx = _gather_index(m, filt.len)
    # The analysis operator is orthogonal, so synthesis is its transpose.
    contrib = a[..., :, None] * filt.h + d[..., :, None] * filt.g
    out = np.zeros(a.shape[:-1] + (m,))
    for k in range(filt.len):
        # for a fixed tap the targets (2n - k) mod m are distinct
        out[..., idx[:, k]] += contrib[..., k]
    return out[..., :orig_len]


def validate_path(path: str) -> str:
    if not isinstance(path, str) or not path:
        raise ValueError("packet path must be a non-empty string over {A, D}")
    bad = set(path) - {"A", "D"}
    if bad:
        raise ValueError(
            f"invalid packet path {path!r}: characters {''.join(sorted(bad))!r} "
            "are not in {A, D}"
        )
    return path


def subband_length(n: int, depth: int) -> int:
    """Coefficient count of any depth-``depth`` node of a length-``n`` signal."""
    for _ in range(depth):
        n = -(-n // 2)
    return n


def packet_node(signal, filt: WaveletFilter | str, path: str) -> Subband:
    validate_path(path)
    filt = _as_filter(filt)
    x = np.asarray(signal, dtype=np.float64)
    parent_len = 0
    for step in path:
        parent_len = x.shape[-1] if x.ndim else 0
        cA, cD = dwt_1d(x, filt)
        x = cA if step == "A" else cD
    return Subband(path, x, parent_len)


def packet_paths(level: int) -> list[str]:
    """All depth-``level`` packet paths in canonical order (A before D)."""
    if level < 1:
        raise ValueError(f"level must be >= 1, got {level}")
    return ["".join(p) for p in product("AD", repeat=level)]


def packet_level(signal, filt: WaveletFilter | str, level: int) -> list[Subband]:
    """Full wavelet-packet split to depth ``level``, in canonical path order.

    Each node is computed once, so the cost is linear in
    ``len(signal) * level``.
    """
    paths = packet_paths(level)
    filt = _as_filter(filt)
    nodes = [Subband("", np.asarray(signal, dtype=np.float64), 0)]
    for _ in range(level):
        children = []
        for node in nodes:
            cA, cD = dwt_1d(node.coeffs, filt)
            n = node.coeffs.shape[-1]
            children.append(Subband(node.path + "A", cA, n))
            children.append(Subband(node.path + "D", cD, n))
        nodes = children
    assert [n.path for n in nodes] == paths
    return nodes
