"""Orthonormal DCT-II and its inverse (DCT-III).

Normalization::

    c[k] = s(k) * sum_{n=0}^{N-1} x[n] * cos(pi * (2n + 1) * k / (2N))
    s(0) = sqrt(1 / N),  s(k > 0) = sqrt(2 / N)

With this scaling the transform matrix is orthogonal, so energy is preserved
and ``c[0] == sqrt(N) * mean(x)``. Inputs here are sentence lengths (tens of
words), so the transform is evaluated directly as an ``N x N`` matrix
product rather than through an FFT.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

__all__ = ["dct_basis", "dct_columns", "dct_ii", "idct"]


@lru_cache(maxsize=128)
def dct_basis(n: int) -> np.ndarray:
    """The orthonormal DCT-II matrix ``C`` with ``c = C @ x``."""
    k = np.arange(n)[:, None]
    i = np.arange(n)[None, :]
    basis = np.cos(np.pi * (2 * i + 1) * k / (2 * n))
    basis *= np.sqrt(2.0 / n)
    basis[0] = np.sqrt(1.0 / n)
    basis.setflags(write=False)
    return basis


def _checked(x, ndim: int) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != ndim or 0 in arr.shape:
        kind = "vector" if ndim == 1 else "matrix"
        raise ValueError(f"expected a non-empty {kind}, got shape {arr.shape}")
    return arr


def dct_ii(x) -> np.ndarray:
    x = _checked(x, 1)
    return dct_basis(x.shape[0]) @ x


def idct(c) -> np.ndarray:
    c = _checked(c, 1)
    return dct_basis(c.shape[0]).T @ c


def dct_columns(m) -> np.ndarray:
    """DCT-II of every column; row ``k`` of the result holds ``c[k]`` per column."""
    m = _checked(m, 2)
    return dct_basis(m.shape[0]) @ m
