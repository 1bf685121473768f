"""Input checking helpers shared by the estimators."""
from __future__ import annotations

import numpy as np

from .core import TimeSeriesDataset, ValidationError

_MAX_DENSE_DIM = 10**8


def check_signals(X, *, allow_empty_signal=False):
    """Coerce ``X`` to a list of 1-D float64 arrays.

    Accepts a :class:`TimeSeriesDataset`, a 2-D array (one signal per row) or
    any sequence of 1-D array-likes (ragged is fine).
    """
    if isinstance(X, TimeSeriesDataset):
        arrays = X.arrays
    elif isinstance(X, np.ndarray) and X.ndim == 2:
        arrays = list(X)
    elif isinstance(X, np.ndarray) and X.ndim == 1 and X.dtype != object:
        raise ValidationError("expected a collection of signals, got a single 1-D array")
    else:
        arrays = list(X)
    out = []
    for i, a in enumerate(arrays):
        arr = np.asarray(a, dtype=np.float64)
        if arr.ndim != 1:
            raise ValidationError(f"signal {i} must be 1-D, got shape {arr.shape}")
        if arr.size == 0 and not allow_empty_signal:
            raise ValidationError(f"signal {i} is empty")
        if not np.all(np.isfinite(arr)):
            raise ValidationError(f"signal {i} contains non-finite values")
        out.append(arr)
    if not out:
        raise ValidationError("no signals given")
    return out


def check_ksize(ksize):
    if not isinstance(ksize, (int, np.integer)) or ksize < 1:
        raise ValidationError(f"ksize must be a positive integer, got {ksize!r}")
    return int(ksize)


def check_spectrum_dim(alphabet_size, ksize):
    dim = alphabet_size**ksize
    if dim > _MAX_DENSE_DIM:
        raise ValidationError(
            f"|A|^k = {alphabet_size}^{ksize} = {dim} is too large for a dense spectrum"
        )
    return dim

