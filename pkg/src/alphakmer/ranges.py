"""Equal-width discretization grid fitted on flattened data."""
from __future__ import annotations

import numpy as np

from .core import DegenerateRange, RangeBounds, TimeSeriesDataset, ValidationError


def flatten(dataset: TimeSeriesDataset) -> np.ndarray:
    """Concatenate every signal's values in dataset order."""
    if len(dataset.signals) == 0:
        return np.empty(0, dtype=np.float64)
    return np.concatenate([s.values for s in dataset.signals])


def compute_ranges(flat, num_ranges: int = 26) -> RangeBounds:
    """Split ``[min(flat), max(flat)]`` into ``num_ranges`` equal-width ranges.

    ``bounds[i] = min + i * d`` with ``d = (max - min) / num_ranges``; the last
    bound is pinned to ``max`` exactly so the maximum is never lost to rounding.

    Raises
    ------
    DegenerateRange
        If ``max == min``, or if the span is too narrow for ``num_ranges``
        distinct float64 boundaries.
    """
    flat = np.asarray(flat, dtype=np.float64).reshape(-1)
    if flat.size == 0:
        raise ValidationError("cannot fit ranges on empty data")
    if not np.all(np.isfinite(flat)):
        raise ValidationError("cannot fit ranges on non-finite data")
    if num_ranges < 2:
        raise ValidationError(f"num_ranges must be >= 2, got {num_ranges}")

    lo = float(flat.min())
    hi = float(flat.max())
    if hi == lo:
        raise DegenerateRange(f"all values equal {lo!r}; ranges have zero width")
    d = (hi - lo) / num_ranges
    bounds = lo + np.arange(num_ranges + 1, dtype=np.float64) * d
    bounds[0] = lo
    bounds[-1] = hi
    if not np.all(np.diff(bounds) > 0):
        raise DegenerateRange(
            f"span [{lo!r}, {hi!r}] is too narrow for {num_ranges} distinct ranges"
        )
    return RangeBounds(bounds, d)


def locate(value, bounds: RangeBounds):
    """0-based range index of ``value``; arrays are handled element-wise.

    Ranges are half-open ``[b[i], b[i+1])`` except the last, which also holds
    ``b[-1]``. Values outside the fitted span are clamped to the first or last
    range.
    """
    b = bounds.bounds
    idx = np.searchsorted(b, value, side="right") - 1
    idx = np.clip(idx, 0, bounds.num_ranges - 1)
    if np.ndim(idx) == 0:
        return int(idx)
    return idx.astype(np.int64)
