"""Signal-to-symbol mapping and overlapping k-mer extraction."""
from __future__ import annotations

from typing import List

import numpy as np

from .core import Alphabet, AlphabetSizeMismatch, RangeBounds, Signal, SymbolicSequence
from .ranges import locate


def map_signal(signal: Signal, bounds: RangeBounds, alphabet: Alphabet) -> SymbolicSequence:
    """Replace every sample with the symbol of the range it falls in."""
    if len(alphabet) != bounds.num_ranges:
        raise AlphabetSizeMismatch(
            f"alphabet has {len(alphabet)} symbols but the grid has {bounds.num_ranges} ranges"
        )
    idx = locate(np.asarray(signal.values), bounds)
    symbols = alphabet.symbols
    return SymbolicSequence(signal.id, "".join(symbols[i] for i in np.atleast_1d(idx)))


def compute_kmers(sequence, ksize: int = 3) -> List[str]:
    """All overlapping substrings of length ``ksize``, in order.

    ``sequence`` may be a :class:`SymbolicSequence` or a plain string. Returns
    an empty list when the sequence is shorter than ``ksize``.
    """
    if ksize < 1:
        raise ValueError(f"ksize must be >= 1, got {ksize}")
    chars = sequence.chars if isinstance(sequence, SymbolicSequence) else sequence
    return [chars[i : i + ksize] for i in range(len(chars) - ksize + 1)]
