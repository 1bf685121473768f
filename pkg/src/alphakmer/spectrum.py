"""k-mer count spectra and the dataset embedding pipeline."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .core import (
    Alphabet,
    KmerSpectrum,
    MaskLengthMismatch,
    RangeBounds,
    Signal,
    SymbolicSequence,
    TimeSeriesDataset,
    ValidationError,
    validate_dataset,
)
from .encode import map_signal
from .ranges import compute_ranges, flatten
from .validation import check_ksize, check_signals, check_spectrum_dim

FIT_SCOPES = ("all_data", "train_only")


def kmer_index(kmer: str, alphabet: Alphabet) -> int:
    """Lexicographic rank of ``kmer`` among all ``|A|^k`` strings over ``alphabet``."""
    base = len(alphabet)
    idx = 0
    for ch in kmer:
        idx = idx * base + alphabet.position(ch)
    return idx


def kmer_from_index(index: int, ksize: int, alphabet: Alphabet) -> str:
    base = len(alphabet)
    chars = []
    for _ in range(ksize):
        index, r = divmod(index, base)
        chars.append(alphabet.symbols[r])
    return "".join(reversed(chars))


def _window_indices(positions: np.ndarray, ksize: int, base: int) -> np.ndarray:
    n = positions.shape[0] - ksize + 1
    if n <= 0:
        return np.empty(0, dtype=np.int64)
    idx = np.zeros(n, dtype=np.int64)
    for j in range(ksize):
        idx = idx * base + positions[j : j + n]
    return idx


def build_spectrum(sequence, ksize: int, alphabet: Alphabet) -> KmerSpectrum:
    """Count every overlapping k-mer of ``sequence`` into a dense vector.

    Entry ``kmer_index(m)`` holds the number of occurrences of ``m``.
    """
    ksize = check_ksize(ksize)
    dim = check_spectrum_dim(len(alphabet), ksize)
    chars = sequence.chars if isinstance(sequence, SymbolicSequence) else sequence
    positions = alphabet.positions(chars)
    counts = np.bincount(_window_indices(positions, ksize, len(alphabet)), minlength=dim)
    return KmerSpectrum(counts, ksize, len(chars))


@dataclass(frozen=True)
class EmbeddingMatrix:
    rows: Tuple[KmerSpectrum, ...]
    ids: Tuple[str, ...]
    dim: int

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "ids", tuple(self.ids))
        if len(self.rows) != len(self.ids):
            raise ValidationError("rows and ids must be aligned")
        for row in self.rows:
            if row.dim != self.dim:
                raise ValidationError(f"row of dimension {row.dim}, expected {self.dim}")

    def __len__(self):
        return len(self.rows)

    @property
    def ksize(self):
        return self.rows[0].k if self.rows else None

    def toarray(self) -> np.ndarray:
        if not self.rows:
            return np.zeros((0, self.dim), dtype=np.int64)
        return np.vstack([r.counts for r in self.rows])

    def triplets(self):
        """``(signal_id, kmer_index, count)`` for every non-zero entry, row-major."""
        for sid, row in zip(self.ids, self.rows):
            for idx, count in row.nonzero():
                yield sid, idx, count


def generate_embedding(
    dataset: TimeSeriesDataset,
    alphabet: Optional[Alphabet] = None,
    ksize: int = 3,
    fit_scope: str = "all_data",
    train_mask=None,
) -> Tuple[EmbeddingMatrix, RangeBounds, List[SymbolicSequence]]:
    """Flatten, fit the grid, map every signal and count its k-mers.

    With ``fit_scope="train_only"`` the grid is fitted on the signals selected
    by ``train_mask`` and applied to all signals (out-of-span values clamp).

    Returns
    -------
    embedding : EmbeddingMatrix
        One spectrum per signal, in dataset order.
    bounds : RangeBounds
    sequences : list of SymbolicSequence
    """
    alphabet = Alphabet() if alphabet is None else alphabet
    ksize = check_ksize(ksize)
    dim = check_spectrum_dim(len(alphabet), ksize)
    validate_dataset(dataset)
    if fit_scope not in FIT_SCOPES:
        raise ValidationError(f"fit_scope must be one of {FIT_SCOPES}, got {fit_scope!r}")

    if fit_scope == "train_only":
        if train_mask is None:
            raise ValidationError("fit_scope='train_only' requires train_mask")
        mask = np.asarray(train_mask, dtype=bool).reshape(-1)
        if mask.shape[0] != len(dataset):
            raise MaskLengthMismatch(
                f"mask has {mask.shape[0]} entries for {len(dataset)} signals"
            )
        if not mask.any():
            raise ValidationError("train_mask selects no signals")
        fit_on = dataset.subset(np.flatnonzero(mask))
    else:
        fit_on = dataset

    bounds = compute_ranges(flatten(fit_on), len(alphabet))
    sequences = [map_signal(s, bounds, alphabet) for s in dataset.signals]
    rows = [build_spectrum(seq, ksize, alphabet) for seq in sequences]
    return EmbeddingMatrix(rows, dataset.ids, dim), bounds, sequences


class SymbolicEncoder(TransformerMixin, BaseEstimator):
    """Map signals to letter strings over an equal-width grid.

    Parameters
    ----------
    alphabet_size : int, default=26
        Number of ranges; symbols are the first ``alphabet_size`` uppercase
        letters.

    Attributes
    ----------
    bounds_ : RangeBounds
        Grid fitted on the concatenation of all signals passed to ``fit``.
    """

    def __init__(self, alphabet_size=26):
        self.alphabet_size = alphabet_size

    def fit(self, X, y=None):
        arrays = check_signals(X)
        self.alphabet_ = Alphabet.of_size(self.alphabet_size)
        self.bounds_ = compute_ranges(np.concatenate(arrays), self.alphabet_size)
        return self

    def transform(self, X):
        check_is_fitted(self, "bounds_")
        arrays = check_signals(X)
        return [
            map_signal(Signal(str(i), a), self.bounds_, self.alphabet_).chars
            for i, a in enumerate(arrays)
        ]


class KmerSpectrumEmbedder(TransformerMixin, BaseEstimator):
    """Signals to dense ``|A|^k`` k-mer count vectors.

    Fitting learns only the discretization grid, so placing this in a
    :class:`sklearn.pipeline.Pipeline` fits the grid on training signals
    alone.

    Parameters
    ----------
    alphabet_size : int, default=26
    ksize : int, default=3

    Examples
    --------
    >>> emb = KmerSpectrumEmbedder(alphabet_size=4, ksize=2)
    >>> emb.fit_transform([[0.0, 1.0, 2.0, 3.0, 4.0]]).sum()
    4
    """

    def __init__(self, alphabet_size=26, ksize=3):
        self.alphabet_size = alphabet_size
        self.ksize = ksize

    def fit(self, X, y=None):
        check_ksize(self.ksize)
        self.encoder_ = SymbolicEncoder(self.alphabet_size).fit(X)
        self.bounds_ = self.encoder_.bounds_
        self.n_features_out_ = check_spectrum_dim(self.alphabet_size, self.ksize)
        return self

    def transform(self, X):
        check_is_fitted(self, "encoder_")
        alphabet = self.encoder_.alphabet_
        seqs = self.encoder_.transform(X)
        return np.vstack([build_spectrum(s, self.ksize, alphabet).counts for s in seqs])

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "encoder_")
        letters = self.encoder_.alphabet_.symbols
        return np.array(
            ["".join(p) for p in itertools.product(letters, repeat=self.ksize)], dtype=object
        )
