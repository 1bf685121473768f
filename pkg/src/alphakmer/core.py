"""Domain types shared across the package.

All containers are immutable after construction. Numeric payloads are stored
as read-only float64 arrays so they can be shared between threads.
"""
from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np


class AlphaKmerError(Exception):
    """Base class for all package errors."""


class ValidationError(AlphaKmerError, ValueError):
    """Input data violates a structural invariant."""


class EmptySignal(ValidationError):
    pass


class NonFiniteValue(ValidationError):
    def __init__(self, signal_id, index):
        self.signal_id = signal_id
        self.index = index
        super().__init__(f"signal {signal_id!r} has a non-finite value at index {index}")


class LabelLengthMismatch(ValidationError):
    pass


class DuplicateId(ValidationError):
    pass


class DegenerateRange(AlphaKmerError, ValueError):
    """Equal-width discretization is undefined (max == min)."""


class AlphabetSizeMismatch(ValidationError):
    pass


class UnknownCharacter(ValidationError):
    pass


class MaskLengthMismatch(ValidationError):
    pass


class EmptyTrainingSet(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class SingleClassTraining(ValidationError):
    pass


def _frozen_array(values, dtype=np.float64):
    arr = np.array(values, dtype=dtype, copy=True).reshape(-1)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Signal:
    """A single-channel real-valued signal.

    Invariants (non-empty, finite) are checked by :func:`validate_dataset`,
    not at construction, so malformed inputs can still be reported.
    """

    id: str
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "id", str(self.id))
        object.__setattr__(self, "values", _frozen_array(self.values))

    def __len__(self):
        return self.values.shape[0]

    def __eq__(self, other):
        if not isinstance(other, Signal):
            return NotImplemented
        return self.id == other.id and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.id, self.values.tobytes()))


@dataclass(frozen=True, eq=False)
class TimeSeriesDataset:
    signals: tuple
    labels: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "signals", tuple(self.signals))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(str(lab) for lab in self.labels))

    @classmethod
    def from_arrays(cls, arrays, labels=None, ids=None):
        """Build a dataset from a list of 1-D arrays; ids default to ``s0, s1, ...``."""
        arrays = list(arrays)
        if ids is None:
            ids = [f"s{i}" for i in range(len(arrays))]
        signals = [Signal(i, a) for i, a in zip(ids, arrays)]
        return cls(signals, None if labels is None else list(labels))

    def __len__(self):
        return len(self.signals)

    @property
    def ids(self):
        return [s.id for s in self.signals]

    @property
    def arrays(self):
        return [s.values for s in self.signals]

    def subset(self, indices):
        indices = list(indices)
        signals = [self.signals[i] for i in indices]
        labels = None if self.labels is None else [self.labels[i] for i in indices]
        return TimeSeriesDataset(signals, labels)

    def __eq__(self, other):
        if not isinstance(other, TimeSeriesDataset):
            return NotImplemented
        return self.signals == other.signals and self.labels == other.labels

    def __hash__(self):
        return hash((self.signals, self.labels))


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple = tuple(string.ascii_uppercase)

    def __post_init__(self):
        symbols = tuple(self.symbols)
        object.__setattr__(self, "symbols", symbols)
        if len(symbols) < 2:
            raise ValidationError("alphabet needs at least 2 symbols")
        if any(len(s) != 1 for s in symbols):
            raise ValidationError("alphabet symbols must be single characters")
        if len(set(symbols)) != len(symbols):
            raise ValidationError("alphabet symbols must be distinct")
        object.__setattr__(self, "_positions", {s: i for i, s in enumerate(symbols)})

    @classmethod
    def of_size(cls, size):
        """First ``size`` uppercase letters (2 <= size <= 26)."""
        if not 2 <= size <= 26:
            raise ValidationError(f"alphabet size must be in [2, 26], got {size}")
        return cls(tuple(string.ascii_uppercase[:size]))

    def __len__(self):
        return len(self.symbols)

    def __contains__(self, ch):
        return ch in self._positions

    def position(self, ch):
        try:
            return self._positions[ch]
        except KeyError:
            raise UnknownCharacter(f"character {ch!r} is not in the alphabet") from None

    def positions(self, chars):
        """Integer positions of every character of ``chars`` as an int64 array."""
        return np.fromiter((self.position(c) for c in chars), dtype=np.int64, count=len(chars))


@dataclass(frozen=True, eq=False)
class RangeBounds:
    """Fitted equal-width grid: ``num_ranges + 1`` ascending boundaries."""

    bounds: np.ndarray
    interval: float

    def __post_init__(self):
        object.__setattr__(self, "bounds", _frozen_array(self.bounds))
        object.__setattr__(self, "interval", float(self.interval))

    @property
    def num_ranges(self):
        return self.bounds.shape[0] - 1

    @property
    def minimum(self):
        return float(self.bounds[0])

    @property
    def maximum(self):
        return float(self.bounds[-1])

    def __eq__(self, other):
        if not isinstance(other, RangeBounds):
            return NotImplemented
        return np.array_equal(self.bounds, other.bounds) and self.interval == other.interval

    def to_dict(self):
        return {
            "num_ranges": self.num_ranges,
            "interval": float(self.interval),
            "bounds": [float(b) for b in self.bounds],
        }

    @classmethod
    def from_dict(cls, data):
        bounds = [float(b) for b in data["bounds"]]
        if "num_ranges" in data and int(data["num_ranges"]) != len(bounds) - 1:
            raise ValidationError("num_ranges does not match the number of bounds")
        return cls(bounds, float(data["interval"]))


@dataclass(frozen=True)
class SymbolicSequence:
    id: str
    chars: str


@dataclass(frozen=True, eq=False)
class KmerSpectrum:
    counts: np.ndarray
    k: int
    sequence_length: int

    def __post_init__(self):
        object.__setattr__(self, "counts", _frozen_array(self.counts, dtype=np.int64))

    @property
    def dim(self):
        return self.counts.shape[0]

    def nonzero(self):
        """``(index, count)`` pairs for every non-zero entry, ascending by index."""
        idx = np.flatnonzero(self.counts)
        return [(int(i), int(self.counts[i])) for i in idx]

    def __eq__(self, other):
        if not isinstance(other, KmerSpectrum):
            return NotImplemented
        return (
            self.k == other.k
            and self.sequence_length == other.sequence_length
            and np.array_equal(self.counts, other.counts)
        )


def validate_dataset(dataset: TimeSeriesDataset) -> TimeSeriesDataset:
    """Check dataset invariants and return the dataset unchanged.

    Raises
    ------
    EmptySignal, NonFiniteValue, LabelLengthMismatch, DuplicateId
    """
    if len(dataset.signals) == 0:
        raise EmptySignal("dataset contains no signals")
    seen = set()
    for sig in dataset.signals:
        if sig.id in seen:
            raise DuplicateId(f"duplicate signal id {sig.id!r}")
        seen.add(sig.id)
        if sig.values.shape[0] == 0:
            raise EmptySignal(f"signal {sig.id!r} has no samples")
        bad = np.flatnonzero(~np.isfinite(sig.values))
        if bad.size:
            raise NonFiniteValue(sig.id, int(bad[0]))
    if dataset.labels is not None and len(dataset.labels) != len(dataset.signals):
        raise LabelLengthMismatch(
            f"{len(dataset.signals)} signals but {len(dataset.labels)} labels"
        )
    return dataset


def class_index(labels: Sequence[str]):
    """Sorted unique labels and the integer class of every label."""
    classes = sorted(set(labels))
    lookup = {c: i for i, c in enumerate(classes)}
    return classes, np.array([lookup[lab] for lab in labels], dtype=np.int64)
