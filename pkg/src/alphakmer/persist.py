"""File formats: signals CSV, sequences CSV, bounds/manifest JSON, sparse
spectrum triplets, evaluation report and per-run metrics.

Floats are written with ``repr`` so every value round-trips exactly.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .core import (
    AlphaKmerError,
    Alphabet,
    RangeBounds,
    Signal,
    SymbolicSequence,
    TimeSeriesDataset,
    validate_dataset,
)


class ParseError(AlphaKmerError, ValueError):
    def __init__(self, message, line=None, column=None, path=None):
        self.line = line
        self.column = column
        self.path = path
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


def _fmt(x):
    return repr(float(x))


def write_signals_csv(dataset: TimeSeriesDataset, path):
    """One line per signal: ``id,label,v1,...,vn`` (label empty if unlabeled)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for i, sig in enumerate(dataset.signals):
            label = "" if dataset.labels is None else dataset.labels[i]
            w.writerow([sig.id, label, *(_fmt(v) for v in sig.values)])


def load_dataset(path) -> TimeSeriesDataset:
    """Parse a signals CSV and validate it.

    Raises
    ------
    ParseError
        Empty file, short rows, non-numeric cells or partially missing labels.
    ValidationError
        From :func:`validate_dataset`.
    """
    signals, labels = [], []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) < 2:
                raise ParseError("expected at least id and label columns", lineno, path=path)
            values = []
            for col, cell in enumerate(row[2:], start=3):
                try:
                    values.append(float(cell))
                except ValueError:
                    raise ParseError(f"non-numeric value {cell!r}", lineno, col, path) from None
            signals.append(Signal(row[0], values))
            labels.append(row[1])
    if not signals:
        raise ParseError("no signals found (empty file)", path=path)
    if all(lab == "" for lab in labels):
        labels = None
    elif any(lab == "" for lab in labels):
        missing = labels.index("") + 1
        raise ParseError("label missing while other rows are labeled", missing, 2, path)
    return validate_dataset(TimeSeriesDataset(signals, labels))


def write_sequences_csv(sequences, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "sequence"])
        for seq in sequences:
            w.writerow([seq.id, seq.chars])


def read_sequences_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ["id", "sequence"]:
        raise ParseError("missing 'id,sequence' header", 1, path=path)
    return [SymbolicSequence(r[0], r[1]) for r in rows[1:] if r]


def _dump_json(obj, path):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, allow_nan=True)
        fh.write("\n")


def write_bounds_json(bounds: RangeBounds, alphabet: Alphabet, path, **extra):
    _dump_json({"alphabet": "".join(alphabet.symbols), **bounds.to_dict(), **extra}, path)


def read_bounds_json(path):
    with open(path) as fh:
        data = json.load(fh)
    return RangeBounds.from_dict(data), Alphabet(tuple(data["alphabet"]))


def write_spectrum(embedding, bounds, alphabet, triplets_path, manifest_path):
    """Sparse ``signal_id,kmer_index,count`` rows plus a JSON manifest.

    The manifest lists every signal id in order, so all-zero spectra are
    still recoverable from it.
    """
    with open(triplets_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["signal_id", "kmer_index", "count"])
        for sid, idx, count in embedding.triplets():
            w.writerow([sid, idx, count])
    manifest = {
        "alphabet": "".join(alphabet.symbols),
        "ksize": embedding.ksize,
        "dim": embedding.dim,
        "signals": list(embedding.ids),
        "sequence_lengths": [r.sequence_length for r in embedding.rows],
        "bounds": bounds.to_dict(),
        "triplets": Path(triplets_path).name,
    }
    _dump_json(manifest, manifest_path)


def read_spectrum(triplets_path, manifest_path):
    """Dense ``(n_signals, dim)`` int64 matrix and the manifest dict."""
    with open(manifest_path) as fh:
        manifest = json.load(fh)
    ids = manifest["signals"]
    row_of = {sid: i for i, sid in enumerate(ids)}
    dense = np.zeros((len(ids), int(manifest["dim"])), dtype=np.int64)
    with open(triplets_path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["signal_id", "kmer_index", "count"]:
            raise ParseError("missing 'signal_id,kmer_index,count' header", 1, path=triplets_path)
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                dense[row_of[row[0]], int(row[1])] = int(row[2])
            except (KeyError, ValueError, IndexError) as exc:
                raise ParseError(f"bad triplet {row!r}: {exc}", lineno, path=triplets_path) from None
    return dense, manifest


def write_report_json(report, path, config=None):
    data = report.to_dict()
    if config is not None:
        data["config"] = config
    _dump_json(data, path)


def write_runs_csv(report, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["run", "classifier", "metric", "value"])
        for run, clf, metric, value in report.runs:
            w.writerow([run, clf, metric, _fmt(value)])


def read_runs_csv(path):
    """List of ``(run, classifier, metric, value)`` tuples."""
    out = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["run", "classifier", "metric", "value"]:
            raise ParseError("missing 'run,classifier,metric,value' header", 1, path=path)
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                out.append((int(row[0]), row[1], row[2], float(row[3])))
            except (ValueError, IndexError):
                raise ParseError(f"bad row {row!r}", lineno, path=path) from None
    return out
