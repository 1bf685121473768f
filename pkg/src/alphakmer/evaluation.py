"""Repeated random-split evaluation, metrics and significance testing."""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional

import numpy as np
from joblib import Parallel, delayed
from scipy import stats
from sklearn.base import clone

from .core import ValidationError, class_index
from .spectrum import EmbeddingMatrix

METRIC_NAMES = (
    "accuracy",
    "precision_weighted",
    "recall_weighted",
    "f1_weighted",
    "f1_macro",
    "f1_micro",
    "roc_auc_ovr_macro",
    "train_runtime_seconds",
)


class TooFewSamples(ValidationError):
    pass


class ProbabilityShapeMismatch(ValidationError):
    pass


class InsufficientSamples(ValidationError):
    pass


@dataclass(frozen=True)
class SplitSpec:
    train_frac: float = 0.6
    val_frac: float = 0.1
    test_frac: float = 0.3
    seed: int = 0
    stratified: bool = False

    def __post_init__(self):
        fracs = (self.train_frac, self.val_frac, self.test_frac)
        if any(f < 0 for f in fracs) or abs(sum(fracs) - 1.0) > 1e-9:
            raise ValidationError(f"split fractions must be >= 0 and sum to 1, got {fracs}")
        if self.train_frac <= 0 or self.test_frac <= 0:
            raise ValidationError("train and test fractions must be positive")

    def replace(self, **changes):
        return SplitSpec(**{**asdict(self), **changes})


def _round_half_up(x):
    return int(math.floor(x + 0.5))


def split_sizes(n, spec):
    """``(train, val, test)`` sizes; test takes the rounding remainder."""
    if n < 4:
        raise TooFewSamples(f"need at least 4 samples to split, got {n}")
    n_train = max(1, _round_half_up(n * spec.train_frac))
    n_val = max(1, _round_half_up(n * spec.val_frac)) if spec.val_frac > 0 else 0
    n_test = n - n_train - n_val
    if n_test < 1:
        raise TooFewSamples(f"{n} samples leave no test set for fractions {spec}")
    return n_train, n_val, n_test


def split(n, labels=None, spec: Optional[SplitSpec] = None):
    """Seeded train/validation/test partition of ``range(n)``.

    Unstratified splits slice a seeded permutation into the sizes from
    :func:`split_sizes`. Stratified splits apportion each class separately
    (singleton classes go to train), so totals can differ slightly from the
    unstratified sizes.

    Returns
    -------
    train, val, test : ndarray of int
        Sorted, disjoint index arrays covering ``0..n-1``.
    """
    spec = SplitSpec() if spec is None else spec
    n_train, n_val, _ = split_sizes(n, spec)
    rng = np.random.default_rng(spec.seed)

    if not spec.stratified:
        perm = rng.permutation(n)
        parts = perm[:n_train], perm[n_train : n_train + n_val], perm[n_train + n_val :]
        return tuple(np.sort(p) for p in parts)

    if labels is None or len(labels) != n:
        raise ValidationError("stratified split needs one label per sample")
    _, y = class_index([str(v) for v in labels])
    train, val, test = [], [], []
    for c in np.unique(y):
        members = rng.permutation(np.flatnonzero(y == c))
        m = members.shape[0]
        if m == 1:
            train.extend(members)
            continue
        c_train = max(1, _round_half_up(m * spec.train_frac))
        c_val = _round_half_up(m * spec.val_frac) if spec.val_frac > 0 else 0
        c_val = min(c_val, m - c_train - 1)
        c_val = max(c_val, 0)
        c_train = min(c_train, m - c_val - 1)
        train.extend(members[:c_train])
        val.extend(members[c_train : c_train + c_val])
        test.extend(members[c_train + c_val :])
    if spec.val_frac > 0 and not val:
        # tiny classes left validation empty: borrow one sample, preferring
        # a training class that keeps a member, then the test split
        counts = np.bincount(y[train])
        donor = int(np.argmax(counts))
        if counts[donor] >= 2:
            pos = max(i for i, t in enumerate(train) if y[t] == donor)
            val.append(train.pop(pos))
        elif len(test) >= 2:
            val.append(test.pop())
        elif len(train) >= 2:
            val.append(train.pop())
        else:
            raise TooFewSamples("not enough samples for a stratified validation split")
    return tuple(np.sort(np.asarray(p, dtype=np.int64)) for p in (train, val, test))


def confusion_matrix(y_true, y_pred, n_classes):
    cm = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(cm, (y_true, y_pred), 1)
    return cm


def binary_auc(scores, positive):
    """Mann-Whitney AUC; tied scores count 0.5. NaN without both classes."""
    scores = np.asarray(scores, dtype=np.float64)
    positive = np.asarray(positive, dtype=bool)
    n_pos = int(positive.sum())
    n_neg = positive.shape[0] - n_pos
    if n_pos == 0 or n_neg == 0:
        return float("nan")
    ranks = stats.rankdata(scores)
    u = ranks[positive].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def _safe_div(num, den):
    return np.divide(num, den, out=np.zeros_like(num, dtype=np.float64), where=den > 0)


def metrics(y_true, y_pred, y_proba, class_count) -> Dict[str, float]:
    """Classification metrics for integer labels in ``[0, class_count)``.

    Averages run over the classes occurring in ``y_true`` or ``y_pred``; 0/0
    ratios count as 0. ROC-AUC is the unweighted one-vs-rest mean over
    classes that have both positives and negatives in ``y_true``.
    """
    y_true = np.asarray(y_true, dtype=np.int64).reshape(-1)
    y_pred = np.asarray(y_pred, dtype=np.int64).reshape(-1)
    y_proba = np.asarray(y_proba, dtype=np.float64)
    n = y_true.shape[0]
    if y_pred.shape[0] != n:
        raise ValidationError("y_true and y_pred lengths differ")
    if y_proba.shape != (n, class_count):
        raise ProbabilityShapeMismatch(
            f"expected probabilities of shape {(n, class_count)}, got {y_proba.shape}"
        )
    if n == 0:
        raise ValidationError("cannot score an empty prediction set")
    for arr in (y_true, y_pred):
        if arr.min() < 0 or arr.max() >= class_count:
            raise ValidationError("labels must lie in [0, class_count)")

    cm = confusion_matrix(y_true, y_pred, class_count)
    tp = np.diag(cm).astype(np.float64)
    pred_tot = cm.sum(axis=0).astype(np.float64)
    support = cm.sum(axis=1).astype(np.float64)
    precision = _safe_div(tp, pred_tot)
    recall = _safe_div(tp, support)
    f1 = _safe_div(2 * precision * recall, precision + recall)

    present = (support > 0) | (pred_tot > 0)
    weights = support / n

    micro_p = tp.sum() / pred_tot.sum()
    micro_r = tp.sum() / support.sum()
    if micro_p == micro_r:
        # always the case for single-label input; keeps f1_micro == accuracy bit-exact
        micro_f1 = micro_p
    else:
        micro_f1 = 2 * micro_p * micro_r / (micro_p + micro_r) if micro_p + micro_r > 0 else 0.0

    aucs = [
        binary_auc(y_proba[:, c], y_true == c)
        for c in range(class_count)
        if 0 < support[c] < n
    ]
    return {
        "accuracy": float(tp.sum() / n),
        "precision_weighted": float(np.sum(weights * precision)),
        "recall_weighted": float(np.sum(weights * recall)),
        "f1_weighted": float(np.sum(weights * f1)),
        "f1_macro": float(f1[present].mean()),
        "f1_micro": float(micro_f1),
        "roc_auc_ovr_macro": float(np.mean(aucs)) if aucs else float("nan"),
    }


def sample_sd(values):
    """Sample SD (ddof=1); exactly 0 when all values are equal or only one is given."""
    values = np.asarray(values, dtype=np.float64)
    if values.size < 2 or np.all(values == values[0]):
        return 0.0
    return float(np.std(values, ddof=1))


@dataclass
class EvalReport:
    repetitions: int
    summary: Dict[str, Dict[str, Dict[str, float]]]
    runs: List[tuple] = field(default_factory=list)
    classes: List[str] = field(default_factory=list)

    def mean(self, classifier, metric):
        return self.summary[classifier][metric]["mean"]

    def sd(self, classifier, metric):
        return self.summary[classifier][metric]["sd"]

    def values(self, classifier, metric):
        return [v for r, c, m, v in self.runs if c == classifier and m == metric]

    def to_dict(self):
        return {
            "repetitions": self.repetitions,
            "classes": list(self.classes),
            "metrics": list(METRIC_NAMES),
            "classifiers": self.summary,
        }


def _rows(X, idx):
    if isinstance(X, np.ndarray):
        return X[idx]
    return [X[i] for i in idx]


def _one_run(r, X, y, n_classes, classifiers, spec):
    train, _val, test = split(len(y), y, spec.replace(seed=spec.seed + r))
    X_train, X_test = _rows(X, train), _rows(X, test)
    out = []
    for name, est in classifiers.items():
        model = clone(est)
        t0 = time.perf_counter()
        model.fit(X_train, y[train])
        runtime = time.perf_counter() - t0
        proba = np.zeros((len(test), n_classes))
        proba[:, np.asarray(model.classes_, dtype=np.int64)] = model.predict_proba(X_test)
        pred = np.argmax(proba, axis=1)
        rec = metrics(y[test], pred, proba, n_classes)
        rec["train_runtime_seconds"] = runtime
        out.extend((r, name, m, rec[m]) for m in METRIC_NAMES)
    return out


def run_experiment(
    embedding,
    labels,
    classifiers,
    repetitions: int = 100,
    base_seed: int = 42,
    split_spec: Optional[SplitSpec] = None,
    n_jobs: Optional[int] = None,
) -> EvalReport:
    """Fit and score every classifier on ``repetitions`` random splits.

    Repetition ``r`` splits with seed ``base_seed + r``. The validation split
    is drawn but left unused. Results do not depend on ``n_jobs``, apart
    from the wall-clock runtime field. Runs where a metric is undefined (NaN
    ROC-AUC on a single-class test split) are left out of that metric's mean
    and SD; ``summary[clf][metric]["n"]`` counts the runs that were used.

    Parameters
    ----------
    embedding : EmbeddingMatrix, ndarray, or sequence of samples
        A non-array sequence (e.g. raw signals) is passed to the estimators
        as a list, which suits pipelines that embed internally.
    labels : sequence of str
        Class labels; integer classes are assigned in sorted label order.
    classifiers : dict of name -> estimator
        Unfitted estimators; each repetition fits a fresh clone.
    """
    if repetitions < 1:
        raise ValidationError("repetitions must be >= 1")
    if labels is None:
        raise ValidationError("evaluation needs labels")
    X = embedding.toarray() if isinstance(embedding, EmbeddingMatrix) else embedding
    if len(X) != len(labels):
        raise ValidationError(f"{len(X)} samples but {len(labels)} labels")
    classes, y = class_index([str(v) for v in labels])
    spec = SplitSpec() if split_spec is None else split_spec
    spec = spec.replace(seed=base_seed)

    args = (X, y, len(classes), classifiers, spec)
    if n_jobs in (None, 1):
        results = [_one_run(r, *args) for r in range(repetitions)]
    else:
        results = Parallel(n_jobs=n_jobs)(delayed(_one_run)(r, *args) for r in range(repetitions))
    runs = [row for chunk in results for row in chunk]

    summary = {}
    for name in classifiers:
        summary[name] = {}
        for m in METRIC_NAMES:
            vals = [v for _, c, mm, v in runs if c == name and mm == m]
            # a single-class test split leaves ROC-AUC undefined for that run
            defined = [v for v in vals if not math.isnan(v)]
            summary[name][m] = {
                "mean": float(np.mean(defined)) if defined else float("nan"),
                "sd": sample_sd(defined) if defined else float("nan"),
                "n": len(defined),
            }
    return EvalReport(repetitions, summary, runs, classes)


def _t_sf_two_sided(t, df):
    return float(2.0 * stats.t.sf(abs(t), df))


def t_test(sample_a, sample_b):
    """Welch two-sample t-test.

    Returns ``(t, p)`` with a two-sided p-value. When both samples have zero
    variance, ``p`` is 1 for equal means and 0 otherwise.
    """
    a = np.asarray(sample_a, dtype=np.float64).reshape(-1)
    b = np.asarray(sample_b, dtype=np.float64).reshape(-1)
    if a.size < 2 or b.size < 2:
        raise InsufficientSamples("each sample needs at least 2 values")
    ma, mb = a.mean(), b.mean()
    va, vb = sample_sd(a) ** 2, sample_sd(b) ** 2
    se2 = va / a.size + vb / b.size
    if se2 == 0:
        if ma == mb:
            return 0.0, 1.0
        return math.copysign(math.inf, ma - mb), 0.0
    t = float((ma - mb) / math.sqrt(se2))
    df = se2**2 / ((va / a.size) ** 2 / (a.size - 1) + (vb / b.size) ** 2 / (b.size - 1))
    return t, _t_sf_two_sided(t, df)


def welch_df(sample_a, sample_b):
    """Welch-Satterthwaite degrees of freedom."""
    a = np.asarray(sample_a, dtype=np.float64)
    b = np.asarray(sample_b, dtype=np.float64)
    qa = np.var(a, ddof=1) / a.size
    qb = np.var(b, ddof=1) / b.size
    return float((qa + qb) ** 2 / (qa**2 / (a.size - 1) + qb**2 / (b.size - 1)))

