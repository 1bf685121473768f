"""Multiclass probabilistic classifiers written against numpy.

Each estimator follows the scikit-learn API (``fit``/``predict``/
``predict_proba``, ``get_params``) and exposes ``classes_`` in sorted order;
probability columns follow that order. ``predict`` is always the argmax of
``predict_proba`` with ties resolved to the lowest class index.
"""
from __future__ import annotations

import numpy as np
from scipy.special import logsumexp
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.multiclass import check_classification_targets
from sklearn.utils.validation import check_is_fitted, validate_data

from .core import DimensionMismatch, EmptyTrainingSet, SingleClassTraining, ValidationError


def _check_train(estimator, X, y):
    try:
        X, y = validate_data(estimator, X, y, dtype=np.float64)
    except ValueError as exc:
        if "0 sample(s)" in str(exc):
            raise EmptyTrainingSet(str(exc)) from None
        raise
    check_classification_targets(y)
    classes, y_idx = np.unique(y, return_inverse=True)
    return X, classes, y_idx.reshape(-1)


def _check_test(estimator, X):
    try:
        return validate_data(estimator, X, dtype=np.float64, reset=False)
    except ValueError as exc:
        if "features" in str(exc):
            raise DimensionMismatch(str(exc)) from None
        raise


class _ProbaMixin:
    def predict(self, X):
        proba = self.predict_proba(X)
        return self.classes_[np.argmax(proba, axis=1)]


class KNNClassifier(_ProbaMixin, ClassifierMixin, BaseEstimator):
    """k-nearest neighbours with Euclidean distance on raw features.

    Class probability is the fraction of the ``n_neighbors`` nearest training
    rows carrying that class. Equal distances are ordered by training-row
    index, so results are fully deterministic.
    """

    def __init__(self, n_neighbors=5):
        self.n_neighbors = n_neighbors

    def fit(self, X, y):
        X, self.classes_, self._y = _check_train(self, X, y)
        if not 1 <= self.n_neighbors <= X.shape[0]:
            raise ValidationError(
                f"n_neighbors must be in [1, n_samples={X.shape[0]}], got {self.n_neighbors}"
            )
        self._X = X
        return self

    def kneighbors(self, X):
        """Indices of the nearest training rows, nearest first."""
        check_is_fitted(self, "_X")
        X = _check_test(self, X)
        out = np.empty((X.shape[0], self.n_neighbors), dtype=np.int64)
        for i, x in enumerate(X):
            diff = self._X - x
            # squared distance preserves the ordering and avoids sqrt rounding merging ranks
            d2 = np.einsum("ij,ij->i", diff, diff)
            out[i] = np.argsort(d2, kind="stable")[: self.n_neighbors]
        return out

    def predict_proba(self, X):
        neigh = self.kneighbors(X)
        n_classes = len(self.classes_)
        proba = np.zeros((neigh.shape[0], n_classes))
        for i, row in enumerate(neigh):
            proba[i] = np.bincount(self._y[row], minlength=n_classes) / self.n_neighbors
        return proba


def softmax(logits):
    z = logits - logits.max(axis=1, keepdims=True)
    np.exp(z, out=z)
    z /= z.sum(axis=1, keepdims=True)
    return z


def softmax_loss_grad(W, b, Z, Y, l2):
    """Mean cross-entropy plus ``l2/2 * ||W||^2`` and its gradient.

    Parameters
    ----------
    W : ndarray of shape (n_features, n_classes)
    b : ndarray of shape (n_classes,)
        Bias, not regularized.
    Z : ndarray of shape (n_samples, n_features)
    Y : ndarray of shape (n_samples, n_classes)
        One-hot targets.
    l2 : float

    Returns
    -------
    loss : float
    grad_W : ndarray
    grad_b : ndarray
    """
    logits = Z @ W + b
    log_p = logits - logsumexp(logits, axis=1, keepdims=True)
    n = Z.shape[0]
    loss = -np.sum(Y * log_p) / n + 0.5 * l2 * np.sum(W * W)
    resid = (np.exp(log_p) - Y) / n
    return loss, Z.T @ resid + l2 * W, resid.sum(axis=0)


class SoftmaxRegression(_ProbaMixin, ClassifierMixin, BaseEstimator):
    """Multinomial logistic regression fitted by full-batch gradient descent.

    Features are standardized with the training mean and standard deviation;
    zero-variance columns are mapped to 0. Weights start at zero, so the fit
    is deterministic.

    Parameters
    ----------
    l2 : float, default=1e-3
        Ridge penalty on the weights (bias excluded).
    lr : float, default=0.1
        Gradient-descent step size.
    epochs : int, default=500
        Number of full-batch updates.
    seed : int, default=0
        Kept for API symmetry; zero initialization uses no randomness.

    Attributes
    ----------
    coef_ : ndarray of shape (n_features, n_classes)
    intercept_ : ndarray of shape (n_classes,)
    loss_curve_ : list of float
        Objective before training and after every epoch.
    """

    def __init__(self, l2=1e-3, lr=0.1, epochs=500, seed=0):
        self.l2 = l2
        self.lr = lr
        self.epochs = epochs
        self.seed = seed

    def _standardize(self, X):
        return (X - self.mean_) * self.inv_scale_

    def fit(self, X, y):
        X, self.classes_, y_idx = _check_train(self, X, y)
        if len(self.classes_) < 2:
            raise SingleClassTraining("logistic regression needs at least 2 classes, got 1 class")
        if self.epochs < 0:
            raise ValidationError("epochs must be >= 0")
        self.mean_ = X.mean(axis=0)
        std = X.std(axis=0)
        self.inv_scale_ = np.divide(1.0, std, out=np.zeros_like(std), where=std > 0)
        Z = self._standardize(X)
        Y = np.eye(len(self.classes_))[y_idx]

        W = np.zeros((X.shape[1], len(self.classes_)))
        b = np.zeros(len(self.classes_))
        loss, gW, gb = softmax_loss_grad(W, b, Z, Y, self.l2)
        self.loss_curve_ = [loss]
        for _ in range(self.epochs):
            W -= self.lr * gW
            b -= self.lr * gb
            loss, gW, gb = softmax_loss_grad(W, b, Z, Y, self.l2)
            self.loss_curve_.append(loss)
        self.coef_ = W
        self.intercept_ = b
        return self

    def logits(self, X):
        """Class scores before the softmax, shape ``(n_samples, n_classes)``."""
        check_is_fitted(self, "coef_")
        X = _check_test(self, X)
        return self._standardize(X) @ self.coef_ + self.intercept_

    def predict_proba(self, X):
        return softmax(self.logits(X))


class GaussianNBClassifier(_ProbaMixin, ClassifierMixin, BaseEstimator):
    """Gaussian naive Bayes with empirical class priors.

    Per-class feature variances are floored at ``var_smoothing`` times the
    largest feature variance of the training data (or at ``var_smoothing``
    itself when every feature is constant).
    """

    def __init__(self, var_smoothing=1e-9):
        self.var_smoothing = var_smoothing

    def fit(self, X, y):
        X, self.classes_, y_idx = _check_train(self, X, y)
        if len(self.classes_) < 2:
            raise SingleClassTraining("naive Bayes needs at least 2 classes, got 1 class")
        if not self.var_smoothing > 0:
            raise ValidationError("var_smoothing must be > 0")
        n_classes = len(self.classes_)
        max_var = float(np.var(X, axis=0).max())
        self.epsilon_ = self.var_smoothing * (max_var if max_var > 0 else 1.0)
        self.theta_ = np.zeros((n_classes, X.shape[1]))
        self.var_ = np.zeros((n_classes, X.shape[1]))
        counts = np.bincount(y_idx, minlength=n_classes)
        for c in range(n_classes):
            Xc = X[y_idx == c]
            self.theta_[c] = Xc.mean(axis=0)
            self.var_[c] = np.maximum(Xc.var(axis=0), self.epsilon_)
        self.class_prior_ = counts / counts.sum()
        return self

    def joint_log_likelihood(self, X):
        check_is_fitted(self, "theta_")
        X = _check_test(self, X)
        jll = np.empty((X.shape[0], len(self.classes_)))
        for c in range(len(self.classes_)):
            norm = -0.5 * np.sum(np.log(2.0 * np.pi * self.var_[c]))
            quad = -0.5 * np.sum((X - self.theta_[c]) ** 2 / self.var_[c], axis=1)
            jll[:, c] = np.log(self.class_prior_[c]) + norm + quad
        return jll

    def predict_proba(self, X):
        jll = self.joint_log_likelihood(X)
        return np.exp(jll - logsumexp(jll, axis=1, keepdims=True))


def knn_fit_predict(train_X, train_y, test_X, k_neighbors=5):
    """Fit :class:`KNNClassifier` and return ``(labels, proba)`` for ``test_X``."""
    model = KNNClassifier(k_neighbors).fit(train_X, train_y)
    return model.predict(test_X), model.predict_proba(test_X)


def logreg_fit(train_X, train_y, l2=1e-3, lr=0.1, epochs=500, seed=0):
    return SoftmaxRegression(l2=l2, lr=lr, epochs=epochs, seed=seed).fit(train_X, train_y)


def gnb_fit_predict(train_X, train_y, test_X, var_smoothing=1e-9):
    model = GaussianNBClassifier(var_smoothing).fit(train_X, train_y)
    return model.predict(test_X), model.predict_proba(test_X)


CLASSIFIERS = {
    "knn": KNNClassifier,
    "logreg": SoftmaxRegression,
    "gnb": GaussianNBClassifier,
}
