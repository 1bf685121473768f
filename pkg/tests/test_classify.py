import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.pipeline import make_pipeline

from alphakmer.classify import (
    GaussianNBClassifier,
    KNNClassifier,
    SoftmaxRegression,
    gnb_fit_predict,
    knn_fit_predict,
    logreg_fit,
    softmax_loss_grad,
)
from alphakmer.core import DimensionMismatch, EmptyTrainingSet, SingleClassTraining
from alphakmer.spectrum import KmerSpectrumEmbedder

from oracles import brute_knn

ALL = [KNNClassifier, SoftmaxRegression, GaussianNBClassifier]


def blobs(rng, n_per=20, centers=((-5, -5), (5, 5)), radius=1.0):
    X, y = [], []
    for c, center in enumerate(centers):
        ang = rng.uniform(0, 2 * np.pi, n_per)
        r = radius * np.sqrt(rng.uniform(0, 1, n_per))
        X.append(np.c_[center[0] + r * np.cos(ang), center[1] + r * np.sin(ang)])
        y += [c] * n_per
    return np.vstack(X), np.array(y)


class TestKNN:
    def test_nearest_point(self):
        labels, proba = knn_fit_predict([[0, 0], [10, 10]], [0, 1], [[0.1, 0.1]], 1)
        assert labels.tolist() == [0]
        assert proba.tolist() == [[1.0, 0.0]]

    def test_equidistant_tie_goes_to_lowest_class(self):
        labels, proba = knn_fit_predict([[0, 0], [2, 0]], [0, 1], [[1, 0]], 2)
        assert proba.tolist() == [[0.5, 0.5]]
        assert labels.tolist() == [0]

    def test_distance_tie_broken_by_training_index(self):
        # both rows at distance 1; row 0 (class 1) wins the single slot
        model = KNNClassifier(1).fit([[1, 0], [-1, 0]], [1, 0])
        assert model.kneighbors([[0, 0]]).tolist() == [[0, 1][:1]]
        assert model.predict([[0, 0]]).tolist() == [1]

    def test_matches_exhaustive_sort_oracle(self, rng):
        X = rng.normal(size=(30, 4))
        y = rng.integers(0, 3, 30)
        T = rng.normal(size=(10, 4))
        _, proba = knn_fit_predict(X, y, T, 5)
        for row, t in zip(proba, T):
            np.testing.assert_allclose(row, brute_knn(X, y, t, 5, 3), atol=1e-12)

    def test_errors(self):
        with pytest.raises(EmptyTrainingSet):
            KNNClassifier(1).fit(np.zeros((0, 2)), [])
        with pytest.raises(DimensionMismatch):
            KNNClassifier(1).fit([[0, 0]], [0]).predict([[0, 0, 0]])
        with pytest.raises(ValueError):
            KNNClassifier(3).fit([[0, 0]], [0])

    def test_string_labels(self):
        model = KNNClassifier(1).fit([[0.0], [5.0]], ["male", "female"])
        assert model.classes_.tolist() == ["female", "male"]
        assert model.predict([[0.2]]).tolist() == ["male"]


class TestSoftmaxRegression:
    def test_separable_blobs(self, rng):
        X, y = blobs(rng)
        model = logreg_fit(X, y)
        assert model.score(X, y) == 1.0

    def test_zero_epochs_uniform(self, rng):
        X = rng.normal(size=(9, 3))
        y = [0, 1, 2] * 3
        proba = SoftmaxRegression(epochs=0).fit(X, y).predict_proba(rng.normal(size=(5, 3)))
        np.testing.assert_allclose(proba, 1 / 3, atol=1e-15)

    def test_gradient_finite_differences(self, rng):
        Z = rng.normal(size=(4, 5))
        Y = np.eye(3)[[0, 1, 2, 1]]
        W = rng.normal(size=(5, 3))
        b = rng.normal(size=3)
        l2 = 0.3
        _, gW, gb = softmax_loss_grad(W, b, Z, Y, l2)
        h = 1e-5
        num_W = np.zeros_like(W)
        for idx in np.ndindex(W.shape):
            Wp, Wm = W.copy(), W.copy()
            Wp[idx] += h
            Wm[idx] -= h
            num_W[idx] = (softmax_loss_grad(Wp, b, Z, Y, l2)[0] - softmax_loss_grad(Wm, b, Z, Y, l2)[0]) / (2 * h)
        num_b = np.zeros_like(b)
        for j in range(3):
            bp, bm = b.copy(), b.copy()
            bp[j] += h
            bm[j] -= h
            num_b[j] = (softmax_loss_grad(W, bp, Z, Y, l2)[0] - softmax_loss_grad(W, bm, Z, Y, l2)[0]) / (2 * h)
        assert np.max(np.abs(gW - num_W)) < 1e-5
        assert np.max(np.abs(gb - num_b)) < 1e-5

    def test_loss_non_increasing_small_lr(self, rng):
        for _ in range(10):
            X = rng.normal(size=(20, 4))
            y = rng.integers(0, 3, 20)
            y[:3] = [0, 1, 2]
            curve = SoftmaxRegression(lr=1e-3, epochs=200).fit(X, y).loss_curve_
            assert np.all(np.diff(curve) <= 1e-15)

    def test_constant_column_passthrough(self, rng):
        X = np.c_[rng.normal(size=10), np.full(10, 7.0)]
        y = [0, 1] * 5
        model = SoftmaxRegression().fit(X, y)
        assert model.inv_scale_[1] == 0.0
        assert np.all(np.isfinite(model.coef_))

    def test_single_class(self):
        with pytest.raises(SingleClassTraining):
            SoftmaxRegression().fit([[0.0], [1.0]], [1, 1])

    def test_deterministic(self, rng):
        X, y = blobs(rng)
        a = SoftmaxRegression(seed=1).fit(X, y).coef_
        b = SoftmaxRegression(seed=1).fit(X, y).coef_
        assert np.array_equal(a, b)


class TestGaussianNB:
    def test_hand_computed_posterior(self):
        # class 0: {0, 2} -> mean 1, var 1; class 1: {3, 7} -> mean 5, var 4
        X = [[0.0], [2.0], [3.0], [7.0]]
        y = [0, 0, 1, 1]
        p0 = math.exp(-0.5 * (2 - 1) ** 2 / 1) / math.sqrt(2 * math.pi * 1)
        p1 = math.exp(-0.5 * (2 - 5) ** 2 / 4) / math.sqrt(2 * math.pi * 4)
        _, proba = gnb_fit_predict(X, y, [[2.0]])
        assert proba[0, 0] == pytest.approx(p0 / (p0 + p1), rel=1e-9)

    def test_separated_means(self):
        X = [[0.0], [1.0], [2.0], [10.0], [11.0], [12.0]]
        y = [0, 0, 0, 1, 1, 1]
        labels, proba = gnb_fit_predict(X, y, [[1.0]])
        assert labels.tolist() == [0]
        assert proba[0, 0] > 0.99

    def test_identical_distributions_give_priors(self):
        X = [[0.0], [1.0], [0.0], [1.0], [0.0], [1.0]]
        y = [0, 0, 1, 1, 1, 1]
        _, proba = gnb_fit_predict(X, y, [[0.3], [5.0]])
        np.testing.assert_allclose(proba, [[1 / 3, 2 / 3]] * 2, atol=1e-12)

    def test_constant_column_is_floored(self):
        X = np.c_[[0.0, 1.0, 5.0, 6.0], [3.0, 3.0, 3.0, 3.0]]
        model = GaussianNBClassifier().fit(X, [0, 0, 1, 1])
        assert np.all(model.var_ > 0)
        proba = model.predict_proba([[0.5, 3.0], [5.5, 4.0]])
        assert np.all(np.isfinite(proba))

    def test_all_constant_features(self):
        model = GaussianNBClassifier().fit(np.ones((4, 2)), [0, 0, 1, 1])
        np.testing.assert_allclose(model.predict_proba([[1.0, 2.0]]), [[0.5, 0.5]])

    def test_single_class(self):
        with pytest.raises(SingleClassTraining):
            GaussianNBClassifier().fit([[0.0], [1.0]], [0, 0])


@pytest.mark.parametrize("cls", ALL)
def test_probability_rows_and_argmax(cls, rng):
    X = rng.normal(size=(30, 5))
    y = rng.integers(0, 4, 30)
    y[:4] = [0, 1, 2, 3]
    model = cls().fit(X, y)
    T = rng.normal(size=(25, 5)) * 3
    proba = model.predict_proba(T)
    assert proba.shape == (25, 4)
    assert np.all(proba >= 0) and np.all(proba <= 1)
    np.testing.assert_allclose(proba.sum(axis=1), 1.0, atol=1e-9)
    assert np.array_equal(model.predict(T), model.classes_[np.argmax(proba, axis=1)])


@pytest.mark.parametrize("cls", [KNNClassifier, GaussianNBClassifier])
def test_training_order_invariance(cls, rng):
    X = rng.normal(size=(25, 3))
    y = rng.integers(0, 3, 25)
    T = rng.normal(size=(15, 3))
    perm = rng.permutation(25)
    a = cls().fit(X, y).predict_proba(T)
    b = cls().fit(X[perm], y[perm]).predict_proba(T)
    np.testing.assert_allclose(a, b, atol=1e-12)


@pytest.mark.parametrize("cls", ALL)
def test_sklearn_composition(cls, rng):
    model = cls()
    params = model.get_params()
    twin = clone(model)
    assert twin.get_params() == params
    signals = [rng.normal(size=30) + (i % 2) * 2 for i in range(12)]
    labels = ["odd" if i % 2 else "even" for i in range(12)]
    pipe = make_pipeline(KmerSpectrumEmbedder(alphabet_size=5, ksize=2), clone(model))
    pipe.fit(signals, labels)
    assert set(pipe.predict(signals)) <= {"odd", "even"}
    assert pipe.predict_proba(signals).shape == (12, 2)


@pytest.mark.parametrize("est", [KNNClassifier(), SoftmaxRegression(epochs=50), GaussianNBClassifier()],
                         ids=lambda e: type(e).__name__)
def test_sklearn_estimator_checks(est):
    import warnings

    from sklearn.utils.estimator_checks import check_estimator

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        results = check_estimator(est, on_fail=None)
    failed = [r["check_name"] for r in results if r["status"] == "failed"]
    assert failed == []
