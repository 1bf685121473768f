import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alphakmer import Alphabet, TimeSeriesDataset
from alphakmer.core import DegenerateRange, MaskLengthMismatch, UnknownCharacter, ValidationError
from alphakmer.spectrum import (
    KmerSpectrumEmbedder,
    SymbolicEncoder,
    build_spectrum,
    generate_embedding,
    kmer_from_index,
    kmer_index,
)

from oracles import brute_spectrum, naive_embedding, random_dataset


@pytest.mark.parametrize("kmer, expected", [("AAA", 0), ("AAB", 1), ("ZZZ", 17575), ("ABA", 26)])
def test_kmer_index(kmer, expected, az):
    assert kmer_index(kmer, az) == expected


def test_kmer_index_is_lexicographic_bijection():
    alpha = Alphabet.of_size(4)
    kmers = ["".join(p) for p in itertools.product(alpha.symbols, repeat=3)]
    assert [kmer_index(m, alpha) for m in kmers] == list(range(64))
    assert [kmer_from_index(i, 3, alpha) for i in range(64)] == kmers


def test_kmer_index_unknown_character(az):
    with pytest.raises(UnknownCharacter):
        kmer_index("AaA", az)


def test_spectrum_repeated_kmer(az):
    spec = build_spectrum("AAAA", 3, az)
    assert spec.dim == 26**3
    assert spec.counts[0] == 2
    assert spec.counts.sum() == 2
    assert spec.nonzero() == [(0, 2)]


def test_spectrum_empty_sequence(az):
    spec = build_spectrum("", 3, az)
    assert not spec.counts.any()
    assert spec.sequence_length == 0


def test_spectrum_matches_brute_force(rng, az):
    seq = "".join(rng.choice(list(az.symbols), size=50))
    expected = brute_spectrum(seq, 3, az.symbols)
    assert build_spectrum(seq, 3, az).counts.tolist() == expected


def test_spectrum_rejects_foreign_characters():
    with pytest.raises(UnknownCharacter):
        build_spectrum("ABQ", 2, Alphabet.of_size(3))


@settings(max_examples=200, deadline=None)
@given(st.text(alphabet="ABCD", max_size=60), st.integers(1, 4))
def test_row_sum_conservation(seq, k):
    spec = build_spectrum(seq, k, Alphabet.of_size(4))
    assert spec.dim == 4**k
    assert spec.counts.sum() == max(0, len(seq) - k + 1)
    assert spec.counts.min() >= 0


def test_generate_embedding_two_signals(two_signal_dataset, az):
    emb, bounds, seqs = generate_embedding(two_signal_dataset, az, 3)
    assert [s.chars for s in seqs] == ["AAZ", "ZZA"]
    assert emb.ids == ("a", "b")
    row = emb.rows[0]
    assert row.nonzero() == [(kmer_index("AAZ", az), 1)]
    assert emb.rows[1].nonzero() == [(kmer_index("ZZA", az), 1)]
    assert bounds.bounds.tolist() == list(map(float, range(27)))


def test_short_signal_gives_zero_row(az):
    ds = TimeSeriesDataset.from_arrays([[1.0, 2.0]])
    emb, _, _ = generate_embedding(ds, az, 3)
    assert len(emb) == 1
    assert not emb.toarray().any()


def test_generate_embedding_deterministic(rng, az):
    ds = TimeSeriesDataset.from_arrays(random_dataset(rng))
    a = generate_embedding(ds, az, 3)
    b = generate_embedding(ds, az, 3)
    assert np.array_equal(a[0].toarray(), b[0].toarray())
    assert a[1] == b[1]
    assert a[2] == b[2]


def test_generate_embedding_matches_naive(rng):
    for _ in range(20):
        signals = random_dataset(rng)
        alpha = Alphabet.of_size(int(rng.integers(2, 7)))
        k = int(rng.integers(1, 4))
        phi, _, seqs = naive_embedding([s.tolist() for s in signals], alpha.symbols, k)
        emb, _, got = generate_embedding(TimeSeriesDataset.from_arrays(signals), alpha, k)
        assert [s.chars for s in got] == seqs
        assert emb.toarray().tolist() == phi


def test_train_only_scope_fits_on_mask(az):
    ds = TimeSeriesDataset.from_arrays([[0.0, 26.0], [-100.0, 100.0]])
    emb, bounds, seqs = generate_embedding(ds, az, 1, "train_only", [True, False])
    assert bounds.minimum == 0.0 and bounds.maximum == 26.0
    assert seqs[1].chars == "AZ"  # clamped outside the fitted span


def test_train_only_errors(az, two_signal_dataset):
    with pytest.raises(ValidationError):
        generate_embedding(two_signal_dataset, az, 3, "train_only")
    with pytest.raises(MaskLengthMismatch):
        generate_embedding(two_signal_dataset, az, 3, "train_only", [True])
    with pytest.raises(ValidationError):
        generate_embedding(two_signal_dataset, az, 3, "train_only", [False, False])
    with pytest.raises(ValidationError):
        generate_embedding(two_signal_dataset, az, 3, "everything")


def test_degenerate_dataset(az):
    with pytest.raises(DegenerateRange):
        generate_embedding(TimeSeriesDataset.from_arrays([[3.0, 3.0], [3.0]]), az, 3)


def test_triplets_and_dense_agree(rng, az):
    ds = TimeSeriesDataset.from_arrays(random_dataset(rng))
    emb, _, _ = generate_embedding(ds, az, 2)
    dense = np.zeros((len(emb), emb.dim), dtype=np.int64)
    row_of = {sid: i for i, sid in enumerate(emb.ids)}
    for sid, idx, c in emb.triplets():
        dense[row_of[sid], idx] = c
    assert np.array_equal(dense, emb.toarray())


class TestEstimators:
    def test_embedder_matches_functional(self, rng):
        signals = random_dataset(rng)
        emb, _, _ = generate_embedding(TimeSeriesDataset.from_arrays(signals), Alphabet.of_size(5), 2)
        X = KmerSpectrumEmbedder(alphabet_size=5, ksize=2).fit_transform(signals)
        assert np.array_equal(X, emb.toarray())

    def test_embedder_accepts_dataset_and_2d_array(self):
        arr = np.arange(12, dtype=float).reshape(3, 4)
        a = KmerSpectrumEmbedder(4, 2).fit_transform(arr)
        b = KmerSpectrumEmbedder(4, 2).fit_transform(TimeSeriesDataset.from_arrays(list(arr)))
        assert np.array_equal(a, b)
        assert a.shape == (3, 16)

    def test_encoder_strings(self):
        enc = SymbolicEncoder(alphabet_size=26).fit([[0, 26], [13.5]])
        assert enc.transform([[0, 13.5, 26]]) == ["ANZ"]

    def test_get_params_and_feature_names(self):
        emb = KmerSpectrumEmbedder(alphabet_size=3, ksize=2)
        assert emb.get_params() == {"alphabet_size": 3, "ksize": 2}
        emb.fit([[0.0, 1.0, 2.0]])
        names = emb.get_feature_names_out()
        assert names[0] == "AA" and names[-1] == "CC" and len(names) == 9

    def test_unfitted_transform_raises(self):
        from sklearn.exceptions import NotFittedError

        with pytest.raises(NotFittedError):
            KmerSpectrumEmbedder().transform([[1.0, 2.0]])

    def test_rejects_bad_input(self):
        with pytest.raises(ValidationError):
            KmerSpectrumEmbedder().fit([[1.0, np.nan]])
        with pytest.raises(ValidationError):
            KmerSpectrumEmbedder().fit(np.array([1.0, 2.0]))
        with pytest.raises(ValidationError):
            KmerSpectrumEmbedder(ksize=0).fit([[1.0, 2.0]])
