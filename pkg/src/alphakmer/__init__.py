"""Time-series classification through alphabetic range mapping and k-mer spectra."""
from .core import (
    Alphabet,
    AlphaKmerError,
    DegenerateRange,
    KmerSpectrum,
    RangeBounds,
    Signal,
    SymbolicSequence,
    TimeSeriesDataset,
    ValidationError,
    validate_dataset,
)
from .ranges import compute_ranges, flatten, locate
from .encode import compute_kmers, map_signal
from .spectrum import (
    EmbeddingMatrix,
    KmerSpectrumEmbedder,
    SymbolicEncoder,
    build_spectrum,
    generate_embedding,
    kmer_index,
)
from .classify import GaussianNBClassifier, KNNClassifier, SoftmaxRegression
from .evaluation import EvalReport, SplitSpec, metrics, run_experiment, split, t_test
from .synth import synth_dataset

__version__ = "0.1.0"
