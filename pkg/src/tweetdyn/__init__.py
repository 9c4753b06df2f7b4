"""Dynamical analysis of coordinated-account tweet streams.

Subpackages by pipeline stage: :mod:`~tweetdyn.ingest` (records, cohorts,
retweet networks), :mod:`~tweetdyn.timeseries` (daily counts, detrending,
segment fits), :mod:`~tweetdyn.strategy` (posting-mix simplex and symbol
dynamics), :mod:`~tweetdyn.spectral` (rate spectra, PCA, k-medoids),
:mod:`~tweetdyn.topic` (text keywords and similarity communities),
:mod:`~tweetdyn.compare` (cross-tabulating the two clusterings),
:mod:`~tweetdyn.synth` (ground-truth generators), :mod:`~tweetdyn.cli`.
"""

__version__ = "0.1.0"

from .timeseries import (  # noqa: F401
    CountSeries,
    DayWindow,
    LinearFit,
    OscillatorSeries,
    accumulate,
    changepoint_significant,
    counts_by_user,
    daily_counts,
    detrend,
    fit_segment,
)
from .ingest import (  # noqa: F401
    CohortSpec,
    ColumnMap,
    TweetCategory,
    TweetRecord,
    categorize,
    parse_records,
    retweet_network,
    select_cohort,
    write_records,
)
from .graphs import WeightedGraph, modularity, modularity_communities  # noqa: F401
from .strategy import (  # noqa: F401
    SimplexPartition,
    StrategyPoint,
    SymbolDistribution,
    chi_square_shift,
    strategy_vector,
    symbol_distribution,
    symbol_sequence,
    symbolize,
)
from .spectral import (  # noqa: F401
    ClusterAssignment,
    Embedding,
    FourierModel,
    Spectrum,
    band_summary,
    denoise,
    dft,
    dominant_period,
    fit_fourier,
    kmedoids,
    pca_embed,
    spectra_matrix,
)
from .topic import (  # noqa: F401
    Document,
    GammaFit,
    TermUserMatrix,
    TopicConfig,
    gamma_keywords,
    similarity_graph,
    topic_communities,
)
from .compare import CrossTab, adjusted_rand_index, cross_tab  # noqa: F401
