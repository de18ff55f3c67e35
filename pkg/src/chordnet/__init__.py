"""Chord-transition networks built from harmonic annotation corpora."""

from chordnet.annotations import (
    ChordEvent,
    CleaningReport,
    ColumnMapping,
    Corpus,
    PeriodMap,
    RawRow,
    clean,
    filter_corpus,
    load_corpus,
    load_tsv,
    normalize_label,
    segmentize,
)
from chordnet.community import (
    NullEnsembleStats,
    Partition,
    best_partition,
    community_profile,
    configuration_rewire,
    louvain,
    modularity,
    null_modularity_stats,
)
from chordnet.errors import (
    ChordNetError,
    ConfigError,
    DataError,
    NumericalError,
)
from chordnet.network import (
    ChordGraph,
    UndirectedGraph,
    build_graph,
    build_period_graphs,
    degree_distribution,
    undirect,
)
from chordnet.spectral import (
    GoogleMatrix,
    PowerLawFit,
    RankVector,
    Spectrum,
    build_google,
    eigenvector_support,
    fit_powerlaw,
    pagerank,
    spectrum,
)
from chordnet.stats import (
    bigram_matrix,
    frequency_table,
    pagerank_vs_frequency,
    zipf_table,
)
from chordnet.stylometry import (
    fidelity,
    pair_graphs,
    period_comparison,
    similarity,
)

__version__ = "0.1.0"

__all__ = [
    "ChordEvent",
    "CleaningReport",
    "ColumnMapping",
    "Corpus",
    "PeriodMap",
    "RawRow",
    "clean",
    "filter_corpus",
    "load_corpus",
    "load_tsv",
    "normalize_label",
    "segmentize",
    "NullEnsembleStats",
    "Partition",
    "best_partition",
    "community_profile",
    "configuration_rewire",
    "louvain",
    "modularity",
    "null_modularity_stats",
    "ChordNetError",
    "ConfigError",
    "DataError",
    "NumericalError",
    "ChordGraph",
    "UndirectedGraph",
    "build_graph",
    "build_period_graphs",
    "degree_distribution",
    "undirect",
    "GoogleMatrix",
    "PowerLawFit",
    "RankVector",
    "Spectrum",
    "build_google",
    "eigenvector_support",
    "fit_powerlaw",
    "pagerank",
    "spectrum",
    "bigram_matrix",
    "frequency_table",
    "pagerank_vs_frequency",
    "zipf_table",
    "fidelity",
    "pair_graphs",
    "period_comparison",
    "similarity",
]
