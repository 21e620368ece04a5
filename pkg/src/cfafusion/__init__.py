"""Combinatorial fusion analysis (CFA) for ensembles of binary classifiers.

Score files go in, rank-score characteristics, cognitive diversity and
fused predictions come out. See :class:`CFAFusionClassifier` for the
estimator interface and :func:`sweep` for the subset-by-method report.
"""

__version__ = "0.1.0"

from .core import (
    FusionSpec,
    Method,
    RCWeighting,
    ScoreTable,
    Split,
    TiePolicy,
    ValidationReport,
    Violation,
    select_systems,
    validate_table,
)
from .diversity import (
    DiversityMatrix,
    WeightKind,
    WeightVector,
    cognitive_diversity,
    diversity_matrix,
    diversity_strength,
    table_diversity,
)
from .evaluate import (
    EvalReport,
    Metrics,
    classify_by_threshold,
    classify_top_k,
    compute_metrics,
    f1_from_pr,
)
from .exceptions import CFAError, ConfigError, InvalidTableError, ParseError, UnknownSystemError
from .fusion import (
    CFAFusionClassifier,
    FusedColumn,
    FusedKind,
    SweepConfig,
    combine_ranks,
    combine_scores,
    format_report,
    fuse_tables,
    performance_weights,
    sweep,
)
from .ingest import (
    MinMaxNormalizer,
    NormalizationParams,
    min_max_apply,
    min_max_fit,
    parse_score_file,
    read_score_file,
)
from .ranking import RankTable, RscProfile, rsc_plot_data, rsc_profile, scores_to_ranks
