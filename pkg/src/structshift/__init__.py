"""structshift: frequency-structure similarity and distinctive-change analysis."""

__version__ = "0.1.0"

from .structures import (  # noqa: E402
    AlignedPair,
    FrequencyTable,
    StructureVector,
    ValidationResult,
    align,
    normalize,
    validate,
)
from .similarity import (  # noqa: E402
    SimilarityResult,
    bray_curtis,
    similarity_index,
    transform_distance,
)
from .sokolowski import (  # noqa: E402
    CriticalValuePolicy,
    CriticalValueSource,
    MonteCarloConfig,
    NoTabulatedValueError,
    TestDecision,
    TestOutcome,
    critical_value,
    monte_carlo_critical_value,
    run_test,
)
from .changes import (  # noqa: E402
    ChangeDiagnostics,
    DepthClass,
    DifferenceProfile,
    DispersionClass,
    DistinctiveSummary,
    classify_depth,
    detect_distinctive,
    diagnostics,
    difference_profile,
    format_interval,
    relative_differences,
)
from .report import (  # noqa: E402
    ComparisonReport,
    SeriesReport,
    TableFormatError,
    compare_pair,
    compare_series,
    emit_plot_data,
    parse_table,
    render_report,
    render_series,
    render_table,
)
from .estimator import StructureChangeDetector  # noqa: E402

__all__ = [
    "AlignedPair",
    "ChangeDiagnostics",
    "ComparisonReport",
    "CriticalValuePolicy",
    "CriticalValueSource",
    "DepthClass",
    "DifferenceProfile",
    "DispersionClass",
    "DistinctiveSummary",
    "FrequencyTable",
    "MonteCarloConfig",
    "NoTabulatedValueError",
    "SeriesReport",
    "SimilarityResult",
    "StructureChangeDetector",
    "StructureVector",
    "TableFormatError",
    "TestDecision",
    "TestOutcome",
    "ValidationResult",
    "align",
    "bray_curtis",
    "classify_depth",
    "compare_pair",
    "compare_series",
    "critical_value",
    "detect_distinctive",
    "diagnostics",
    "difference_profile",
    "emit_plot_data",
    "format_interval",
    "monte_carlo_critical_value",
    "normalize",
    "parse_table",
    "relative_differences",
    "render_report",
    "render_series",
    "render_table",
    "run_test",
    "similarity_index",
    "transform_distance",
    "validate",
]
