"""Wind-turbine performance degradation indexes from SCADA time series.

The pipeline extracts fuzzy concepts (low/moderate/high power production)
in time windows per operating-condition sub-bin and derives two health
indexes: regression slopes on concept memberships, and a centroid distance
index quantifying concept drift.
"""

from .binning import (
    SubBin,
    TempCluster,
    WindBin,
    assign_subbins,
    fit_temperature_clusters,
    kmeans,
    make_wind_bins,
    temperature_boundaries,
)
from .concepts import (
    Concept,
    WindowConcepts,
    delta_transform,
    emit_concept_scatter,
    extract_concepts,
    split_windows,
)
from .distance import (
    CentroidPair,
    DistanceIndex,
    NormBounds,
    di_table,
    distance_index,
    emit_region_map,
    normalize_coords,
    secondary_clustering,
)
from .errors import (
    ConfigError,
    DataError,
    NumericalError,
    SubBinSkipped,
    WindHealthError,
)
from .fcm import FcmResult, fcm_fit, fcm_membership, fcm_objective
from .ingest import (
    ColumnMap,
    SampleRecord,
    SeriesSet,
    load_scada,
    merge_series,
    summarize,
    write_scada_csv,
)
from .pipeline import (
    HealthReport,
    RunConfig,
    analyze,
    analyze_series,
    compare_reports,
    write_report,
)
from .preprocess import (
    CleanSeries,
    clean_series,
    filter_wind_range,
    iqr_ratio_filter,
    power_wind_ratio,
)
from .regression import (
    MembershipSequence,
    RegressionIndex,
    concat_memberships,
    ols_slope,
    regression_table,
)
from .synth import SynthConfig, generate_scada
from .tables import HealthTable

__version__ = "0.1.0"
