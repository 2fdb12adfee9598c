from .filters import FilterBank, WaveletSpec, load_catalog, catalog_version
from .dwt import (
    dwt_multilevel,
    idwt_multilevel,
    max_useful_level,
    wavelet_energy,
    coefficient_lengths,
    DwtResult,
)
from .timedomain import (
    TimeFeatureParams,
    DegenerateSignalWarning,
    ar_coefficients,
    avg_change_quantile,
    agg_linear_trend,
    autocorrelation,
    count_peaks,
    energy_ratio_by_chunks,
    maximum,
)
from .matrix import (
    FeatureVector,
    extract_feature_matrix,
    energy_pool_matrix,
    save_matrix_text,
    load_matrix_text,
    save_matrix_binary,
    load_matrix_binary,
)

__all__ = [
    "FilterBank", "WaveletSpec", "load_catalog", "catalog_version",
    "dwt_multilevel", "idwt_multilevel", "max_useful_level",
    "wavelet_energy", "coefficient_lengths", "DwtResult",
    "TimeFeatureParams", "DegenerateSignalWarning", "ar_coefficients",
    "avg_change_quantile", "agg_linear_trend", "autocorrelation",
    "count_peaks", "energy_ratio_by_chunks", "maximum",
    "FeatureVector", "extract_feature_matrix", "energy_pool_matrix",
    "save_matrix_text", "load_matrix_text",
    "save_matrix_binary", "load_matrix_binary",
]
