"""Central-point and association-rule feature selection for network intrusion detection."""

from ._nidsfs import (
    Dataset,
    NidsfsError,
    __version__,
    central_points,
    compute_metrics,
    confusion,
    generate_rules,
    load_csv,
    make_plan,
    mode_of,
    parse_csv,
    partition_count,
    run_pipeline,
    select_features,
    synth_dataset,
)

__all__ = [
    "Dataset",
    "NidsfsError",
    "__version__",
    "central_points",
    "compute_metrics",
    "confusion",
    "generate_rules",
    "load_csv",
    "make_plan",
    "mode_of",
    "parse_csv",
    "partition_count",
    "run_pipeline",
    "select_features",
    "synth_dataset",
]
