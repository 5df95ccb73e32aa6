"""trajscope: batch toolkit for drone-trajectory annotation datasets.

Parses SDD and inD annotations into unified pixel-space trajectories,
applies the lost-filter / resample / window preprocessing pipeline,
measures pairwise interaction strength per frame (dependence estimate
weighted by windowed kinematics, folded through an exponential-memory
recurrence), reproduces dataset characterization statistics, and scores
trajectory predictions with displacement errors.
"""
from .aim import (
    DEFAULT_DELTA,
    InteractionPair,
    Kinematics,
    MeasureSeries,
    RhoConfig,
    accumulate_aim,
    compute_kinematics,
    compute_rho,
    extract_interactions,
    fit_normalizers,
    measure_interaction,
    sweep,
)
from .analytics import (
    ClassDistributionRow,
    LostStatsRow,
    OverlapRow,
    SplitCandidate,
    class_distribution,
    detect_split_candidates,
    group_trajectories_for_stats,
    lost_stats,
    overlap_report,
)
from .evaluation import (
    EvalReport,
    Prediction,
    ade,
    constant_velocity_predict,
    evaluate,
    fde,
    load_predictions,
    predictor_from_mapping,
)
from .ind import meters_to_pixels, parse_ind_tracks, pixels_to_meters
from .mi import (
    DEFAULT_BANDWIDTHS,
    DEFAULT_N_MIN,
    HashMIState,
    g_divergence,
    mi_prefix_series,
)
from .preprocess import (
    LostPolicy,
    LostPositions,
    PreprocessConfig,
    TrajectoryWindow,
    classify_lost_positions,
    drop_generated,
    filter_lost,
    preprocess_trajectory,
    resample,
    window,
)
from .registry import DatasetRegistry, SceneOverlap, default_registry_path, load_registry
from .sdd import (
    IngestDiagnostics,
    assemble_trajectories,
    format_sdd_row,
    parse_sdd_annotations,
)
from .store import load_manifest, load_store, write_store
from .types import (
    ALL_CLASSES,
    AnnotationRecord,
    ConfigError,
    DomainError,
    IND_CLASSES,
    InsufficientDataError,
    ParseError,
    SDD_CLASSES,
    SourceRef,
    StructuralError,
    ToolError,
    TrackPoint,
    Trajectory,
    canonical_class,
    scene_diagonal,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_CLASSES",
    "AnnotationRecord",
    "ClassDistributionRow",
    "ConfigError",
    "DEFAULT_BANDWIDTHS",
    "DEFAULT_DELTA",
    "DEFAULT_N_MIN",
    "DatasetRegistry",
    "DomainError",
    "EvalReport",
    "HashMIState",
    "IND_CLASSES",
    "IngestDiagnostics",
    "InsufficientDataError",
    "InteractionPair",
    "Kinematics",
    "LostPolicy",
    "LostPositions",
    "LostStatsRow",
    "MeasureSeries",
    "OverlapRow",
    "ParseError",
    "Prediction",
    "PreprocessConfig",
    "RhoConfig",
    "SDD_CLASSES",
    "SceneOverlap",
    "SourceRef",
    "SplitCandidate",
    "StructuralError",
    "ToolError",
    "TrackPoint",
    "Trajectory",
    "TrajectoryWindow",
    "accumulate_aim",
    "ade",
    "assemble_trajectories",
    "canonical_class",
    "class_distribution",
    "classify_lost_positions",
    "compute_kinematics",
    "compute_rho",
    "constant_velocity_predict",
    "default_registry_path",
    "detect_split_candidates",
    "drop_generated",
    "evaluate",
    "extract_interactions",
    "fde",
    "filter_lost",
    "fit_normalizers",
    "format_sdd_row",
    "g_divergence",
    "group_trajectories_for_stats",
    "load_manifest",
    "load_predictions",
    "load_registry",
    "load_store",
    "lost_stats",
    "measure_interaction",
    "meters_to_pixels",
    "mi_prefix_series",
    "overlap_report",
    "parse_ind_tracks",
    "parse_sdd_annotations",
    "pixels_to_meters",
    "predictor_from_mapping",
    "preprocess_trajectory",
    "resample",
    "scene_diagonal",
    "sweep",
    "window",
    "write_store",
]
