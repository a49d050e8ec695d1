"""Vietoris-Rips persistence barcodes, persistent entropy, and
entropy-based separation of topological features from noise."""

from .compare import (
    StabilityRecord,
    StabilityReport,
    bottleneck_distance,
    diagram_from_barcode,
    gh_distortion,
    identity_distortion,
    stability_report,
)
from .entropy import (
    NeutralizationState,
    Trajectory,
    entropy_after_neutralization,
    max_entropy_barcode,
    min_entropy_barcode,
    neutralization_trajectory,
    neutralize_prefix,
    persistent_entropy,
    q_bound,
    relative_entropy,
)
from .errors import (
    BudgetError,
    FormatError,
    RipsepError,
    StabilityError,
    ValidationError,
)
from .estimators import EntropyFeatureSeparator, RipsBarcode, array_to_bars, bars_to_array
from .filtration import Filtration, Simplex, build_vr_filtration, simplex_diameter
from .persistence import (
    Bar,
    Barcode,
    compute_barcode,
    dim0_barcode_unionfind,
    restrict_dim,
)
from .pointcloud import (
    ScaleBounds,
    format_points,
    load_points,
    pairwise_distances,
    perturb,
    sample_circle,
    sample_torus,
    sample_torus_lattice,
    save_points,
    scale_bounds,
)
from .separation import (
    LengthProfile,
    SeparationIteration,
    SeparationResult,
    SeparationRow,
    arrange_bars,
    parse_trace_json,
    prepare_lengths,
    render_trace,
    run_iteration,
    separate_features,
)

__version__ = "0.1.0"

__all__ = [
    "Bar",
    "Barcode",
    "BudgetError",
    "EntropyFeatureSeparator",
    "Filtration",
    "FormatError",
    "LengthProfile",
    "NeutralizationState",
    "RipsBarcode",
    "RipsepError",
    "ScaleBounds",
    "SeparationIteration",
    "SeparationResult",
    "SeparationRow",
    "Simplex",
    "StabilityError",
    "StabilityRecord",
    "StabilityReport",
    "Trajectory",
    "ValidationError",
    "arrange_bars",
    "array_to_bars",
    "bars_to_array",
    "bottleneck_distance",
    "build_vr_filtration",
    "compute_barcode",
    "diagram_from_barcode",
    "dim0_barcode_unionfind",
    "entropy_after_neutralization",
    "format_points",
    "gh_distortion",
    "identity_distortion",
    "load_points",
    "max_entropy_barcode",
    "min_entropy_barcode",
    "neutralization_trajectory",
    "neutralize_prefix",
    "pairwise_distances",
    "parse_trace_json",
    "persistent_entropy",
    "perturb",
    "prepare_lengths",
    "q_bound",
    "relative_entropy",
    "render_trace",
    "restrict_dim",
    "run_iteration",
    "sample_circle",
    "sample_torus",
    "sample_torus_lattice",
    "save_points",
    "scale_bounds",
    "separate_features",
    "simplex_diameter",
    "stability_report",
]
