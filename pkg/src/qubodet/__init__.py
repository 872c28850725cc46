"""Outlier detection by quadratic binary optimization.

The pipeline scores each point by a blend of its Mahalanobis distance to
the data centroid (statistical evidence) and its pairwise distances to
other candidates (density evidence), encodes the blend as a QUBO with a
cardinality penalty, and maximizes it with simulated annealing or, for
small instances, exhaustive enumeration.
"""

from .bench import BenchEntry, BenchmarkReport, METHODS, run_csv_suite, run_gaussian_suite
from .dataset import (
    CsvFormatError,
    Dataset,
    GaussianSpec,
    generate_gaussian,
    load_csv,
    save_csv,
)
from .detector import (
    DEFAULT_ALPHA_GRID,
    DetectionResult,
    DetectorConfig,
    baseline_knn_dist,
    baseline_mahalanobis_topk,
    detect,
    fit_alpha,
)
from .distance import (
    CovarianceModel,
    SingularCovarianceError,
    fit_covariance,
    mahalanobis_to_centroid,
    pairwise_mahalanobis,
)
from .metrics import EvalReport, roc_auc_binary, roc_auc_scores
from .qubo import (
    AnomalyQuboSpec,
    Qubo,
    QuboFormatError,
    apply_cardinality_penalty,
    build_anomaly_qubo,
    default_penalty_weight,
    energy,
    furthest_pairs,
    qubo_from_dict,
    qubo_to_dict,
)
from .solver import ProblemTooLargeError, SaConfig, Solution, solve_exact, solve_sa

__version__ = "0.1.0"

__all__ = [
    "AnomalyQuboSpec",
    "BenchEntry",
    "BenchmarkReport",
    "CovarianceModel",
    "CsvFormatError",
    "DEFAULT_ALPHA_GRID",
    "Dataset",
    "DetectionResult",
    "DetectorConfig",
    "EvalReport",
    "GaussianSpec",
    "METHODS",
    "ProblemTooLargeError",
    "Qubo",
    "QuboFormatError",
    "SaConfig",
    "SingularCovarianceError",
    "Solution",
    "apply_cardinality_penalty",
    "baseline_knn_dist",
    "baseline_mahalanobis_topk",
    "build_anomaly_qubo",
    "default_penalty_weight",
    "detect",
    "energy",
    "fit_alpha",
    "fit_covariance",
    "furthest_pairs",
    "generate_gaussian",
    "load_csv",
    "mahalanobis_to_centroid",
    "pairwise_mahalanobis",
    "qubo_from_dict",
    "qubo_to_dict",
    "roc_auc_binary",
    "roc_auc_scores",
    "run_csv_suite",
    "run_gaussian_suite",
    "save_csv",
    "solve_exact",
    "solve_sa",
    "__version__",
]
