"""BikNN: bilateral anomaly estimation from spatial and ECDF-density kNN anomalies."""

from .anomaly_space import AnomalyPoint, build_space, density_anomaly, spatial_anomaly
from .classify import OutlierType, axis_thresholds, classify, classify_by_thresholds
from .dataset import DataError, Dataset, load_csv, save_csv, split
from .ecdf import EcdfModel
from .eval import average_precision, precision_at_n, roc_auc, run_benchmark
from .knn import NeighborIndex
from .metric import minkowski
from .robust_cov import RobustLocationScatter, c_step, fast_mcd, mahalanobis
from .scorer import (
    PRESETS,
    BiknnModel,
    BiknnParams,
    decision_threshold,
    fit,
    load_model,
    save_model,
)

__all__ = [
    "AnomalyPoint",
    "BiknnModel",
    "BiknnParams",
    "DataError",
    "Dataset",
    "EcdfModel",
    "NeighborIndex",
    "OutlierType",
    "PRESETS",
    "RobustLocationScatter",
    "average_precision",
    "axis_thresholds",
    "build_space",
    "c_step",
    "classify",
    "classify_by_thresholds",
    "decision_threshold",
    "density_anomaly",
    "fast_mcd",
    "fit",
    "load_csv",
    "load_model",
    "mahalanobis",
    "minkowski",
    "precision_at_n",
    "roc_auc",
    "run_benchmark",
    "save_csv",
    "save_model",
    "spatial_anomaly",
    "split",
]

__version__ = "0.1.0"
