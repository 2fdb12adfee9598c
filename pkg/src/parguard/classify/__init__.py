from .base import Dataset, ModelSpec, train, DegenerateClassWarning, TrainingDiverged
from .tree import DecisionTree, RegressionTree
from .forest import RandomForest
from .boosting import GradientBoosting
from .neighbors import KNearestNeighbors
from .bayes import GaussianNaiveBayes
from .mlp import MLP
from .persist import save_model, load_model

# hyperparameters the source study reports as tuned optima; kept as presets,
# not defaults (desk-scale grids are configured in the pipeline)
PAPER_PRESETS = {
    "gb_detect": ModelSpec("gb", {"learning_rate": 0.1, "n_estimators": 5000, "max_depth": 5}),
    "gb_locate": ModelSpec("gb", {"learning_rate": 0.05, "n_estimators": 12000, "max_depth": 10}),
    "mlp_identify": ModelSpec("mlp", {"hidden_sizes": (51, 13), "activation": "relu",
                                      "l2_alpha": 0.01, "schedule": "adaptive"}),
}

__all__ = [
    "Dataset", "ModelSpec", "train", "DegenerateClassWarning", "TrainingDiverged",
    "DecisionTree", "RegressionTree", "RandomForest", "GradientBoosting",
    "KNearestNeighbors", "GaussianNaiveBayes", "MLP",
    "save_model", "load_model", "PAPER_PRESETS",
]
