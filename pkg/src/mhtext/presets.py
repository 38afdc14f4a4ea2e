"""Ready-to-run search presets.

Each preset is a small ExperimentConfig that works out of the box on a
prepared corpus. The binary logistic setup ships in two flavors because
both are defensible on skewed data: plain (best raw accuracy) and
class-weight balanced (better minority recall). Runtimes are sized for
desk-scale corpora (a few thousand documents).
"""

from __future__ import annotations

from .config import ExperimentConfig
from .errors import UsageError


def _build() -> dict[str, ExperimentConfig]:
    return {
        "binary": ExperimentConfig(
            family="logistic",
            grid={"C": [10.0, 100.0, 1000.0]},
            fixed={"class_weight": None, "max_iter": 1000},
        ),
        "binary_balanced": ExperimentConfig(
            family="logistic",
            grid={"C": [10.0, 100.0, 1000.0]},
            fixed={"class_weight": "balanced", "max_iter": 1000},
        ),
        "multiclass": ExperimentConfig(
            family="logistic",
            grid={"C": [100.0, 1000.0], "class_weight": [None, "balanced"]},
            fixed={"max_iter": 1000},
        ),
        "svm_linear": ExperimentConfig(
            family="svm",
            grid={"C": [0.1, 1.0, 10.0]},
            fixed={"kernel": "linear", "max_epochs": 1500},
        ),
        "svm_rbf": ExperimentConfig(
            family="svm",
            grid={"C": [1.0, 10.0]},
            fixed={"kernel": "rbf", "gamma": "scale", "max_epochs": 200},
        ),
        "cart": ExperimentConfig(
            family="cart",
            grid={"max_depth": [None, 20], "min_samples_leaf": [1, 5]},
        ),
        "forest": ExperimentConfig(
            family="forest",
            grid={"n_estimators": [50, 100]},
            fixed={"max_features": "sqrt", "bootstrap": True},
        ),
        "gbdt": ExperimentConfig(
            family="gbdt",
            grid={"learning_rate": [0.1, 0.3]},
            fixed={"n_estimators": 100, "num_leaves": 31, "min_child_samples": 20},
        ),
        "gru": ExperimentConfig(
            family="gru",
            grid={"learning_rate": [5e-4, 1e-3]},
            fixed={
                "embedding_dim": 128,
                "hidden_dim": 128,
                "epochs": 3,
                "batch_size": 32,
                "dropout": 0.3,
                "class_weight": "balanced",
            },
        ),
    }


PRESETS = _build()


def preset_names() -> tuple[str, ...]:
    return tuple(sorted(PRESETS))


def get_preset(name: str) -> ExperimentConfig:
    try:
        return PRESETS[name]
    except KeyError:
        raise UsageError(
            f"unknown preset {name!r}; available: {', '.join(preset_names())}"
        ) from None
