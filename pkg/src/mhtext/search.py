"""Hyperparameter search over the model families.

Grid expansion is axis-major in key insertion order (the first axis
varies slowest), so a given config always enumerates candidates in the
same order. Random search draws each axis in insertion order from a
generator seeded off the experiment seed, making the sampled candidate
list reproducible.

Every candidate trains on the training split and is scored by weighted
F1 on the validation split. Failed trials are recorded with their error
and skipped; if every trial fails the search raises SearchFailedError.
Ties on the validation score keep the earliest candidate. The test
split is never touched here; evaluation happens once, downstream, for
the selected configuration.
"""

from __future__ import annotations

import itertools
import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import features as features_mod
from . import gru as gru_mod
from . import linear as linear_mod
from . import svm as svm_mod
from . import trees as trees_mod
from .config import FAMILIES, ExperimentConfig, PreparedDataset
from .corpus import LabelScheme
from .errors import DataError, SearchFailedError, ToolkitError, UsageError
from .metrics import EvaluationReport, confusion_matrix, evaluate_predictions, precision_recall_f1
from .seeds import STAGE_MODEL, STAGE_SEARCH, derive_seed

SCHEMA_VERSION = 1


def expand_grid(grid: dict) -> list[dict]:
    """All axis combinations; the first key is the outermost loop."""
    keys = list(grid)
    for key in keys:
        if not list(grid[key]):
            raise UsageError(f"grid axis {key!r} has no values")
    return [
        dict(zip(keys, values))
        for values in itertools.product(*(grid[k] for k in keys))
    ]


def sample_random(space: dict, n_samples: int, rng) -> list[dict]:
    """Draw n_samples candidates, one axis at a time in insertion order."""
    out = []
    for _ in range(n_samples):
        candidate = {}
        for name, spec in space.items():
            kind = spec["kind"]
            if kind == "log_uniform":
                candidate[name] = float(
                    math.exp(rng.uniform(math.log(spec["low"]), math.log(spec["high"])))
                )
            elif kind == "uniform":
                candidate[name] = float(rng.uniform(spec["low"], spec["high"]))
            elif kind == "int_range":
                candidate[name] = int(
                    rng.integers(int(spec["low"]), int(spec["high"]) + 1)
                )
            else:  # choice
                options = spec["options"]
                candidate[name] = options[int(rng.integers(len(options)))]
        out.append(candidate)
    return out


def candidate_list(config: ExperimentConfig) -> list[dict]:
    """Materialize the search space with fixed params merged in."""
    if config.mode == "grid":
        raw = expand_grid(config.grid)
    else:
        rng = np.random.default_rng(derive_seed(config.seed, STAGE_SEARCH))
        raw = sample_random(config.random, config.n_samples, rng)
    return [{**config.fixed, **cand} for cand in raw]


@dataclass
class FittedModel:
    """A trained model plus the hooks the harness needs to use it."""

    family: str
    payload: object
    scheme: LabelScheme
    tfidf: features_mod.TfIdfModel | None = None
    vocab: gru_mod.SeqVocabulary | None = None
    extra: dict = field(default_factory=dict)

    def _inputs(self, dataset: PreparedDataset, split_name: str):
        if self.family == "gru":
            return dataset.sequences_for(split_name)
        return dataset.matrix_for(split_name)

    def predict(self, dataset: PreparedDataset, split_name: str) -> np.ndarray:
        return self.predict_rows(self._inputs(dataset, split_name))

    def scores(self, dataset: PreparedDataset, split_name: str) -> np.ndarray:
        return self.score_rows(self._inputs(dataset, split_name))

    def predict_rows(self, rows: np.ndarray) -> np.ndarray:
        p = self.payload
        if self.family == "logistic":
            return linear_mod.predict(p, rows)
        if self.family == "svm":
            return svm_mod.predict(p, rows)
        if self.family == "cart":
            return trees_mod.predict_tree(p["root"], rows)
        if self.family == "forest":
            return trees_mod.predict_forest(p, rows)
        if self.family == "gbdt":
            return trees_mod.predict_gbdt(p, rows)
        return gru_mod.predict(p, rows)

    def score_rows(self, rows: np.ndarray) -> np.ndarray:
        p = self.payload
        if self.family == "logistic":
            scores = linear_mod.predict_proba(p, rows)
        elif self.family == "svm":
            scores = svm_mod.class_scores(p, rows)
        elif self.family == "cart":
            scores = trees_mod.tree_class_scores(
                p["root"], rows, p["n_classes"], p["weight_per_class"]
            )
        elif self.family == "forest":
            scores = trees_mod.forest_scores(p, rows)
        elif self.family == "gbdt":
            scores = trees_mod.predict_gbdt_proba(p, rows)
        else:
            scores = gru_mod.predict_scores(p, rows)
        return pad_scores(scores, self.scheme.n_classes)

    def encode_tokens(self, token_docs) -> np.ndarray:
        """Feature rows for raw token sequences, using the bundled models."""
        if self.family == "gru":
            return self.vocab.encode_many([tuple(t) for t in token_docs])
        return features_mod.matrix(self.tfidf, token_docs)


def pad_scores(scores: np.ndarray, n_classes: int) -> np.ndarray:
    """Right-pad score matrices with zero columns when a model saw fewer
    classes in training than the scheme defines."""
    scores = np.atleast_2d(np.asarray(scores, dtype=np.float64))
    if scores.shape[1] >= n_classes:
        return scores
    padded = np.zeros((scores.shape[0], n_classes))
    padded[:, : scores.shape[1]] = scores
    return padded


def _pop(params: dict, key: str, default):
    return params[key] if key in params else default


def train_family(
    family: str,
    params: dict,
    dataset: PreparedDataset,
    model_seed: int = 0,
) -> FittedModel:
    """Train one model of the given family on the training split."""
    if family not in FAMILIES:
        raise DataError(f"unknown model family {family!r}")
    y_train = dataset.labels_for("train")
    extra: dict = {}
    if family == "gru":
        cfg = gru_mod.GruConfig(
            embedding_dim=int(_pop(params, "embedding_dim", 160)),
            hidden_dim=int(_pop(params, "hidden_dim", 256)),
            learning_rate=float(_pop(params, "learning_rate", 5e-4)),
            epochs=int(_pop(params, "epochs", 5)),
            batch_size=int(_pop(params, "batch_size", 32)),
            dropout=float(_pop(params, "dropout", 0.3)),
            class_weight=_pop(params, "class_weight", "balanced"),
            seed=model_seed,
        )
        data = gru_mod.GruData(
            train_x=dataset.sequences_for("train"),
            train_y=y_train,
            val_x=dataset.sequences_for("validation"),
            val_y=dataset.labels_for("validation"),
            vocab_size=dataset.vocab.vocab_size,
            n_classes=dataset.scheme.n_classes,
        )
        history: dict = {}
        payload = gru_mod.train(data, cfg, history)
        extra["history"] = history
        return FittedModel("gru", payload, dataset.scheme, vocab=dataset.vocab, extra=extra)

    X_train = dataset.matrix_for("train")
    if family == "logistic":
        cfg = linear_mod.LogisticConfig(
            C=float(_pop(params, "C", 1.0)),
            class_weight=_pop(params, "class_weight", None),
            max_iter=int(_pop(params, "max_iter", 1000)),
            tol=float(_pop(params, "tol", 1e-6)),
        )
        payload = linear_mod.fit_logistic(X_train, y_train, cfg)
    elif family == "svm":
        kernel = svm_mod.KernelSpec(
            kind=_pop(params, "kernel", "linear"),
            gamma=_pop(params, "gamma", "scale"),
            degree=int(_pop(params, "degree", 3)),
            coef0=float(_pop(params, "coef0", 0.0)),
            alpha=float(_pop(params, "alpha", 1.0)),
        )
        payload = svm_mod.fit_svm(
            X_train,
            y_train,
            c_value=float(_pop(params, "C", 1.0)),
            kernel=kernel,
            class_weight=_pop(params, "class_weight", None),
            max_epochs=int(_pop(params, "max_epochs", 1000)),
            tol=float(_pop(params, "tol", 1e-6)),
            seed=model_seed,
        )
    elif family == "cart":
        cfg = trees_mod.TreeConfig(
            criterion=_pop(params, "criterion", "gini"),
            max_depth=_pop(params, "max_depth", None),
            min_samples_split=int(_pop(params, "min_samples_split", 2)),
            min_samples_leaf=int(_pop(params, "min_samples_leaf", 1)),
            class_weight=_pop(params, "class_weight", None),
        )
        root = trees_mod.fit_cart(X_train, y_train, cfg)
        n_model_classes = int(y_train.max()) + 1
        payload = {
            "root": root,
            "config": cfg,
            "n_classes": n_model_classes,
            "weight_per_class": linear_mod.class_weights(
                y_train, cfg.class_weight, n_model_classes
            ),
        }
    elif family == "forest":
        cfg = trees_mod.TreeConfig(
            criterion=_pop(params, "criterion", "gini"),
            max_depth=_pop(params, "max_depth", None),
            min_samples_split=int(_pop(params, "min_samples_split", 2)),
            min_samples_leaf=int(_pop(params, "min_samples_leaf", 1)),
            class_weight=_pop(params, "class_weight", None),
            n_estimators=int(_pop(params, "n_estimators", 100)),
            max_features=_pop(params, "max_features", "sqrt"),
            bootstrap=bool(_pop(params, "bootstrap", True)),
        )
        payload = trees_mod.fit_forest(X_train, y_train, cfg, seed=model_seed)
    else:  # gbdt
        cfg = trees_mod.TreeConfig(
            max_depth=_pop(params, "max_depth", None),
            class_weight=_pop(params, "class_weight", None),
            n_estimators=int(_pop(params, "n_estimators", 100)),
            learning_rate=float(_pop(params, "learning_rate", 0.1)),
            num_leaves=int(_pop(params, "num_leaves", 31)),
            min_child_samples=int(_pop(params, "min_child_samples", 20)),
            max_bins=int(_pop(params, "max_bins", 255)),
        )
        payload = trees_mod.fit_gbdt(X_train, y_train, cfg, seed=model_seed)
        extra["train_loss"] = [float(v) for v in payload.train_loss]
    return FittedModel(family, payload, dataset.scheme, tfidf=dataset.tfidf, extra=extra)


def weighted_f1(y_true, y_pred, n_classes: int) -> float:
    return precision_recall_f1(confusion_matrix(y_true, y_pred, n_classes)).weighted["f1"]


@dataclass(frozen=True)
class TrialRecord:
    index: int
    params: dict
    val_weighted_f1: float | None
    error: str | None
    seconds: float

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "params": dict(self.params),
            "val_weighted_f1": self.val_weighted_f1,
            "error": self.error,
            "seconds": self.seconds,
        }


@dataclass
class SearchResult:
    config: ExperimentConfig
    trials: list[TrialRecord]
    best_index: int

    @property
    def best_trial(self) -> TrialRecord:
        return self.trials[self.best_index]

    @property
    def best_params(self) -> dict:
        return dict(self.best_trial.params)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "status": "ok",
            "config": self.config.to_dict(),
            "trials": [t.to_dict() for t in self.trials],
            "best_index": self.best_index,
            "best_params": self.best_params,
            "best_val_weighted_f1": self.best_trial.val_weighted_f1,
        }


def run_search(
    dataset: PreparedDataset, config: ExperimentConfig, clock=time.perf_counter
) -> SearchResult:
    """Score every candidate on the validation split and pick the best.

    A trial that raises a toolkit or numeric error is recorded and
    skipped. The winning trial is the highest validation weighted F1,
    earliest on exact ties.
    """
    candidates = candidate_list(config)
    n_classes = dataset.scheme.n_classes
    val_labels = dataset.labels_for("validation")
    trials: list[TrialRecord] = []
    best_index = -1
    best_score = -np.inf
    for i, params in enumerate(candidates):
        start = clock()
        try:
            fitted = train_family(
                config.family, params, dataset,
                model_seed=derive_seed(config.seed, STAGE_MODEL, i),
            )
            score = weighted_f1(
                val_labels, fitted.predict(dataset, "validation"), n_classes
            )
        except (ToolkitError, ValueError, FloatingPointError) as exc:
            trials.append(TrialRecord(i, params, None, str(exc), clock() - start))
            continue
        trials.append(TrialRecord(i, params, float(score), None, clock() - start))
        if score > best_score:
            best_score = score
            best_index = i
    if best_index < 0:
        first_error = next(t.error for t in trials if t.error is not None)
        failure = SearchFailedError(
            f"all {len(trials)} trials failed; first error: {first_error}"
        )
        failure.trials = trials  # lets callers log the attempts
        raise failure
    return SearchResult(config, trials, best_index)


def refit_best(dataset: PreparedDataset, result: SearchResult) -> FittedModel:
    """Retrain the winning candidate with its original trial seed, so the
    refit model is identical to the one scored during the search."""
    return train_family(
        result.config.family,
        result.best_params,
        dataset,
        model_seed=derive_seed(result.config.seed, STAGE_MODEL, result.best_index),
    )


def evaluate_model(
    fitted: FittedModel, dataset: PreparedDataset, split_name: str
) -> EvaluationReport:
    y_true = dataset.labels_for(split_name)
    return evaluate_predictions(
        y_true,
        fitted.predict(dataset, split_name),
        fitted.scores(dataset, split_name),
        n_classes=dataset.scheme.n_classes,
    )


def save_model(fitted: FittedModel, stem: str) -> str:
    """Write a self-contained model bundle at <stem>.model.json.

    GRU weights live in sidecar files (<stem>.npz, <stem>.vocab.json)
    referenced from the bundle; classical models embed their payload and
    the TF-IDF model directly.
    """
    bundle: dict = {
        "schema_version": SCHEMA_VERSION,
        "family": fitted.family,
        "scheme": fitted.scheme.to_dict(),
        "extra": fitted.extra,
    }
    if fitted.family == "gru":
        gru_mod.save(fitted.payload, fitted.vocab, stem)
        bundle["weights"] = "sidecar"
    else:
        bundle["tfidf"] = features_mod.to_dict(fitted.tfidf)
        p = fitted.payload
        if fitted.family == "logistic":
            bundle["model"] = linear_mod.to_dict(p)
        elif fitted.family == "svm":
            bundle["model"] = svm_mod.to_dict(p)
        elif fitted.family == "cart":
            bundle["model"] = {
                "root": trees_mod.node_to_dict(p["root"]),
                "config": trees_mod.config_to_dict(p["config"]),
                "n_classes": p["n_classes"],
                "weight_per_class": [float(w) for w in p["weight_per_class"]],
            }
        elif fitted.family == "forest":
            bundle["model"] = trees_mod.forest_to_dict(p)
        else:
            bundle["model"] = trees_mod.gbdt_to_dict(p)
    path = stem + ".model.json"
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(bundle, handle, sort_keys=True)
    return path


def load_model(stem: str) -> FittedModel:
    path = stem + ".model.json"
    try:
        with open(path, encoding="utf-8") as handle:
            bundle = json.load(handle)
    except OSError as exc:
        raise DataError(f"cannot open model bundle {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"invalid model bundle {path!r}: {exc}") from exc
    if bundle.get("schema_version") != SCHEMA_VERSION:
        raise DataError("unsupported model bundle payload")
    family = bundle["family"]
    scheme = LabelScheme.from_dict(bundle["scheme"])
    extra = bundle.get("extra", {})
    if family == "gru":
        params, vocab = gru_mod.load(stem)
        return FittedModel(family, params, scheme, vocab=vocab, extra=extra)
    tfidf = features_mod.from_dict(bundle["tfidf"])
    model = bundle["model"]
    if family == "logistic":
        payload = linear_mod.from_dict(model)
    elif family == "svm":
        payload = svm_mod.from_dict(model)
    elif family == "cart":
        payload = {
            "root": trees_mod.node_from_dict(model["root"]),
            "config": trees_mod.config_from_dict(model["config"]),
            "n_classes": int(model["n_classes"]),
            "weight_per_class": np.asarray(model["weight_per_class"], dtype=np.float64),
        }
    elif family == "forest":
        payload = trees_mod.forest_from_dict(model)
    elif family == "gbdt":
        payload = trees_mod.gbdt_from_dict(model)
    else:
        raise DataError(f"unknown model family {family!r} in bundle")
    return FittedModel(family, payload, scheme, tfidf=tfidf, extra=extra)
