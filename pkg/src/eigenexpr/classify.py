"""Expression classification by distance in eigenface space."""

from dataclasses import dataclass

import numpy as np

from . import pca
from ._parallel import ordered_map
from .errors import ClassifyError, EigenExprError

METHODS = ("nearest_neighbor", "nearest_centroid")
METRICS = ("euclidean", "eigen_weighted")


@dataclass(frozen=True)
class ClassifierConfig:
    method: str = "nearest_neighbor"
    metric: str = "euclidean"
    reject_threshold: float | None = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}, got {self.metric!r}")
        if self.reject_threshold is not None and not self.reject_threshold > 0:
            raise ValueError("reject_threshold must be positive")


@dataclass(frozen=True)
class ClassificationResult:
    label: str
    distance: float
    ranked: list        # (training index, label, distance), ascending
    rejected: bool = False


def centroids(model):
    """Mean training weight vector per label, in order of first appearance."""
    groups = {}
    for j, label in enumerate(model.train_labels):
        groups.setdefault(label, []).append(j)
    return {label: model.train_weights[:, idx].mean(axis=1) for label, idx in groups.items()}


def _distances(model, w, refs, metric):
    diff = refs - w[:, None]
    if metric == "euclidean":
        return np.sqrt(np.sum(diff * diff, axis=0))
    positive = model.eigenvalues > 0
    if not np.any(positive):
        raise ClassifyError("eigen_weighted metric needs at least one positive eigenvalue")
    d = diff[positive]
    return np.sqrt(np.sum(d * d / model.eigenvalues[positive][:, None], axis=0))


def classify(model, pixels, config=None):
    config = config or ClassifierConfig()
    if model.m < 1:
        raise ClassifyError("model has no training samples")
    w = pca.project(model, pixels)

    if config.method == "nearest_neighbor":
        refs = model.train_weights
        index = list(range(model.m))
        labels = list(model.train_labels)
    else:
        cents = centroids(model)
        refs = np.column_stack(list(cents.values()))
        # a centroid is identified by the training index of its label's first sample
        index = [model.train_labels.index(label) for label in cents]
        labels = list(cents)

    dist = _distances(model, w, refs, config.metric)
    ranked = sorted(zip(index, labels, (float(d) for d in dist)), key=lambda r: (r[2], r[0]))
    best = ranked[0]
    rejected = config.reject_threshold is not None and best[2] > config.reject_threshold
    return ClassificationResult(best[1], best[2], ranked, rejected)


def batch_classify(model, dataset, config=None):
    """Classify every test-split sample; results keep dataset order."""
    config = config or ClassifierConfig()
    samples = [s for s in dataset.samples if s.split == "test"]

    def one(item):
        i, sample = item
        try:
            return sample, classify(model, sample.pixels, config)
        except EigenExprError as exc:
            raise ClassifyError(f"test sample {i} ({sample.source_path or sample.label}): {exc}") from exc

    return ordered_map(one, enumerate(samples))
