"""Eigenfaces (PCA) facial-expression recognition."""

from .classify import ClassificationResult, ClassifierConfig, batch_classify, centroids, classify
from .errors import EigenExprError
from .evaluation import aggregate, emit_chart_data, rate, render_table, score
from .ingest import Dataset, IngestConfig, Sample, load_image, load_manifest, vectorize
from .pca import EigenModel, TrainConfig, explained_variance, load_model, project, reconstruct, save_model, train
from .synth import generate_synthetic

__version__ = "0.1.0"
