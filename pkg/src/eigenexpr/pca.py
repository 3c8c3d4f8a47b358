"""Eigenfaces training and projection via the snapshot (Gram matrix) method."""

import hashlib
import json
from dataclasses import dataclass, field, replace

import numpy as np

from . import linalg
from .errors import DimensionError, ModelFormatError, ModelVersionError, TrainError

FORMAT_VERSION = 1
MAGIC = "eigenexpr-model"
# centered data whose top Gram eigenvalue is below this fraction of the raw
# energy is round-off only (e.g. identical images)
RANK_ZERO_RTOL = 1e-24


@dataclass(frozen=True)
class TrainConfig:
    variance_threshold: float = 0.95
    max_components: int | None = None
    eigen_tol: float = linalg.DEFAULT_TOL
    null_eigen_ratio: float = 1e-12
    max_sweeps: int = linalg.DEFAULT_MAX_SWEEPS

    def __post_init__(self):
        if not 0.0 < self.variance_threshold <= 1.0:
            raise ValueError(f"variance_threshold must be in (0, 1], got {self.variance_threshold}")
        if self.max_components is not None and self.max_components < 1:
            raise ValueError("max_components must be at least 1")
        if self.eigen_tol <= 0 or self.null_eigen_ratio < 0:
            raise ValueError("eigen_tol must be positive and null_eigen_ratio nonnegative")


@dataclass(frozen=True, eq=False)
class EigenModel:
    width: int
    height: int
    mean_face: np.ndarray       # (N,)
    eigenfaces: np.ndarray      # (N, k), orthonormal columns
    eigenvalues: np.ndarray     # (k,), covariance eigenvalues (Gram eigenvalues / M)
    train_weights: np.ndarray   # (k, M)
    train_labels: list
    train_subjects: list
    config: TrainConfig = field(default_factory=TrainConfig)
    # sum of every positive covariance eigenvalue, retained or not
    total_variance: float = 0.0

    @property
    def n_pixels(self):
        return self.mean_face.size

    @property
    def k(self):
        return self.eigenfaces.shape[1]

    @property
    def m(self):
        return len(self.train_labels)


def fit(data, labels, subjects=None, width=None, height=None, config=None):
    """Train on a data matrix with one image per column (N x M).

    Snapshot method: eigenvectors v of the M x M Gram matrix of the centered
    data map to eigenfaces A v / ||A v||; covariance eigenvalues are the Gram
    eigenvalues divided by M.
    """
    config = config or TrainConfig()
    x = linalg.as_mat(data)
    n, m = x.shape
    labels = list(labels)
    subjects = list(subjects) if subjects is not None else [""] * m
    if len(labels) != m or len(subjects) != m:
        raise DimensionError(f"{m} images but {len(labels)} labels and {len(subjects)} subjects")
    if m < 2:
        raise TrainError("need at least 2 training samples")
    if width is None or height is None:
        width, height = n, 1
    if width * height != n:
        raise DimensionError(f"{width}x{height} does not match {n} pixels")

    mean_face = x.mean(axis=1)
    a = x - mean_face[:, None]
    dec = linalg.sym_eigen(linalg.gram(a), tol=config.eigen_tol, max_sweeps=config.max_sweeps)
    lam = np.maximum(dec.eigenvalues, 0.0)

    energy = float(np.sum(x * x))
    if lam[0] <= RANK_ZERO_RTOL * energy or lam[0] == 0.0:
        raise TrainError("training images are all identical (rank 0 after centering)")
    keep = lam > config.null_eigen_ratio * lam[0]
    lam = lam[keep]
    vecs = dec.eigenvectors[:, keep]

    faces = a @ vecs
    faces /= np.sqrt(np.sum(faces * faces, axis=0))
    cov = lam / m

    cumulative = np.cumsum(cov)
    total = float(cumulative[-1])
    fractions = cumulative / total
    k = int(np.searchsorted(fractions, config.variance_threshold, side="left")) + 1
    k = min(k, cov.size)
    if config.max_components is not None:
        k = min(k, config.max_components)

    faces = np.ascontiguousarray(faces[:, :k])
    return EigenModel(
        width=width,
        height=height,
        mean_face=mean_face,
        eigenfaces=faces,
        eigenvalues=cov[:k].copy(),
        train_weights=faces.T @ a,
        train_labels=labels,
        train_subjects=subjects,
        config=config,
        total_variance=total,
    )


def train(dataset, config=None):
    """Train an EigenModel on the ``train`` split of a Dataset."""
    samples = [s for s in dataset.samples if s.split == "train"]
    if len(samples) < 2:
        raise TrainError("need at least 2 training samples")
    data = np.column_stack([s.pixels for s in samples])
    return fit(
        data,
        [s.label for s in samples],
        [s.subject for s in samples],
        dataset.width,
        dataset.height,
        config,
    )


def project(model, pixels):
    x = linalg.as_vec(pixels)
    if x.size != model.n_pixels:
        raise DimensionError(f"image has {x.size} pixels, model expects {model.n_pixels}")
    return model.eigenfaces.T @ (x - model.mean_face)


def reconstruct(model, weights):
    """Map weights back to pixel space; the result is not clamped to [0, 1]."""
    w = linalg.as_vec(weights)
    if w.size != model.k:
        raise DimensionError(f"weight vector has length {w.size}, model has {model.k} components")
    return model.mean_face + model.eigenfaces @ w


def explained_variance(model, j):
    """Fraction of total variance captured by the first j components."""
    if not 1 <= j <= model.k:
        raise ValueError(f"j must be in 1..{model.k}, got {j}")
    frac = float(np.cumsum(model.eigenvalues)[j - 1]) / model.total_variance
    return min(max(frac, 0.0), 1.0)


def truncate(model, k):
    """Copy of the model keeping only the leading k components."""
    if not 1 <= k <= model.k:
        raise ValueError(f"k must be in 1..{model.k}, got {k}")
    return replace(
        model,
        eigenfaces=model.eigenfaces[:, :k].copy(),
        eigenvalues=model.eigenvalues[:k].copy(),
        train_weights=model.train_weights[:k].copy(),
    )


# --- persistence -----------------------------------------------------------

def _floats(values):
    return [repr(float(v)) for v in np.asarray(values, dtype=np.float64).ravel(order="F")]


def _body_lines(model):
    n, k, m = model.n_pixels, model.k, model.m
    lines = [f"[mean_face] {n}"]
    lines += _floats(model.mean_face)
    lines.append(f"[eigenvalues] {k}")
    lines += _floats(model.eigenvalues)
    lines.append(f"[eigenfaces] {n}x{k}")
    lines += _floats(model.eigenfaces)
    lines.append(f"[train_weights] {k}x{m}")
    lines += _floats(model.train_weights)
    lines.append(f"[train_labels] {m}")
    lines += [json.dumps(s, ensure_ascii=False) for s in model.train_labels]
    lines.append(f"[train_subjects] {m}")
    lines += [json.dumps(s, ensure_ascii=False) for s in model.train_subjects]
    return lines


def dumps_model(model):
    body = "\n".join(_body_lines(model)) + "\n"
    c = model.config
    header = [
        MAGIC,
        f"format_version: {FORMAT_VERSION}",
        f"width: {model.width}",
        f"height: {model.height}",
        f"n: {model.n_pixels}",
        f"m: {model.m}",
        f"k: {model.k}",
        f"variance_threshold: {c.variance_threshold!r}",
        f"max_components: {'none' if c.max_components is None else c.max_components}",
        f"eigen_tol: {c.eigen_tol!r}",
        f"null_eigen_ratio: {c.null_eigen_ratio!r}",
        f"max_sweeps: {c.max_sweeps}",
        f"total_variance: {float(model.total_variance)!r}",
        f"checksum: sha256:{hashlib.sha256(body.encode('utf-8')).hexdigest()}",
        "---",
    ]
    return "\n".join(header) + "\n" + body


def save_model(model, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_model(model))


def _section(lines, pos, name, count):
    if pos >= len(lines):
        raise ModelFormatError(f"shape inconsistency: missing section [{name}]")
    head = lines[pos].split()
    if not head or head[0] != f"[{name}]":
        raise ModelFormatError(f"expected section [{name}], found {lines[pos]!r}")
    values = lines[pos + 1:pos + 1 + count]
    if len(values) != count:
        raise ModelFormatError(f"shape inconsistency: [{name}] needs {count} entries, file has {len(values)}")
    return values, pos + 1 + count


def loads_model(text):
    lines = text.split("\n")
    if not lines or lines[0] != MAGIC:
        raise ModelFormatError("not an eigenexpr model file")
    try:
        sep = lines.index("---")
    except ValueError:
        raise ModelFormatError("missing header terminator") from None
    header = {}
    for line in lines[1:sep]:
        key, _, value = line.partition(":")
        header[key.strip()] = value.strip()
    try:
        version = int(header["format_version"])
        if version != FORMAT_VERSION:
            raise ModelVersionError(f"unsupported format_version {version} (supported: {FORMAT_VERSION})")
        width, height = int(header["width"]), int(header["height"])
        n, m, k = int(header["n"]), int(header["m"]), int(header["k"])
        mc = header["max_components"]
        config = TrainConfig(
            variance_threshold=float(header["variance_threshold"]),
            max_components=None if mc == "none" else int(mc),
            eigen_tol=float(header["eigen_tol"]),
            null_eigen_ratio=float(header["null_eigen_ratio"]),
            max_sweeps=int(header["max_sweeps"]),
        )
        total_variance = float(header["total_variance"])
        checksum = header["checksum"]
    except KeyError as exc:
        raise ModelFormatError(f"missing header field {exc}") from None
    except ValueError as exc:
        raise ModelFormatError(f"bad header value: {exc}") from None
    if width * height != n:
        raise ModelFormatError(f"shape inconsistency: {width}x{height} != n={n}")

    body_lines = lines[sep + 1:]
    if body_lines and body_lines[-1] == "":
        body_lines = body_lines[:-1]
    try:
        pos = 0
        mean, pos = _section(body_lines, pos, "mean_face", n)
        evals, pos = _section(body_lines, pos, "eigenvalues", k)
        faces, pos = _section(body_lines, pos, "eigenfaces", n * k)
        weights, pos = _section(body_lines, pos, "train_weights", k * m)
        labels, pos = _section(body_lines, pos, "train_labels", m)
        subjects, pos = _section(body_lines, pos, "train_subjects", m)
        if pos != len(body_lines):
            raise ModelFormatError("shape inconsistency: trailing data after last section")
        to_arr = lambda vals: np.array([float(v) for v in vals], dtype=np.float64)
        labels = [json.loads(s) for s in labels]
        subjects = [json.loads(s) for s in subjects]
    except ValueError as exc:
        raise ModelFormatError(f"malformed value: {exc}") from None

    body = "\n".join(body_lines) + "\n"
    if checksum != "sha256:" + hashlib.sha256(body.encode("utf-8")).hexdigest():
        raise ModelFormatError("checksum mismatch")

    return EigenModel(
        width=width,
        height=height,
        mean_face=to_arr(mean),
        eigenfaces=to_arr(faces).reshape((n, k), order="F"),
        eigenvalues=to_arr(evals),
        train_weights=to_arr(weights).reshape((k, m), order="F"),
        train_labels=labels,
        train_subjects=subjects,
        config=config,
        total_variance=total_variance,
    )


def load_model(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except UnicodeDecodeError:
        raise ModelFormatError("model file is not UTF-8 text") from None
    return loads_model(text)
