"""Synthetic expression datasets: one sinusoidal grating per class plus pixel noise.

Class c gets orientation pi * c / classes, spatial frequency 2 + (c mod 3)
cycles per image and phase c * pi / 4. Each image adds i.i.d. Gaussian
noise of std ``noise_sigma`` and is clamped to [0, 1], then written as an
8-bit P5 file next to a standard manifest.
"""

from pathlib import Path

import numpy as np

from . import pnm
from .errors import EvalError
from .ingest import write_manifest

BASE_LABELS = ("happy", "sad", "fear", "surprise", "anger", "disgust", "neutral", "pain", "rotation")
MANIFEST_NAME = "manifest.csv"


def class_labels(classes):
    return [BASE_LABELS[c] if c < len(BASE_LABELS) else f"synthetic_{c:02d}" for c in range(classes)]


def grating(c, classes, width, height, amplitude=0.35):
    theta = np.pi * c / classes
    freq = 2 + (c % 3)
    y, x = np.mgrid[0:height, 0:width]
    u = (x + 0.5) / width
    v = (y + 0.5) / height
    phase = 2 * np.pi * freq * (u * np.cos(theta) + v * np.sin(theta)) + c * np.pi / 4
    return (0.5 + amplitude * np.cos(phase)).reshape(-1)


def generate_synthetic(out_dir, classes=7, per_class_train=20, per_class_test=10,
                       width=64, height=64, noise_sigma=0.05, seed=0):
    """Write a synthetic dataset under ``out_dir``; returns the manifest path."""
    if classes < 2:
        raise ValueError("need at least 2 classes")
    if width < 8 or height < 8:
        raise ValueError("image dimensions must be at least 8x8")
    if noise_sigma < 0:
        raise ValueError("noise_sigma must be nonnegative")
    if per_class_train < 0 or per_class_test < 0:
        raise ValueError("per-class counts must be nonnegative")

    try:
        return _write(Path(out_dir), classes, per_class_train, per_class_test,
                      width, height, noise_sigma, seed)
    except OSError as exc:
        raise EvalError(f"cannot write synthetic dataset to {out_dir}: {exc}") from None


def _write(out, classes, per_class_train, per_class_test, width, height, noise_sigma, seed):
    images = out / "images"
    images.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    rows = []
    for c, label in enumerate(class_labels(classes)):
        base = grating(c, classes, width, height)
        plan = [("train", i) for i in range(per_class_train)] + [("test", i) for i in range(per_class_test)]
        for split, i in plan:
            pixels = base
            if noise_sigma > 0:
                pixels = np.clip(base + rng.normal(0.0, noise_sigma, base.size), 0.0, 1.0)
            name = f"{c:02d}_{label}_{split}_{i:03d}.pgm"
            pnm.write_pgm(images / name, pixels, width, height)
            rows.append((f"images/{name}", label, f"s{i:03d}", split))
    manifest = out / MANIFEST_NAME
    write_manifest(manifest, rows)
    return manifest
