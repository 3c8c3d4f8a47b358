"""Dataset ingestion: CSV manifest plus PGM/PPM images -> normalized pixel vectors.

Manifest format (UTF-8)::

    path,label,subject,split
    # comment lines start with '#'
    images/a.pgm,happy,S01,train

Relative image paths resolve against the manifest's directory.
"""

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import pnm
from ._parallel import ordered_map
from .errors import ImageFormatError, IngestError

MANIFEST_HEADER = ("path", "label", "subject", "split")
SPLITS = ("train", "test")


@dataclass(frozen=True)
class IngestConfig:
    width: int = 64
    height: int = 64
    grayscale_weights: tuple = pnm.LUMA_WEIGHTS
    resample: str = "bilinear"

    def __post_init__(self):
        if self.width < 8 or self.height < 8:
            raise ValueError(f"working size must be at least 8x8, got {self.width}x{self.height}")
        if len(self.grayscale_weights) != 3 or abs(sum(self.grayscale_weights) - 1.0) > 1e-9:
            raise ValueError("grayscale_weights must be three coefficients summing to 1")
        if self.resample != "bilinear":
            raise ValueError(f"unsupported resample method {self.resample!r}")

    @property
    def n_pixels(self):
        return self.width * self.height


@dataclass(frozen=True, eq=False)
class Sample:
    pixels: np.ndarray
    label: str
    subject: str
    split: str
    source_path: str = ""


@dataclass(eq=False)
class Dataset:
    samples: list
    width: int
    height: int
    label_set: list = field(init=False)

    def __post_init__(self):
        n = self.width * self.height
        for i, s in enumerate(self.samples):
            if s.pixels.shape != (n,):
                raise IngestError(f"sample {i} has {s.pixels.size} pixels, expected {n}", path=s.source_path)
        self.label_set = sorted({s.label for s in self.samples})

    def __len__(self):
        return len(self.samples)

    def split(self, name):
        return Dataset([s for s in self.samples if s.split == name], self.width, self.height)

    def label_counts(self):
        counts = {}
        for s in self.samples:
            counts[s.label] = counts.get(s.label, 0) + 1
        return counts


def normalize_label(label):
    return label.strip().lower()


def load_image(path, config=None):
    """Decode, convert to gray, resize and scale an image to a [0, 1] vector (row-major)."""
    config = config or IngestConfig()
    raw = pnm.read(path)
    gray = pnm.to_grayscale(raw.pixels, config.grayscale_weights)
    gray = pnm.resize_bilinear(gray, config.height, config.width)
    return np.clip(gray / raw.maxval, 0.0, 1.0).reshape(-1)


def _read_rows(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise IngestError("manifest not found", path=str(path)) from None
    except (OSError, UnicodeDecodeError) as exc:
        raise IngestError(f"cannot read manifest: {exc}", path=str(path)) from None

    rows = []
    header_seen = False
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = next(csv.reader([line]))
        if not header_seen:
            if tuple(f.strip() for f in fields) != MANIFEST_HEADER:
                raise IngestError(f"manifest header must be {','.join(MANIFEST_HEADER)}", row=lineno, path=str(path))
            header_seen = True
            continue
        if len(fields) != len(MANIFEST_HEADER):
            raise IngestError(f"expected 4 columns, got {len(fields)}", row=lineno, path=str(path))
        rows.append((lineno, [f.strip() for f in fields]))
    if not header_seen:
        raise IngestError("manifest is empty", path=str(path))
    return rows


def load_manifest(path, config=None):
    """Load every manifest row into a Dataset, in manifest order."""
    config = config or IngestConfig()
    base = Path(path).resolve().parent
    rows = _read_rows(path)

    entries = []
    for lineno, (img, label, subject, split) in rows:
        split = split.lower()
        if split not in SPLITS:
            raise IngestError(f"unknown split {split!r}", row=lineno, path=img)
        label = normalize_label(label)
        if not label:
            raise IngestError("empty label", row=lineno, path=img)
        img_path = Path(img)
        if not img_path.is_absolute():
            img_path = base / img_path
        entries.append((lineno, img_path, label, subject, split))

    def load(entry):
        lineno, img_path, label, subject, split = entry
        try:
            pixels = load_image(img_path, config)
        except (OSError, ImageFormatError) as exc:
            raise IngestError(f"unreadable image: {exc}", row=lineno, path=str(img_path)) from None
        return Sample(pixels, label, subject, split, str(img_path))

    return Dataset(ordered_map(load, entries), config.width, config.height)


def vectorize(dataset, split="train"):
    """Data matrix with one column per sample of ``split``, in dataset order."""
    cols = [s.pixels for s in dataset.samples if s.split == split]
    if not cols:
        raise IngestError(f"no samples in split {split!r}")
    return np.column_stack(cols)


def write_manifest(path, rows):
    """Write (path, label, subject, split) rows with the standard header."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(MANIFEST_HEADER)
        writer.writerows(rows)
