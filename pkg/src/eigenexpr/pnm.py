"""Netpbm (PGM/PPM) reading and writing, grayscale conversion, bilinear resize."""

from dataclasses import dataclass

import numpy as np

from .errors import ImageFormatError

_CHANNELS = {b"P2": 1, b"P5": 1, b"P3": 3, b"P6": 3}
LUMA_WEIGHTS = (0.299, 0.587, 0.114)


@dataclass(frozen=True, eq=False)
class RawImage:
    """Decoded samples as float64, shape (height, width) or (height, width, 3)."""

    pixels: np.ndarray
    maxval: int
    magic: str

    @property
    def height(self):
        return self.pixels.shape[0]

    @property
    def width(self):
        return self.pixels.shape[1]


def _header_tokens(data, count, pos):
    """Read ``count`` whitespace-separated header tokens, skipping # comments."""
    tokens = []
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos:pos + 1].isspace():
            pos += 1
        if pos >= n:
            raise ImageFormatError("truncated header")
        if data[pos:pos + 1] == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < n and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
            pos += 1
        tokens.append(data[start:pos])
    return tokens, pos


def decode(data):
    """Decode P2/P3/P5/P6 bytes into a RawImage."""
    magic = data[:2]
    if magic not in _CHANNELS:
        raise ImageFormatError(f"unsupported format (magic {magic!r})")
    channels = _CHANNELS[magic]
    try:
        (w, h, mv), pos = _header_tokens(data, 3, 2)
        width, height, maxval = int(w), int(h), int(mv)
    except ValueError as exc:
        raise ImageFormatError(f"malformed header: {exc}") from None
    if width <= 0 or height <= 0:
        raise ImageFormatError(f"bad dimensions {width}x{height}")
    if maxval <= 0 or maxval > 65535:
        raise ImageFormatError(f"maxval must be in 1..65535, got {maxval}")
    count = width * height * channels

    if magic in (b"P5", b"P6"):
        # exactly one whitespace byte separates the header from the raster
        pos += 1
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        need = count * dtype.itemsize
        raster = data[pos:pos + need]
        if len(raster) < need:
            raise ImageFormatError(f"truncated raster: need {need} bytes, got {len(raster)}")
        values = np.frombuffer(raster, dtype=dtype).astype(np.float64)
    else:
        body = data[pos:].split()
        if len(body) < count:
            raise ImageFormatError(f"truncated raster: need {count} samples, got {len(body)}")
        try:
            values = np.array([int(t) for t in body[:count]], dtype=np.float64)
        except ValueError:
            raise ImageFormatError("non-integer sample in ASCII raster") from None

    if np.any(values > maxval):
        raise ImageFormatError("sample exceeds maxval")
    shape = (height, width) if channels == 1 else (height, width, 3)
    return RawImage(values.reshape(shape), maxval, magic.decode())


def read(path):
    with open(path, "rb") as fh:
        return decode(fh.read())


def to_grayscale(pixels, weights=LUMA_WEIGHTS):
    if pixels.ndim == 2:
        return pixels
    r, g, b = weights
    return r * pixels[..., 0] + g * pixels[..., 1] + b * pixels[..., 2]


def resize_bilinear(img, height, width):
    """Bilinear resize of a 2-D array using pixel-center alignment.

    Output pixel i samples source coordinate (i + 0.5) * in/out - 0.5,
    clamped to the valid range, so equal sizes map to the identity.
    """
    in_h, in_w = img.shape
    if (in_h, in_w) == (height, width):
        return img.copy()

    def axis(n_out, n_in):
        src = (np.arange(n_out) + 0.5) * (n_in / n_out) - 0.5
        src = np.clip(src, 0.0, n_in - 1)
        lo = np.floor(src).astype(int)
        hi = np.minimum(lo + 1, n_in - 1)
        return lo, hi, src - lo

    y0, y1, fy = axis(height, in_h)
    x0, x1, fx = axis(width, in_w)
    fy = fy[:, None]
    top = img[y0][:, x0] * (1 - fx) + img[y0][:, x1] * fx
    bottom = img[y1][:, x0] * (1 - fx) + img[y1][:, x1] * fx
    return top * (1 - fy) + bottom * fy


def encode_pgm(pixels, width, height, maxval=255):
    """Binary P5 encoding of a row-major vector of values in [0, 1]."""
    values = np.asarray(pixels, dtype=np.float64).reshape(height, width)
    q = np.rint(np.clip(values, 0.0, 1.0) * maxval)
    dtype = ">u2" if maxval > 255 else "u1"
    header = f"P5\n{width} {height}\n{maxval}\n".encode("ascii")
    return header + q.astype(dtype).tobytes()


def write_pgm(path, pixels, width, height, maxval=255):
    with open(path, "wb") as fh:
        fh.write(encode_pgm(pixels, width, height, maxval))
