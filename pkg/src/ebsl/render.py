"""Grayscale rendering of evidence matrices.

Writes binary portable graymaps (P5, maxval 255) with a logarithmic pixel
mapping: an entry e maps to round(255 * (1 - log(1+e)/log(1+e_max))), so
zero evidence is white and the reference maximum is black.  Output bytes
depend only on the input values, which makes golden-file testing trivial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import EbslError
from .ingest import EvidenceMatrix

MODES = ("positive", "total")


@dataclass(frozen=True)
class RenderSpec:
    mode: str = "total"
    max_reference: float | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise EbslError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.max_reference is not None and not self.max_reference > 0:
            raise EbslError(f"max_reference must be > 0, got {self.max_reference}")


def evidence_pixels(values: np.ndarray, max_reference: float | None = None) -> np.ndarray:
    """Map nonnegative values to uint8 pixels on the logarithmic gray scale."""
    values = np.asarray(values, dtype=np.float64)
    e_max = float(values.max()) if max_reference is None else max_reference
    if e_max <= 0.0:
        return np.full(values.shape, 255, dtype=np.uint8)
    ratio = np.log1p(values) / math.log1p(e_max)
    v = np.floor(255.0 * (1.0 - ratio) + 0.5)
    return np.clip(v, 0, 255).astype(np.uint8)


def write_pgm(pixels: np.ndarray, path: str | Path) -> None:
    """Write a binary P5 graymap with maxval 255."""
    pixels = np.asarray(pixels, dtype=np.uint8)
    if pixels.ndim != 2:
        raise EbslError(f"pixel array must be 2-D, got shape {pixels.shape}")
    rows, cols = pixels.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{cols} {rows}\n255\n".encode("ascii"))
        fh.write(pixels.tobytes())


def render_matrix(E: EvidenceMatrix, spec: RenderSpec, path: str | Path) -> None:
    """Render an evidence matrix (positive or total mass) to a PGM file."""
    values = E.p if spec.mode == "positive" else E.p + E.n
    write_pgm(evidence_pixels(values, spec.max_reference), path)
