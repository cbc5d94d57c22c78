"""Mean squared error and PSNR on 8-bit images."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

PEAK = 255.0


@dataclass(frozen=True)
class QualityReport:
    mse: float
    psnr_db: float
    per_channel: tuple = ()

    @property
    def identical(self):
        return self.mse == 0

    def format_psnr(self):
        return "inf" if self.identical else f"{self.psnr_db:.2f}"


def _psnr_from_mse(mse):
    return math.inf if mse == 0 else 10.0 * math.log10(PEAK**2 / mse)


def psnr(a, b):
    """PSNR between two 8-bit images of equal shape.

    For 3-D arrays the first axis is taken as the channel axis (planar
    layout) and a per-channel breakdown is included.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValidationError(f"image shapes differ: {a.shape} vs {b.shape}")
    if a.size == 0:
        raise ValidationError("empty images")
    diff = a.astype(np.float64) - b.astype(np.float64)
    sq = diff * diff
    mse = float(sq.mean())
    per_channel = ()
    if a.ndim == 3:
        per_channel = tuple(_psnr_from_mse(float(c.mean())) for c in sq)
    return QualityReport(mse, _psnr_from_mse(mse), per_channel)
