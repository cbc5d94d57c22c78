"""Detail/edge remapping functions and their 256-entry lookup table.

A pixel ``i`` is compared with the anchor ``g``. Deviations up to ``sigma``
are details, reshaped by ``sigma * (d / sigma) ** alpha``; larger deviations
are edges, scaled by ``beta * (d - sigma) + sigma``. The sign of ``i - g`` is
reapplied afterwards, so the map is odd-symmetric about ``g``.

The accelerator never evaluates the power function at run time. It indexes a
table by the 8-bit difference ``|i - g|``; since the branch only depends on
that index, one table with a stored split index covers both branches.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .fixedpoint import FULL_SCALE, FRAC_BITS, INTENSITY_MAX

LUT_SIZE = INTENSITY_MAX + 1


@dataclass(frozen=True)
class RemapParams:
    alpha: float
    beta: float
    sigma: float

    def __post_init__(self):
        for name in ("alpha", "beta", "sigma"):
            v = getattr(self, name)
            if not np.isfinite(v):
                raise ValidationError(f"{name} must be finite, got {v}")
        if self.alpha <= 0:
            raise ValidationError(f"alpha must be > 0, got {self.alpha}")
        if self.beta < 0:
            raise ValidationError(f"beta must be >= 0, got {self.beta}")
        if not 0 < self.sigma <= 1:
            raise ValidationError(f"sigma must lie in (0, 1], got {self.sigma}")

    @property
    def is_identity(self):
        return self.alpha == 1 and self.beta == 1


def detail_offset(d, params):
    """Magnitude of the remapped offset for a deviation ``d <= sigma``."""
    return params.sigma * np.power(np.asarray(d, dtype=np.float64) / params.sigma, params.alpha)


def edge_offset(d, params):
    """Magnitude of the remapped offset for a deviation ``d > sigma``."""
    return params.beta * (np.asarray(d, dtype=np.float64) - params.sigma) + params.sigma


def remap_pixel(i, g, params):
    """Remap intensity ``i`` against anchor ``g`` (scalars or arrays).

    The result is not clamped; pyramid arithmetic is signed.
    """
    i = np.asarray(i, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    diff = i - g
    d = np.abs(diff)
    detail = d <= params.sigma
    # evaluate each branch only where it applies so powers never see d > sigma
    mag = np.where(detail, detail_offset(np.where(detail, d, 0.0), params), edge_offset(d, params))
    out = g + np.sign(diff) * mag
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class RemapLut:
    """Offset magnitudes indexed by the 8-bit deviation ``k = |i - g|``.

    ``table`` is fixed point (see :mod:`llfaccel.fixedpoint`); entries with
    ``k <= sigma_index`` come from the detail branch, the rest from the edge
    branch.
    """

    table: np.ndarray
    sigma_index: int
    params: RemapParams


def sigma_to_index(sigma):
    return int(np.floor(sigma * INTENSITY_MAX + 0.5))


def build_lut(params):
    k = np.arange(LUT_SIZE)
    d = k / INTENSITY_MAX
    split = sigma_to_index(params.sigma)
    detail = k <= split
    vals = np.where(
        detail,
        detail_offset(np.where(detail, d, 0.0), params),
        edge_offset(d, params),
    )
    table = np.floor(vals * FULL_SCALE + 0.5).astype(np.int64)
    table.setflags(write=False)
    return RemapLut(table, split, params)


def remap_lut_apply(i, g, lut):
    """Table-driven remap of 8-bit ``i`` against 8-bit ``g``.

    Returns fixed-point samples ``(g << 8) + sign(i - g) * table[|i - g|]``.
    """
    i = np.asarray(i, dtype=np.int64)
    g = np.asarray(g, dtype=np.int64)
    diff = i - g
    mag = lut.table[np.abs(diff)]
    out = (g << FRAC_BITS) + np.where(diff < 0, -mag, mag)
    return out[()] if out.ndim == 0 else out
