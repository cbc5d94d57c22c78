"""Gaussian and Laplacian pyramids in floating point and fixed point.

Planes are 2-D numpy arrays (row-major, ``shape == (height, width)``).
Float arrays take the reference path through :func:`conv3_ref`; integer
arrays are fixed-point samples and take the shift-and-add path. Every
function also accepts stacks of planes on leading axes.

Downsampling keeps the even-indexed samples of the filtered plane, so a
level of size ``d`` maps to ``ceil(d / 2)``. Upsampling zero-inserts the
coarse samples (edge-replicated by one sample on each side) and filters with
``4 * G_hat``, which makes the upsample of a constant exactly that constant.
"""

from dataclasses import dataclass, field

import numpy as np

from .convolution import G_HAT, conv3_ref, conv3_shift_add
from .errors import DepthError, DimensionMismatchError, ValidationError

GAUSSIAN = "gaussian"
LAPLACIAN = "laplacian"


@dataclass
class Pyramid:
    kind: str
    levels: list = field(default_factory=list)

    def __len__(self):
        return len(self.levels)

    def __getitem__(self, i):
        return self.levels[i]

    def __iter__(self):
        return iter(self.levels)

    @property
    def residual(self):
        if self.kind != LAPLACIAN:
            raise ValidationError("only Laplacian pyramids carry a residual")
        return self.levels[-1]

    @property
    def bands(self):
        if self.kind != LAPLACIAN:
            raise ValidationError("only Laplacian pyramids have bands")
        return self.levels[:-1]


def is_fixed(p):
    return np.issubdtype(np.asarray(p).dtype, np.integer)


def _filter(p, step, kernel):
    if is_fixed(p):
        return conv3_shift_add(p, kernel.shift, step=step)
    return conv3_ref(p, kernel, step=step)


def half_size(d):
    return (d + 1) // 2


def max_depth(width, height):
    """Deepest Gaussian pyramid (number of levels) a plane supports."""
    return int(np.floor(np.log2(min(width, height)))) + 1


def downsample(p, kernel=G_HAT):
    """Filter then keep every other sample in both directions."""
    p = np.asarray(p)
    if p.shape[-1] == 0 or p.shape[-2] == 0:
        raise ValidationError("cannot downsample an empty plane")
    return _filter(p, 2, kernel)


def zero_insert(p, scale=1):
    """Place ``p`` (edge-extended by one sample) on a grid twice as fine.

    Sample ``(y, x)`` of ``p`` lands on ``(2y + 2, 2x + 2)``; odd positions
    are zero. ``scale`` multiplies the inserted samples.
    """
    width = [(0, 0)] * (p.ndim - 2) + [(1, 1), (1, 1)]
    ext = np.pad(p, width, mode="edge")
    h, w = ext.shape[-2:]
    z = np.zeros(ext.shape[:-2] + (2 * h - 1, 2 * w - 1), dtype=ext.dtype)
    z[..., ::2, ::2] = ext * scale
    return z


def upsample(p, target_w, target_h, kernel=G_HAT):
    """Double the resolution of ``p`` onto a ``target_h x target_w`` grid.

    ``target_w`` must be ``2w - 1`` or ``2w`` (likewise for the height), so
    either parity of the finer level can be restored.
    """
    p = np.asarray(p)
    h, w = p.shape[-2:]
    if target_w not in (2 * w - 1, 2 * w) or target_h not in (2 * h - 1, 2 * h):
        raise DimensionMismatchError(
            f"cannot upsample {w}x{h} to {target_w}x{target_h}; "
            f"target must be {2 * w - 1} or {2 * w} wide and {2 * h - 1} or {2 * h} high"
        )
    # gain 4 restores the energy lost to the zero samples
    z = zero_insert(p, 4)
    filtered = _filter(z, 1, kernel)
    return filtered[..., 2 : 2 + target_h, 2 : 2 + target_w]


def _check_depth(p, n_levels):
    if n_levels < 1:
        raise ValidationError("pyramid needs at least one level")
    h, w = p.shape[-2:]
    if min(w, h) < 2 ** (n_levels - 1):
        deepest = max_depth(w, h)
        raise DepthError(
            f"{w}x{h} plane supports at most {deepest} pyramid levels, {n_levels} requested",
            deepest,
        )


def gaussian_pyramid(p, n_levels, kernel=G_HAT):
    p = np.asarray(p)
    _check_depth(p, n_levels)
    levels = [p]
    for _ in range(n_levels - 1):
        levels.append(downsample(levels[-1], kernel))
    return Pyramid(GAUSSIAN, levels)


def laplacian_pyramid(p, n_bands, kernel=G_HAT):
    """``n_bands`` band-pass levels followed by the low-pass residual."""
    g = gaussian_pyramid(p, n_bands + 1, kernel).levels
    levels = []
    for fine, coarse in zip(g[:-1], g[1:]):
        h, w = fine.shape[-2:]
        levels.append(fine - upsample(coarse, w, h, kernel))
    levels.append(g[-1])
    return Pyramid(LAPLACIAN, levels)


def collapse(pyr, kernel=G_HAT):
    """Rebuild the finest level by adding upsampled coarser reconstructions."""
    if not isinstance(pyr, Pyramid) or pyr.kind != LAPLACIAN:
        raise ValidationError("collapse needs a Laplacian pyramid")
    if not pyr.levels:
        raise ValidationError("empty pyramid")
    out = pyr.levels[-1]
    for band in reversed(pyr.levels[:-1]):
        h, w = band.shape[-2:]
        ch, cw = out.shape[-2:]
        if half_size(h) != ch or half_size(w) != cw:
            raise DimensionMismatchError(
                f"level of size {w}x{h} cannot sit above a {cw}x{ch} level"
            )
        out = band + upsample(out, w, h, kernel)
    return out
