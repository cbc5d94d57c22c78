"""Local Laplacian filtering: reference path and accelerator model.

Every output coefficient at level ``l`` and position ``(x, y)`` comes from a
sub-image of the full-resolution input around ``(2**l x, 2**l y)``: remap the
sub-image against the anchor ``g = G_l[I](x, y)``, build its Laplacian
pyramid and read the level-``l`` coefficient at the matching position.

Sub-image geometry, per axis, with ``c = 2**l * x`` and ``K = 2**(l+2) - 1``::

    lo = max(0, floor((c - K) / 2**(l+1)) * 2**(l+1))
    hi = min(size, c + K + 1)            # exclusive
    local index at level l = (c - lo) / 2**l

Aligning ``lo`` to ``2**(l+1)`` puts the sub-image sampling grid on the
full image's grid at every level the coefficient depends on, and ``K`` covers
the ``3 * 2**l - 1`` sample dependency radius of a level-``l`` coefficient.
Clipped sub-images end exactly where the image ends, so their clamped borders
match the full image's; the coefficient therefore equals the one obtained by
remapping the whole image against ``g``.

``llf_coefficient`` evaluates one coefficient literally. ``run_lpu`` is the
level processing unit: it evaluates a whole band by batching all sub-images
with the same shape through the same remap/filter/downsample/upsample steps.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .convolution import G_HAT, DEFAULT_SHIFT, _shift_add, conv3_ref
from .errors import GeometryError, ValidationError
from .fixedpoint import (
    FRAC_BITS,
    dequantize,
    from_uint8,
    q_to_uint8,
    to_uint8,
)
from .pyramid import LAPLACIAN, Pyramid, collapse, gaussian_pyramid, laplacian_pyramid
from .remap import build_lut, remap_lut_apply, remap_pixel

REFERENCE = "reference"
FIXED_POINT = "fixed_point"
ACCEL_BANDS = 3

# samples per batch; bounds peak memory of a band evaluation
_BATCH_ELEMS = 1 << 21


def half_width(level):
    return 2 ** (level + 2) - 1


def _span(center, level, size):
    k = half_width(level)
    align = 1 << (level + 1)
    lo = np.maximum(0, ((center - k) // align) * align)
    hi = np.minimum(size, center + k + 1)
    return lo, hi


@dataclass(frozen=True)
class SubImageSpec:
    """Geometry of the sub-image feeding coefficient ``(level, x, y)``."""

    level: int
    x: int
    y: int
    image_width: int
    image_height: int

    def __post_init__(self):
        w = -(-self.image_width // 2**self.level)
        h = -(-self.image_height // 2**self.level)
        if not (0 <= self.x < w and 0 <= self.y < h):
            raise ValidationError(
                f"({self.x}, {self.y}) is outside the {w}x{h} grid of level {self.level}"
            )

    @property
    def center(self):
        return (self.x << self.level, self.y << self.level)

    @property
    def half_width(self):
        return half_width(self.level)

    @property
    def bounds(self):
        """``(x0, x1, y0, y1)`` in level-0 pixels, upper bounds exclusive."""
        cx, cy = self.center
        x0, x1 = _span(cx, self.level, self.image_width)
        y0, y1 = _span(cy, self.level, self.image_height)
        return int(x0), int(x1), int(y0), int(y1)

    @property
    def local_index(self):
        """``(row, col)`` of the coefficient in the sub-image's level grid."""
        cx, cy = self.center
        x0, _, y0, _ = self.bounds
        return (cy - y0) >> self.level, (cx - x0) >> self.level


@dataclass(frozen=True)
class LpuConfig:
    level: int
    arithmetic: str = FIXED_POINT

    def __post_init__(self):
        if self.level not in (0, 1, 2):
            raise ValidationError(f"an LPU produces band 0, 1 or 2, not {self.level}")
        if self.arithmetic not in (REFERENCE, FIXED_POINT):
            raise ValidationError(f"unknown arithmetic {self.arithmetic!r}")

    @property
    def iterations(self):
        """Filter/downsample passes before the upsample stage."""
        return self.level + 1


def _as_uint8(image):
    image = np.asarray(image)
    return image if image.dtype == np.uint8 else to_uint8(image)


def llf_coefficient(image, spec, params, g, mode=REFERENCE, lut=None):
    """One output Laplacian coefficient, computed from its sub-image.

    ``g`` is ``G_l[I](x, y)`` in the arithmetic of ``mode``: a float for the
    reference path, a fixed-point sample for the fixed-point path (where the
    image is read as 8-bit intensities).
    """
    x0, x1, y0, y1 = spec.bounds
    if mode == REFERENCE:
        window = np.asarray(image, dtype=np.float64)[y0:y1, x0:x1]
        remapped = remap_pixel(window, g, params)
    elif mode == FIXED_POINT:
        window = _as_uint8(image)[y0:y1, x0:x1]
        lut = lut if lut is not None else build_lut(params)
        remapped = remap_lut_apply(window, int(q_to_uint8(g)), lut)
    else:
        raise ValidationError(f"unknown arithmetic {mode!r}")
    band = laplacian_pyramid(remapped, spec.level + 1)[spec.level]
    row, col = spec.local_index
    if not (0 <= row < band.shape[0] and 0 <= col < band.shape[1]):
        raise GeometryError(f"coefficient {row, col} falls outside a {band.shape} sub-image band")
    return band[row, col]


# batched band evaluation


def _axis_groups(n_level, level, size):
    """Split the level grid of one axis by sub-image length and local index."""
    coords = np.arange(n_level)
    center = coords << level
    lo, hi = _span(center, level, size)
    length = hi - lo
    offset = (center - lo) >> level
    keys = np.stack([length, offset], axis=1)
    uniq, inverse = np.unique(keys, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    return [
        (int(n), int(off), coords[inverse == i], lo[inverse == i])
        for i, (n, off) in enumerate(uniq)
    ]


def _filter(stack, step, fixed):
    if fixed:
        return _shift_add(stack, DEFAULT_SHIFT, step)
    return conv3_ref(stack, G_HAT, step=step)


def _upsample_at(coarse, row, col, fixed):
    """Upsampled value at fine position ``(row, col)`` for a stack of levels."""
    h, w = coarse.shape[-2:]
    rows = np.clip(np.arange(row // 2 - 1, row // 2 + 2), 0, h - 1)
    cols = np.clip(np.arange(col // 2 - 1, col // 2 + 2), 0, w - 1)
    nb = coarse[..., rows, :][..., cols]
    z = np.zeros(nb.shape[:-2] + (5, 5), dtype=nb.dtype)
    z[..., ::2, ::2] = nb * 4
    # only one output is needed, so filter just its 3x3 neighbourhood
    r, c = 2 + row % 2, 2 + col % 2
    win = z[..., r - 1 : r + 2, c - 1 : c + 2]
    if fixed:
        s = DEFAULT_SHIFT
        x1 = (win[..., 0, :] >> s) + (win[..., 1, :] >> (s - 1)) + (win[..., 2, :] >> s)
        return x1[..., 2] + (x1[..., 1] << 1) + ((x1[..., 0] << 1) >> 1)
    return np.einsum("...ij,ij->...", win, G_HAT.weights)


def _stack_coefficients(remapped, level, row, col, fixed):
    g = remapped
    for _ in range(level):
        g = _filter(g, 2, fixed)
    coarse = _filter(g, 2, fixed)
    if row >= g.shape[-2] or col >= g.shape[-1]:
        raise GeometryError(f"local index {row, col} outside level grid {g.shape[-2:]}")
    return g[..., row, col] - _upsample_at(coarse, row, col, fixed)


def _progression(a):
    """``(start, step)`` if ``a`` is an arithmetic progression, else None."""
    if len(a) == 1:
        return int(a[0]), 1
    steps = np.diff(a)
    if steps[0] > 0 and np.all(steps == steps[0]):
        return int(a[0]), int(steps[0])
    return None


def _windows(image, y0s, x0s, ny, nx):
    """Stack of ``ny x nx`` sub-images with top-left corners ``y0s x x0s``."""
    py, px = _progression(y0s), _progression(x0s)
    if py is not None and px is not None:
        view = np.lib.stride_tricks.sliding_window_view(image, (ny, nx))
        return view[py[0] :: py[1], px[0] :: px[1]][: len(y0s), : len(x0s)]
    ri = y0s[:, None] + np.arange(ny)
    ci = x0s[:, None] + np.arange(nx)
    return image[ri[:, None, :, None], ci[None, :, None, :]]


def _band(image, anchors, level, remap, fixed, out_dtype):
    """Evaluate every coefficient of one output band."""
    height, width = image.shape
    n_rows, n_cols = anchors.shape
    out = np.empty((n_rows, n_cols), dtype=out_dtype)
    for ny, oy, ys, y0s in _axis_groups(n_rows, level, height):
        for nx, ox, xs, x0s in _axis_groups(n_cols, level, width):
            per_row = len(xs) * ny * nx
            chunk = max(1, _BATCH_ELEMS // per_row)
            for start in range(0, len(ys), chunk):
                yc = ys[start : start + chunk]
                window = _windows(image, y0s[start : start + chunk], x0s, ny, nx)
                g = anchors[np.ix_(yc, xs)][..., None, None]
                coef = _stack_coefficients(remap(window, g), level, oy, ox, fixed)
                out[np.ix_(yc, xs)] = coef
    return out


def _lut_remap(lut):
    # every (anchor, intensity) pair expanded once; same integers as remap_lut_apply
    levels = np.arange(256)
    table = remap_lut_apply(levels[None, :], levels[:, None], lut)
    if np.abs(table).max() < (1 << 26):
        table = table.astype(np.int32)

    def remap(window, g8):
        return table[g8, window]

    return remap


def run_lpu(channel, gaussian_level, cfg, lut):
    """One level processing unit: a whole output band for one channel.

    ``gaussian_level`` is ``G_level`` of the channel in the arithmetic of
    ``cfg`` (fixed-point samples for the accelerator path). In fixed point the
    channel is read as 8-bit intensities, every anchor is reduced to 8 bits for
    the table lookup, and the band comes back as fixed-point samples.
    """
    gaussian_level = np.asarray(gaussian_level)
    h, w = np.shape(channel)
    expect = (-(-h // 2**cfg.level), -(-w // 2**cfg.level))
    if gaussian_level.shape != expect:
        raise ValidationError(
            f"level-{cfg.level} Gaussian plane should be {expect}, got {gaussian_level.shape}"
        )
    if cfg.arithmetic == FIXED_POINT:
        image = _as_uint8(channel)
        anchors = q_to_uint8(gaussian_level)
        return _band(image, anchors, cfg.level, _lut_remap(lut), True, np.int64)
    params = lut.params
    image = np.asarray(channel, dtype=np.float64)

    def remap(window, g):
        return remap_pixel(window, g, params)

    return _band(image, gaussian_level.astype(np.float64), cfg.level, remap, False, np.float64)


def _run_jobs(jobs, threads):
    if threads is None or threads <= 1 or len(jobs) <= 1:
        return [job() for job in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(job) for job in jobs]
        return [f.result() for f in futures]


def _timed(fn, *args):
    t0 = time.perf_counter()
    result = fn(*args)
    return result, time.perf_counter() - t0


def llf_reference(image, params, n_bands=3, threads=1, timings=None):
    """Floating-point local Laplacian filter of one plane."""
    image = np.asarray(image, dtype=np.float64)
    t0 = time.perf_counter()
    g = gaussian_pyramid(image, n_bands + 1).levels
    t1 = time.perf_counter()
    lut = build_lut(params)
    jobs = [
        (lambda l=l: _timed(run_lpu_reference, image, g[l], l, lut))
        for l in range(n_bands)
    ]
    results = _run_jobs(jobs, threads)
    t2 = time.perf_counter()
    out = collapse(Pyramid(LAPLACIAN, [r for r, _ in results] + [g[n_bands]]))
    t3 = time.perf_counter()
    if timings is not None:
        _add(timings, "host_pyramid", t1 - t0)
        _add(timings, "bands", t2 - t1)
        for l, (_, dt) in enumerate(results):
            _add(timings, f"band_{l}", dt)
        _add(timings, "collapse", t3 - t2)
    return out


def run_lpu_reference(image, gaussian_level, level, lut):
    """Reference-arithmetic band of any depth (not limited to LPU levels 0-2)."""
    params = lut.params

    def remap(window, g):
        return remap_pixel(window, g, params)

    return _band(image, np.asarray(gaussian_level, dtype=np.float64), level, remap, False, np.float64)


def _add(timings, key, dt):
    timings[key] = timings.get(key, 0.0) + dt


def _channels(image_rgb):
    planes = list(image_rgb)
    if not planes:
        raise ValidationError("image has no channels")
    shape = np.shape(planes[0])
    if any(np.shape(p) != shape for p in planes):
        raise ValidationError("channels must share dimensions")
    return planes


def llf_reference_rgb(image_rgb, params, n_bands=3, threads=1, timings=None):
    planes = _channels(image_rgb)
    return np.stack([llf_reference(p, params, n_bands, threads, timings) for p in planes])


def accel_host_pyramid(channel):
    """Host side: fixed-point Gaussian pyramid of one 8-bit channel."""
    return gaussian_pyramid(from_uint8(_as_uint8(channel)), ACCEL_BANDS + 1).levels


def llf_accel_model_q(image_rgb, params, threads=1, timings=None):
    """Accelerator model returning fixed-point output planes ``(C, H, W)``."""
    planes = [_as_uint8(p) for p in _channels(image_rgb)]
    lut = build_lut(params)
    t0 = time.perf_counter()
    host = [accel_host_pyramid(p) for p in planes]
    t1 = time.perf_counter()
    # nine independent units: channel x level
    jobs = [
        (lambda c=c, l=l: _timed(run_lpu, planes[c], host[c][l], LpuConfig(l), lut))
        for c in range(len(planes))
        for l in range(ACCEL_BANDS)
    ]
    results = _run_jobs(jobs, threads)
    t2 = time.perf_counter()
    out = []
    for c in range(len(planes)):
        bands = [results[c * ACCEL_BANDS + l][0] for l in range(ACCEL_BANDS)]
        out.append(collapse(Pyramid(LAPLACIAN, bands + [host[c][ACCEL_BANDS]])))
    t3 = time.perf_counter()
    if timings is not None:
        _add(timings, "host_pyramid", t1 - t0)
        _add(timings, "bands", t2 - t1)
        for i, (_, dt) in enumerate(results):
            _add(timings, f"band_{i % ACCEL_BANDS}", dt)
        _add(timings, "collapse", t3 - t2)
    return np.stack(out)


def llf_accel_model(image_rgb, params, threads=1, timings=None):
    """Bit-exact model of the accelerator; returns normalized float planes.

    Input planes are read as 8-bit intensities. Output samples are not
    clamped; clamping happens when the image is exported.
    """
    return dequantize(llf_accel_model_q(image_rgb, params, threads, timings))


def accel_to_uint8(q):
    """Export fixed-point output planes as 8-bit samples."""
    return q_to_uint8(q)
