"""Fixed-point carrier for the accelerator datapath.

Samples are signed integers holding an 8-bit intensity with ``FRAC_BITS``
extra fractional bits, so intensity 255 (normalized 1.0) is ``255 << 8``.
"""

import numpy as np

FRAC_BITS = 8
ONE_LSB = 1 << FRAC_BITS
INTENSITY_MAX = 255
FULL_SCALE = INTENSITY_MAX * ONE_LSB
# signed 24-bit datapath
SAMPLE_LIMIT = 1 << 23


def quantize(plane):
    """Normalized float plane -> fixed-point integers (round to nearest)."""
    return np.floor(np.asarray(plane, dtype=np.float64) * FULL_SCALE + 0.5).astype(np.int64)


def dequantize(q):
    """Fixed-point integers -> normalized float plane."""
    return np.asarray(q, dtype=np.float64) / FULL_SCALE


def to_uint8(plane):
    """Clamp a normalized plane to [0, 1] and round half-up to 8 bits."""
    p = np.clip(np.asarray(plane, dtype=np.float64), 0.0, 1.0)
    return np.floor(p * INTENSITY_MAX + 0.5).astype(np.uint8)


def from_uint8(u8):
    """8-bit intensities -> fixed-point samples (exact)."""
    return np.asarray(u8, dtype=np.int64) << FRAC_BITS


def q_to_uint8(q):
    """Fixed-point samples -> 8-bit intensities, round half-up and clamp."""
    r = (np.asarray(q, dtype=np.int64) + (ONE_LSB >> 1)) >> FRAC_BITS
    return np.clip(r, 0, INTENSITY_MAX).astype(np.uint8)


def check_range(q):
    if q.size and int(np.abs(q).max()) >= SAMPLE_LIMIT:
        raise OverflowError("fixed-point sample outside the signed 24-bit range")
    return q
