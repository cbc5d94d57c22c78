"""3x3 approximated Gaussian kernel and the shift-and-add convolution engine.

``conv3_ref`` is the exact real-valued filter. ``conv3_shift_add`` models the
streaming engine bit for bit: a column of samples enters per cycle, an array of
shift-and-accumulate units produces ``X1``, and two further pipeline stages
hold ``X2 = X1 << 1`` and ``X3 = X2 >> 1``. The filtered column is the sum of the
three stages once the pipeline is full.

Both filters work on the last two axes, so a stack of sub-images can be
filtered in one call. Borders are clamped (edge replicated).
"""

from dataclasses import dataclass

from functools import lru_cache

import numpy as np

from .fixedpoint import check_range

DEFAULT_SHIFT = 4
PIPELINE_FILL = 2


@dataclass(frozen=True)
class Kernel3:
    """Binomial 3x3 kernel ``outer([1,2,1], [1,2,1]) / 2**shift``."""

    shift: int = DEFAULT_SHIFT

    @property
    def weights(self):
        taps = np.array([1.0, 2.0, 1.0])
        return np.outer(taps, taps) / 2.0**self.shift


G_HAT = Kernel3()


def _pad_edge(p):
    width = [(0, 0)] * (p.ndim - 2) + [(1, 1), (1, 1)]
    return np.pad(p, width, mode="edge")


def conv3_ref(p, kernel=G_HAT, step=1):
    """Exact 3x3 convolution with clamp-to-edge borders.

    With ``step=2`` only the outputs at even rows and columns are produced,
    which is what a filter-then-decimate stage keeps.
    """
    p = np.asarray(p, dtype=np.float64)
    if p.shape[-1] == 0 or p.shape[-2] == 0:
        raise ValueError("cannot filter an empty plane")
    h, w = p.shape[-2:]
    padded = _pad_edge(p)
    k = kernel.weights
    out = None
    for i in range(3):
        for j in range(3):
            term = k[i, j] * padded[..., i : i + h : step, j : j + w : step]
            out = term if out is None else out + term
    return out


def sau(a, b, c, s=DEFAULT_SHIFT):
    """Shift-and-accumulate unit: ``(a >> s) + (b >> (s-1)) + (c >> s)``.

    Shifts are arithmetic, so negative operands round toward minus infinity.
    """
    return (a >> s) + (b >> (s - 1)) + (c >> s)


@lru_cache(maxsize=256)
def _taps(n, step):
    """Clamped indices of the previous, current and next sample."""
    mid = np.arange(0, n, step)
    taps = np.maximum(mid - 1, 0), mid, np.minimum(mid + 1, n - 1)
    for t in taps:
        t.setflags(write=False)
    return taps


def _shift_add(p, s, step):
    h, w = p.shape[-2:]
    up, _, down = _taps(h, step)
    # stage 1 on every column; rows are the data-parallel axis
    x1 = np.take(p, up, axis=-2) >> s
    x1 += p[..., 0:h:step, :] >> (s - 1)
    x1 += np.take(p, down, axis=-2) >> s
    left, mid, right = _taps(w, step)
    x2 = np.take(x1, mid, axis=-1) << 1
    x3 = (np.take(x1, left, axis=-1) << 1) >> 1
    out = np.take(x1, right, axis=-1)
    out += x2
    out += x3
    return out


def conv3_shift_add(p, s=DEFAULT_SHIFT, step=1):
    """Bit-exact model of the shift-and-add convolution engine.

    Parameters
    ----------
    p : ndarray of int
        Fixed-point plane (or stack of planes on the leading axes).
    s : int
        Kernel scale shift; the engine is built for ``s == 4``.
    step : int
        1 for a full filter, 2 to emit only the samples a downsampler keeps.
    """
    p = np.asarray(p)
    if not np.issubdtype(p.dtype, np.integer):
        raise TypeError("conv3_shift_add expects an integer (fixed-point) plane")
    if p.shape[-1] == 0 or p.shape[-2] == 0:
        raise ValueError("cannot filter an empty plane")
    if s < 2:
        raise ValueError("shift must be at least 2")
    return _shift_add(check_range(p.astype(np.int64, copy=False)), s, step)


@dataclass
class ColumnPipelineState:
    """Contents of the three pipeline stages after one clock cycle."""

    cycle: int
    fill_count: int
    x1: np.ndarray
    x2: np.ndarray
    x3: np.ndarray

    @property
    def full(self):
        return self.fill_count >= PIPELINE_FILL

    @property
    def output(self):
        if not self.full:
            return None
        return self.x1 + self.x2 + self.x3


def pipeline_trace(p, s=DEFAULT_SHIFT, pad=True):
    """Cycle-by-cycle states of the column pipeline streaming over ``p``.

    With ``pad=True`` the plane is clamp-padded on all sides, so ``w + 2``
    columns enter and the ``w`` full-pipeline cycles carry exactly the rows
    of ``conv3_shift_add(p)``. With ``pad=False`` the engine sees the raw
    plane: ``l`` rows give ``l - 2`` outputs per column and ``w - 2`` output
    columns.
    """
    p = np.asarray(p, dtype=np.int64)
    cols = _pad_edge(p) if pad else p
    height = cols.shape[0]
    if height < 3:
        raise ValueError("column height must be at least 3")
    zero = np.zeros(height - 2, dtype=np.int64)
    x1, x2 = zero, zero
    states = []
    for t in range(cols.shape[1]):
        x0 = cols[:, t]
        # registers advance together on the clock edge
        x3 = x2 >> 1
        x2 = x1 << 1
        x1 = sau(x0[:-2], x0[1:-1], x0[2:], s)
        states.append(ColumnPipelineState(t, t, x1, x2, x3))
    return states


def trace_to_plane(states):
    """Stack the outputs of the full-pipeline cycles into a plane."""
    outs = [st.output for st in states if st.full]
    if not outs:
        return np.zeros((0, 0), dtype=np.int64)
    return np.stack(outs, axis=1)
