"""Independent reference implementations used by the tests.

Nothing here imports from llfaccel. The float path is written as explicit
1-D operator matrices built from the defining formulas; the fixed-point path
is written as plain integer loops. Both are slow and obvious on purpose.
"""

import math
from functools import lru_cache

import numpy as np

TAPS = (1, 2, 1)


def clamp(i, n):
    return min(max(i, 0), n - 1)


@lru_cache(maxsize=None)
def blur_matrix(n):
    """``n x n`` matrix of the 1-D [1,2,1]/4 filter with replicated borders."""
    m = np.zeros((n, n))
    for y in range(n):
        for t, wt in zip((-1, 0, 1), TAPS):
            m[y, clamp(y + t, n)] += wt / 4.0
    m.setflags(write=False)
    return m


@lru_cache(maxsize=None)
def down_matrix(n):
    """Blur, then keep even indices: ``ceil(n/2) x n``."""
    m = blur_matrix(n)[::2].copy()
    m.setflags(write=False)
    return m


@lru_cache(maxsize=None)
def up_matrix(n_fine, n_coarse):
    """Upsampling onto ``n_fine`` samples with per-axis gain 2.

    Coarse sample ``k`` sits at fine position ``2k``; the coarse line is
    extended by replicating its end samples (coarse index -1 and
    ``n_coarse``), and the zero-stuffed line is blurred with [1,2,1]/4.
    """
    m = np.zeros((n_fine, n_coarse))
    for y in range(n_fine):
        for k in range(-1, n_coarse + 1):
            t = y - 2 * k
            if -1 <= t <= 1:
                m[y, clamp(k, n_coarse)] += 2 * TAPS[t + 1] / 4.0
    m.setflags(write=False)
    return m


def conv3(p):
    p = np.asarray(p, dtype=np.float64)
    h, w = p.shape
    return blur_matrix(h) @ p @ blur_matrix(w).T


def conv3_loops(p):
    """Direct 9-tap sum, for checking the matrix form itself."""
    p = np.asarray(p, dtype=np.float64)
    h, w = p.shape
    out = np.zeros_like(p)
    for y in range(h):
        for x in range(w):
            acc = 0.0
            for dy, wy in zip((-1, 0, 1), TAPS):
                for dx, wx in zip((-1, 0, 1), TAPS):
                    acc += wy * wx * p[clamp(y + dy, h), clamp(x + dx, w)]
            out[y, x] = acc / 16.0
    return out


def down(p):
    h, w = p.shape
    return down_matrix(h) @ p @ down_matrix(w).T


def up(p, h, w):
    ch, cw = p.shape
    return up_matrix(h, ch) @ p @ up_matrix(w, cw).T


def gaussian(p, n_levels):
    levels = [np.asarray(p, dtype=np.float64)]
    for _ in range(n_levels - 1):
        levels.append(down(levels[-1]))
    return levels


def laplacian(p, n_bands):
    g = gaussian(p, n_bands + 1)
    bands = [g[l] - up(g[l + 1], *g[l].shape) for l in range(n_bands)]
    return bands + [g[n_bands]]


def collapse(levels):
    out = levels[-1]
    for band in reversed(levels[:-1]):
        out = band + up(out, *band.shape)
    return out


# fixed point


def shift_add_loops(p, s=4):
    """Integer loops: vertical (a>>s)+(b>>(s-1))+(c>>s), then 1,2,1 across."""
    p = [[int(v) for v in row] for row in np.asarray(p)]
    h, w = len(p), len(p[0])
    x1 = [
        [
            (p[clamp(y - 1, h)][x] >> s) + (p[y][x] >> (s - 1)) + (p[clamp(y + 1, h)][x] >> s)
            for x in range(w)
        ]
        for y in range(h)
    ]
    out = [
        [
            x1[y][clamp(x + 1, w)] + (x1[y][x] << 1) + ((x1[y][clamp(x - 1, w)] << 1) >> 1)
            for x in range(w)
        ]
        for y in range(h)
    ]
    return np.array(out, dtype=np.int64)


def down_q(p):
    return shift_add_loops(p)[::2, ::2]


def up_q(p, h, w):
    ch, cw = p.shape
    z = np.zeros((2 * ch + 3, 2 * cw + 3), dtype=np.int64)
    for i in range(-1, ch + 1):
        for j in range(-1, cw + 1):
            z[2 * i + 2, 2 * j + 2] = 4 * int(p[clamp(i, ch), clamp(j, cw)])
    return shift_add_loops(z)[2 : 2 + h, 2 : 2 + w]


def laplacian_q(p, n_bands):
    g = [np.asarray(p, dtype=np.int64)]
    for _ in range(n_bands):
        g.append(down_q(g[-1]))
    return [g[l] - up_q(g[l + 1], *g[l].shape) for l in range(n_bands)] + [g[n_bands]]


# remapping


def remap_scalar(i, g, alpha, beta, sigma):
    d = abs(i - g)
    sgn = 1 if i > g else (-1 if i < g else 0)
    if d <= sigma:
        return g + sgn * sigma * (d / sigma) ** alpha
    return g + sgn * (beta * (d - sigma) + sigma)


def lut_entries(alpha, beta, sigma, one=255 * 256):
    """256 LUT magnitudes, rounded to nearest, detail branch up to round(255 sigma)."""
    split = math.floor(sigma * 255 + 0.5)
    out = []
    for k in range(256):
        d = k / 255
        v = sigma * (d / sigma) ** alpha if k <= split else beta * (d - sigma) + sigma
        out.append(math.floor(v * one + 0.5))
    return out


def psnr(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    mse = float(np.mean((a - b) ** 2))
    return math.inf if mse == 0 else 10 * math.log10(255.0**2 / mse)
