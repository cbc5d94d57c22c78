"""Deterministic synthetic test cards.

A card combines a hard step edge, sinusoidal texture and a smooth gradient,
the three structures edge-aware filters are judged on. Texture contrast
sweeps from faint (0.02) to strong (0.35) across each card so that detail
sits on both sides of every sigma in the usual parameter grids, as it does
in photographs.
"""

import numpy as np

CORPUS_SIZE = (96, 96)


def test_card(width, height, variant=0):
    """Planar RGB card ``(3, height, width)`` with samples in [0, 1]."""
    y, x = np.mgrid[0:height, 0:width].astype(np.float64)
    u = x / max(width - 1, 1)
    v = y / max(height - 1, 1)
    if variant == 0:
        step = np.where(u < 0.5, 0.25, 0.75)
        texture = (0.02 + 0.33 * v) * np.sin(2 * np.pi * x / 6.0) * np.sin(2 * np.pi * y / 9.0)
        gradient = 0.15 * (v - 0.5)
    elif variant == 1:
        step = np.where(u + v < 1.0, 0.3, 0.8)
        r = np.hypot(x - width / 2, y - height / 2)
        texture = (0.02 + 0.33 * u) * np.sin(2 * np.pi * r / 5.0)
        gradient = 0.12 * (u - 0.5)
    elif variant == 2:
        step = np.where((u > 0.3) & (u < 0.7) & (v > 0.3) & (v < 0.7), 0.85, 0.2)
        texture = (0.02 + 0.33 * (1 - v)) * np.sin(2 * np.pi * (x + 2 * y) / 7.0)
        gradient = 0.1 * (u + v - 1.0)
    else:
        raise ValueError(f"unknown card variant {variant}")
    base = step + texture + gradient
    tint = np.array([1.0, 0.9, 0.75])[:, None, None]
    shift = np.array([0.0, 0.03, 0.06])[:, None, None]
    return np.clip(base[None] * tint + shift, 0.0, 1.0)


def corpus(size=CORPUS_SIZE):
    """The shipped cards, quantized to 8 bits as they would be stored."""
    w, h = size
    return {
        f"card{v}": np.floor(test_card(w, h, v) * 255 + 0.5) / 255 for v in range(3)
    }
