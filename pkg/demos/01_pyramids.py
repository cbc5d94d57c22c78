"""
Gaussian and Laplacian pyramids
===============================

Build both pyramids of a synthetic card, rebuild the image from its
Laplacian pyramid, and compare the floating-point and fixed-point paths.
"""

import numpy as np

from llfaccel.cards import corpus
from llfaccel.fixedpoint import dequantize, from_uint8, to_uint8
from llfaccel.pyramid import collapse, gaussian_pyramid, laplacian_pyramid

# one channel of the first card, as stored on disk (8-bit values)
img = corpus()["card0"][0]
print("input", img.shape, "range", img.min(), img.max())

# every level halves the size, rounding up for odd sizes
g = gaussian_pyramid(img, 4)
print("gaussian levels:", [lv.shape for lv in g])

# band l holds what level l has that the blurred level l+1 lacks
lp = laplacian_pyramid(img, 3)
for l, band in enumerate(lp.bands):
    print(f"band {l}: std {band.std():.4f}")
print("residual mean", lp.residual.mean(), "vs image mean", img.mean())

# collapsing undoes the construction up to rounding noise
print("float round trip max error", np.abs(collapse(lp) - img).max())

# fixed point: the same pyramid built with shift-and-add filters on integers
q = from_uint8(to_uint8(img))
lq = laplacian_pyramid(q, 3)
print("fixed-point round trip exact:", np.array_equal(collapse(lq), q))

# truncating shifts make the fixed-point bands drift a little from the float ones
for l, (a, b) in enumerate(zip(lq.bands, lp.bands)):
    drift = np.abs(dequantize(a) - b).max() * 255
    print(f"band {l}: fixed vs float max difference {drift:.3f} intensity levels")
