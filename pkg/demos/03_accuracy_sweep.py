"""
Accelerator accuracy over the parameter grid
============================================

Run both paths over the 18-cell grid (an alpha block at beta = 1 and a beta
block at alpha = 1, each over three sigmas) and print PSNR in table form.
Takes about twenty seconds per card.
"""

import sys

from llfaccel.cards import corpus
from llfaccel.cli import GRID_SIGMAS, default_grid, sweep

name = sys.argv[1] if len(sys.argv) > 1 else "card0"
rows = sweep(corpus()[name], default_grid())
cell = {(a, b, s): r.format_psnr() for a, b, s, r in rows}

print(f"PSNR (dB), accelerator model vs reference, {name}")
print(f"{'':16s}" + "".join(f"sigma={s:<6g}  " for s in GRID_SIGMAS))
for a in (0.25, 0.5, 2.0):
    print(f"{'beta=1 a=' + format(a, 'g'):16s}" + "".join(f"{cell[(a, 1.0, s)]:14s}" for s in GRID_SIGMAS))
for b in (0.0, 0.5, 1.0):
    print(f"{'alpha=1 b=' + format(b, 'g'):16s}" + "".join(f"{cell[(1.0, b, s)]:14s}" for s in GRID_SIGMAS))

# the identity cell is exact: remapping is a no-op and the fixed-point
# pyramid telescopes back to the input bit for bit
