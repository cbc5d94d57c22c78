"""Command-line front end.

Subcommands::

    llf run      filter one image with the reference or accelerator path
    llf sweep    accelerator-vs-reference PSNR over a parameter grid (CSV)
    llf compare  PSNR between two images
    llf sim      dataflow simulator: bandwidth sweep or replication (CSV)
    llf bench    per-band timings of the accelerator model (software model)

Exit codes: 0 success, 1 I/O, 2 validation, 3 internal invariant failure.
"""

import argparse
import csv
import io
import math
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import hwsim
from .cards import corpus, test_card
from .errors import ImageIOError, LLFError, ValidationError
from .fixedpoint import to_uint8
from .imfile import load_image, save_image
from .llf import ACCEL_BANDS, accel_to_uint8, llf_accel_model_q, llf_reference_rgb
from .metrics import psnr
from .remap import RemapParams

REFERENCE_PATH = "reference"
ACCEL_PATH = "accel"

GRID_SIGMAS = (0.1, 0.2, 0.4)
GRID_ALPHAS = (0.25, 0.5, 2.0)
GRID_BETAS = (0.0, 0.5, 1.0)

DEFAULT_BANDWIDTHS = (32, 64, 128, 256, 512, 1024, 2048, math.inf)
DEFAULT_BENCH_SIZES = (0.25, 0.5, 0.75, 1.0)
BENCH_PARAMS = RemapParams(0.5, 1.0, 0.2)


@dataclass(frozen=True)
class RunConfig:
    input_path: str
    output_path: str
    params: RemapParams
    path: str = ACCEL_PATH
    n_bands: int = 3
    threads: int = 1

    def __post_init__(self):
        if not self.input_path or not self.output_path:
            raise ValidationError("input and output paths must be non-empty")
        if self.path not in (REFERENCE_PATH, ACCEL_PATH):
            raise ValidationError(f"unknown path {self.path!r}")
        if self.n_bands < 1:
            raise ValidationError("--bands must be at least 1")
        if self.path == ACCEL_PATH and self.n_bands != ACCEL_BANDS:
            raise ValidationError(f"the accelerator path computes exactly {ACCEL_BANDS} bands")
        if self.threads < 1:
            raise ValidationError("--threads must be at least 1")


def default_grid():
    """The 18 (alpha, beta, sigma) cells: beta=1 block, then alpha=1 block."""
    cells = [(a, 1.0, s) for a in GRID_ALPHAS for s in GRID_SIGMAS]
    cells += [(1.0, b, s) for b in GRID_BETAS for s in GRID_SIGMAS]
    return cells


def filter_image(planes, params, path=ACCEL_PATH, n_bands=3, threads=1, timings=None):
    """Filter planar RGB and return 8-bit planes ``(3, H, W)``."""
    if path == REFERENCE_PATH:
        return to_uint8(llf_reference_rgb(planes, params, n_bands, threads, timings))
    return accel_to_uint8(llf_accel_model_q(planes, params, threads, timings)).astype(np.uint8)


def sweep(planes, cells, threads=1):
    """``[(alpha, beta, sigma, QualityReport)]`` of accel vs reference output."""
    rows = []
    for a, b, s in cells:
        params = RemapParams(a, b, s)
        ref = filter_image(planes, params, REFERENCE_PATH, threads=threads)
        acc = filter_image(planes, params, ACCEL_PATH, threads=threads)
        rows.append((a, b, s, psnr(ref, acc)))
    return rows


def sweep_csv(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["alpha", "beta", "sigma", "psnr_db"])
    for a, b, s, report in rows:
        writer.writerow([f"{a:g}", f"{b:g}", f"{s:g}", report.format_psnr()])
    return buf.getvalue()


def bench_image(megapixels):
    side = int(round(math.sqrt(megapixels * 1e6)))
    return np.floor(test_card(side, side, 0) * 255 + 0.5) / 255


def bench(sizes, params=BENCH_PARAMS, threads=1, repeats=1, warmup=True):
    """Per-band seconds of the accelerator model for each size in megapixels.

    Each row holds ``size_mp``, ``bands`` (seconds for levels 0..2 summed over
    channels), ``sequential`` (their sum), ``parallel`` (their max, i.e. the
    time with every band on its own unit) and ``total`` (end to end). With
    ``repeats > 1`` the median run (lower median for even counts) is kept.
    ``warmup`` runs the first size once untimed so allocator start-up does
    not land in the first row.
    """
    if any(not mp > 0 for mp in sizes):
        raise ValidationError("bench sizes must be positive")
    if repeats < 1:
        raise ValidationError("repeats must be at least 1")
    if warmup and sizes:
        llf_accel_model_q(bench_image(sizes[0]), params, threads)
    images = [bench_image(mp) for mp in sizes]
    runs = [[] for _ in sizes]
    # repeats are interleaved across sizes so slow drift in machine speed
    # affects every size alike
    for _ in range(repeats):
        for k, img in enumerate(images):
            timings = {}
            t0 = time.perf_counter()
            llf_accel_model_q(img, params, threads, timings)
            runs[k].append((time.perf_counter() - t0, timings))
    rows = []
    for mp, rk in zip(sizes, runs):
        total, timings = sorted(rk, key=lambda r: r[0])[(len(rk) - 1) // 2]
        bands = [timings.get(f"band_{l}", 0.0) for l in range(ACCEL_BANDS)]
        rows.append({
            "size_mp": mp,
            "bands": bands,
            "sequential": sum(bands),
            "parallel": max(bands),
            "total": total,
        })
    return rows


def bench_table(rows):
    head = f"{'Size (MP)':>9}  {'L1':>9}  {'L2':>9}  {'L3':>9}  {'Sequential':>10}  {'Parallel':>9}  {'Total':>9}"
    lines = ["latency per band, ms (software model, not hardware timings)", head]
    for r in rows:
        ms = [1e3 * t for t in r["bands"]]
        lines.append(
            f"{r['size_mp']:>9g}  {ms[0]:>9.1f}  {ms[1]:>9.1f}  {ms[2]:>9.1f}  "
            f"{1e3 * r['sequential']:>10.1f}  {1e3 * r['parallel']:>9.1f}  {1e3 * r['total']:>9.1f}"
        )
    return "\n".join(lines) + "\n"


def _float_list(text):
    try:
        vals = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _threads(text):
    if text == "auto":
        return os.cpu_count() or 1
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected a positive integer or 'auto'") from None
    if n < 1:
        raise argparse.ArgumentTypeError("thread count must be positive")
    return n


def _add_params(p):
    p.add_argument("--alpha", type=float, default=1.0, help="detail exponent (<1 enhances)")
    p.add_argument("--beta", type=float, default=1.0, help="edge scale (<1 compresses range)")
    p.add_argument("--sigma", type=float, default=0.2, help="detail/edge threshold in [0, 1]")


def build_parser():
    parser = argparse.ArgumentParser(prog="llf", description="Local Laplacian filtering and accelerator model.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="filter an image")
    run.add_argument("--input", required=True)
    run.add_argument("--output", required=True)
    _add_params(run)
    run.add_argument("--path", choices=[REFERENCE_PATH, ACCEL_PATH], default=ACCEL_PATH)
    run.add_argument("--bands", type=int, default=3)
    run.add_argument("--threads", type=_threads, default=1, help="N or 'auto'")

    sw = sub.add_parser("sweep", help="accel-vs-reference PSNR over a parameter grid")
    src = sw.add_mutually_exclusive_group()
    src.add_argument("--input", help="image to sweep (default: card0)")
    src.add_argument("--card", choices=sorted(corpus((8, 8))), help="built-in synthetic card")
    sw.add_argument("--default-grid", action="store_true", help="the 18-cell grid (default when no lists given)")
    sw.add_argument("--alphas", type=_float_list)
    sw.add_argument("--betas", type=_float_list)
    sw.add_argument("--sigmas", type=_float_list)
    sw.add_argument("--output", help="write CSV here instead of stdout")
    sw.add_argument("--threads", type=_threads, default=1)

    cmp_ = sub.add_parser("compare", help="PSNR between two 8-bit images")
    cmp_.add_argument("a")
    cmp_.add_argument("b")

    sim = sub.add_parser("sim", help="dataflow simulator")
    sim.add_argument("--bandwidth", type=_float_list, help="aggregate link widths in bits/cycle; 'inf' allowed")
    sim.add_argument("--instances", type=int, help="replication study for 1..N level-0 units")
    sim.add_argument("--width", type=int, default=64)
    sim.add_argument("--height", type=int, default=64)
    sim.add_argument("--fifo-columns", type=int, default=4)

    b = sub.add_parser("bench", help="per-band timings of the accelerator model")
    b.add_argument("--sizes", type=_float_list, default=list(DEFAULT_BENCH_SIZES), help="megapixels")
    b.add_argument("--threads", type=_threads, default=1)
    b.add_argument("--repeats", type=int, default=1, help="report the median of N runs per size")
    return parser


def cmd_run(cfg, out=None):
    out = out or sys.stdout
    planes, _ = load_image(cfg.input_path)
    timings = {}
    result = filter_image(planes, cfg.params, cfg.path, cfg.n_bands, cfg.threads, timings)
    save_image(result, cfg.output_path)
    out.write(
        "stage timings (software model): "
        f"host pyramid {timings.get('host_pyramid', 0.0):.3f} s, "
        f"bands {timings.get('bands', 0.0):.3f} s, "
        f"collapse {timings.get('collapse', 0.0):.3f} s\n"
    )
    return 0


def cmd_sweep(args, out=None):
    out = out or sys.stdout
    if args.input:
        planes, _ = load_image(args.input)
    else:
        planes = corpus()[args.card or "card0"]
    lists = (args.alphas, args.betas, args.sigmas)
    if any(v is not None for v in lists):
        if args.default_grid:
            raise ValidationError("--default-grid cannot be combined with explicit lists")
        alphas = args.alphas or [1.0]
        betas = args.betas or [1.0]
        sigmas = args.sigmas or [0.2]
        cells = [(a, b, s) for a in alphas for b in betas for s in sigmas]
    else:
        cells = default_grid()
    text = sweep_csv(sweep(planes, cells, args.threads))
    if args.output:
        try:
            with open(args.output, "w", newline="") as f:
                f.write(text)
        except OSError as e:
            raise ImageIOError(f"{args.output}: cannot write ({e.strerror or e})") from None
    else:
        out.write(text)
    return 0


def cmd_compare(args, out=None):
    out = out or sys.stdout
    a, _ = load_image(args.a)
    b, _ = load_image(args.b)
    report = psnr(to_uint8(a), to_uint8(b))
    per = " ".join(("inf" if math.isinf(p) else f"{p:.2f}") for p in report.per_channel)
    out.write(f"mse {report.mse:.6f}  psnr {report.format_psnr()} dB  per-channel {per}\n")
    return 0


def cmd_sim(args, out=None):
    out = out or sys.stdout
    dims = (args.width, args.height)
    if args.instances is not None:
        if args.bandwidth is not None:
            raise ValidationError("--instances and --bandwidth select different studies; pass one")
        if not 1 <= args.instances <= 6:
            raise ValidationError(f"--instances must be in 1..6, got {args.instances}")
        reports = [
            hwsim.simulate_replication(dims, hwsim.ReplicationPlan(n))
            for n in range(1, args.instances + 1)
        ]
        out.write(hwsim.emit_sim_csv(reports))
        return 0
    bandwidths = args.bandwidth or list(DEFAULT_BANDWIDTHS)
    rows = hwsim.sweep_bandwidth(dims, bandwidths, fifo_columns=args.fifo_columns)
    out.write(hwsim.emit_sim_csv(rows))
    return 0


def cmd_bench(args, out=None):
    out = out or sys.stdout
    out.write(bench_table(bench(args.sizes, threads=args.threads, repeats=args.repeats)))
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            cfg = RunConfig(
                args.input, args.output, RemapParams(args.alpha, args.beta, args.sigma),
                args.path, args.bands, args.threads,
            )
            return cmd_run(cfg)
        handler = {"sweep": cmd_sweep, "compare": cmd_compare, "sim": cmd_sim, "bench": cmd_bench}
        return handler[args.command](args)
    except LLFError as e:
        print(f"llf: error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"llf: error: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"llf: error: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # anything else is a bug
        print(f"llf: internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
