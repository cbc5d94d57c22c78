"""Discrete-time dataflow model of the nine-stream accelerator.

Each of the nine level processing units (3 channels x 3 levels) has its own
input FIFO fed from one shared link. Every cycle the link carries
``floor(total_bandwidth / pixel_bits)`` pixels, dealt one at a time,
round-robin, to the streams that still need data and have FIFO room.

An LPU at level ``l`` evaluates the coefficients of its level in raster
order. A coefficient needs a full-resolution sub-image ``S = 2**(l+3) - 1``
pixels square, streamed as columns of ``S`` pixels. Consecutive coefficients
in a row share all but ``2**l`` columns, so only the first coefficient of a
row loads all ``S`` columns. Per coefficient the unit runs one pass per
pyramid level it touches, one column per cycle::

    sum(ceil(S / 2**k) for k in 0..l) + ceil(S / 2**l)

The first ``new_columns`` of those cycles each take a column from the FIFO and
are active only when a whole column is waiting; the remaining cycles work
from on-chip line buffers and are always active.
"""

import csv
import io
import math
from dataclasses import dataclass, field

from .convolution import PIPELINE_FILL
from .errors import NoProgressError, ValidationError
from .llf import half_width

LEVELS = 3
PIXEL_BITS = 8
LUT_PCT_PER_L1 = 1.28
FULL_DESIGN_LUT_PCT = 19.0


def column_height(level):
    return 2 * half_width(level) + 1


def pass_cycles(level):
    s = column_height(level)
    passes = sum(-(-s // 2**k) for k in range(level + 1))
    return passes + -(-s // 2**level)


def level_grid(image_dims, level):
    w, h = image_dims
    return -(-w // 2**level), -(-h // 2**level)


def stream_demand(image_dims, level):
    """Pixels an LPU pulls through its input stream for the whole image."""
    s = column_height(level)
    w, h = level_grid(image_dims, level)
    cols_per_row = s + (w - 1) * min(s, 2**level)
    return h * cols_per_row * s


@dataclass(frozen=True)
class StreamConfig:
    total_bandwidth: float
    pixel_bits: int = PIXEL_BITS
    n_streams: int = 9
    fifo_columns: int = 4
    arbitration: str = "round-robin"

    def __post_init__(self):
        if self.n_streams < LEVELS or self.n_streams % LEVELS:
            raise ValidationError(f"n_streams must be a positive multiple of {LEVELS}")
        if self.pixel_bits < 1:
            raise ValidationError("pixel_bits must be positive")
        if self.fifo_columns < 1:
            raise ValidationError("FIFO must hold at least one column")
        if self.arbitration != "round-robin":
            raise ValidationError(f"unsupported arbitration {self.arbitration!r}")
        if not self.total_bandwidth >= self.pixel_bits:
            raise NoProgressError(
                f"{self.total_bandwidth} bits per cycle cannot carry one "
                f"{self.pixel_bits}-bit pixel; the simulation would never progress"
            )

    @property
    def pixels_per_cycle(self):
        if math.isinf(self.total_bandwidth):
            return math.inf
        return int(self.total_bandwidth // self.pixel_bits)


@dataclass
class CycleStats:
    level: int
    active: int
    inactive: int
    channel: int = None
    bandwidth_bits: float = None
    input_cycles: int = 0
    pixels_delivered: int = 0
    column_pixels: int = 0
    scenario: str = ""

    @property
    def total(self):
        return self.active + self.inactive

    @property
    def efficiency(self):
        return self.active / self.total if self.total else 1.0


class _Lpu:
    __slots__ = ("level", "col", "cols_per_row", "items_per_row", "rows", "x", "y",
                 "need_cols", "internal", "cycles_per_item", "stride", "active",
                 "inactive", "input_cycles", "done")

    def __init__(self, level, image_dims):
        self.level = level
        self.col = column_height(level)
        self.items_per_row, self.rows = level_grid(image_dims, level)
        self.cycles_per_item = pass_cycles(level)
        self.stride = min(self.col, 2**level)
        self.x = self.y = 0
        self.active = self.inactive = self.input_cycles = 0
        self.done = False
        self._start_item()

    def _start_item(self):
        self.need_cols = self.col if self.x == 0 else self.stride
        self.internal = self.cycles_per_item - self.need_cols

    def _finish_item(self):
        self.x += 1
        if self.x == self.items_per_row:
            self.x = 0
            self.y += 1
            if self.y == self.rows:
                self.done = True
                return
        self._start_item()

    def step(self, fifo):
        """Advance one cycle; returns pixels taken from the FIFO."""
        if self.need_cols:
            if fifo < self.col:
                self.inactive += 1
                return 0
            self.need_cols -= 1
            self.active += 1
            self.input_cycles += 1
            taken = self.col
        else:
            self.internal -= 1
            self.active += 1
            taken = 0
        if not self.need_cols and not self.internal:
            self._finish_item()
        return taken


def simulate_lpus(image_dims, cfg, scenario=None):
    """Run the nine units to completion; one :class:`CycleStats` per unit.

    ``image_dims`` is ``(width, height)``. A bandwidth of ``math.inf`` means
    the link never limits the units.
    """
    w, h = image_dims
    if w < 1 or h < 1:
        raise ValidationError("image dimensions must be positive")
    n = cfg.n_streams
    lpus = [_Lpu(i % LEVELS, image_dims) for i in range(n)]
    remaining = [stream_demand(image_dims, u.level) for u in lpus]
    capacity = [cfg.fifo_columns * u.col for u in lpus]
    delivered = [0] * n
    fifo = [0] * n
    budget_per_cycle = cfg.pixels_per_cycle
    unlimited = math.isinf(budget_per_cycle)
    pointer = 0
    running = n
    while running:
        # link: deal pixels round-robin to streams with demand and room
        if unlimited:
            for i in range(n):
                give = min(capacity[i] - fifo[i], remaining[i])
                fifo[i] += give
                remaining[i] -= give
                delivered[i] += give
        else:
            budget = budget_per_cycle
            while budget:
                eligible = [i for i in range(n) if remaining[i] and fifo[i] < capacity[i]]
                if not eligible:
                    break
                rounds = budget // len(eligible)
                if rounds and all(
                    min(capacity[i] - fifo[i], remaining[i]) >= rounds for i in eligible
                ):
                    for i in eligible:
                        fifo[i] += rounds
                        remaining[i] -= rounds
                        delivered[i] += rounds
                    budget -= rounds * len(eligible)
                    continue
                # partial round: one pixel at a time from the pointer
                i = pointer
                for _ in range(n):
                    if remaining[i] and fifo[i] < capacity[i]:
                        fifo[i] += 1
                        remaining[i] -= 1
                        delivered[i] += 1
                        budget -= 1
                        pointer = (i + 1) % n
                        break
                    i = (i + 1) % n
        for i, u in enumerate(lpus):
            if not u.done:
                fifo[i] -= u.step(fifo[i])
                if u.done:
                    running -= 1
    label = scenario if scenario is not None else _scenario_name(cfg.total_bandwidth)
    return [
        CycleStats(
            level=u.level,
            active=u.active,
            inactive=u.inactive,
            channel=i // LEVELS,
            bandwidth_bits=cfg.total_bandwidth,
            input_cycles=u.input_cycles,
            pixels_delivered=delivered[i],
            column_pixels=u.col,
            scenario=label,
        )
        for i, u in enumerate(lpus)
    ]


def _scenario_name(bandwidth):
    return "bw_inf" if math.isinf(bandwidth) else f"bw{bandwidth:g}"


def merge_channels(stats):
    """Collapse per-channel stats into one row per level (sums of cycles)."""
    merged = {}
    for st in stats:
        key = (st.scenario, st.level)
        if key not in merged:
            merged[key] = CycleStats(
                level=st.level, active=0, inactive=0, bandwidth_bits=st.bandwidth_bits,
                column_pixels=st.column_pixels, scenario=st.scenario,
            )
        m = merged[key]
        m.active += st.active
        m.inactive += st.inactive
        m.input_cycles += st.input_cycles
        m.pixels_delivered += st.pixels_delivered
    return list(merged.values())


def sweep_bandwidth(image_dims, bandwidths, **stream_kwargs):
    """Per-level stats for each bandwidth, in sweep order."""
    rows = []
    for bw in bandwidths:
        cfg = StreamConfig(total_bandwidth=bw, **stream_kwargs)
        rows.extend(merge_channels(simulate_lpus(image_dims, cfg)))
    return rows


@dataclass(frozen=True)
class ReplicationPlan:
    n_instances: int
    lut_pct_per_instance: float = LUT_PCT_PER_L1
    # rest of the nine-unit design, so one instance gives the full-design 19%
    base_lut_pct: float = FULL_DESIGN_LUT_PCT - LUT_PCT_PER_L1

    def __post_init__(self):
        if not 1 <= self.n_instances <= 6:
            raise ValidationError(f"n_instances must be in 1..6, got {self.n_instances}")

    def shares(self, n_items):
        """Contiguous ``(start, stop)`` ranges whose sizes differ by at most one."""
        q, r = divmod(n_items, self.n_instances)
        out, start = [], 0
        for k in range(self.n_instances):
            stop = start + q + (1 if k < r else 0)
            out.append((start, stop))
            start = stop
        return out

    def resource_pct(self):
        return self.base_lut_pct + self.n_instances * self.lut_pct_per_instance


@dataclass
class ReplicationReport:
    n_instances: int
    latency_cycles: int
    resource_pct: float
    shares: list = field(default_factory=list)
    scenario: str = ""


def fill_latency(level=0):
    """Cycles until a unit emits its first coefficient."""
    return pass_cycles(level) + PIPELINE_FILL


def simulate_replication(image_dims, plan, scenario=None):
    """Latency of the level-0 band split over replicated units.

    Bandwidth is not modelled here. Each instance takes ``fill_latency()``
    cycles for its first coefficient and ``pass_cycles(0)`` for each further
    one; the band is done when the busiest instance is.
    """
    w, h = level_grid(image_dims, 0)
    n_items = w * h
    shares = plan.shares(n_items)
    busiest = max(stop - start for start, stop in shares)
    latency = 0
    if busiest:
        latency = fill_latency(0) + (busiest - 1) * pass_cycles(0)
    return ReplicationReport(
        n_instances=plan.n_instances,
        latency_cycles=latency,
        resource_pct=plan.resource_pct(),
        shares=shares,
        scenario=scenario if scenario is not None else f"rep{plan.n_instances}",
    )


def _fmt_bw(bw):
    if bw is None:
        return ""
    return "inf" if math.isinf(bw) else f"{bw:g}"


def emit_sim_csv(stats):
    """CSV text for simulator rows, ordered by scenario then unit index."""
    stats = list(stats)
    if not stats:
        raise ValidationError("no simulator rows to write")
    order = {}
    for st in stats:
        order.setdefault(st.scenario, len(order))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if isinstance(stats[0], ReplicationReport):
        writer.writerow(["scenario", "n_instances", "latency_cycles", "resource_pct"])
        for r in sorted(stats, key=lambda r: (order[r.scenario], r.n_instances)):
            writer.writerow([r.scenario, r.n_instances, r.latency_cycles, f"{r.resource_pct:.2f}"])
    else:
        writer.writerow(["scenario", "lpu", "bandwidth_bits", "active", "inactive", "efficiency"])
        key = lambda s: (order[s.scenario], s.channel if s.channel is not None else -1, s.level)
        for s in sorted(stats, key=key):
            lpu = s.level if s.channel is None else f"{s.channel}.{s.level}"
            writer.writerow([
                s.scenario, lpu, _fmt_bw(s.bandwidth_bits), s.active, s.inactive,
                f"{s.efficiency:.4f}",
            ])
    return buf.getvalue()
