"""
Feeding nine units through one link
===================================

How busy are the level processing units when the link is narrow, and what
does replicating the finest unit buy?
"""

import math

from llfaccel.hwsim import (
    ReplicationPlan,
    emit_sim_csv,
    pass_cycles,
    column_height,
    simulate_replication,
    sweep_bandwidth,
)

dims = (32, 32)

# per coefficient, a unit computes for pass_cycles and loads 2**l new columns
for l in range(3):
    s = column_height(l)
    print(f"L{l + 1}: column of {s} pixels, {pass_cycles(l)} cycles per coefficient")

rows = sweep_bandwidth(dims, [32, 64, 128, 256, 512, math.inf])
print()
print(emit_sim_csv(rows))

# the coarse units need the most pixels per cycle of work, so they starve first
# and gain the most from a wider link
eff = {(r.bandwidth_bits, r.level): r.efficiency for r in rows}
print("L3 efficiency 32 -> 256 bits:", f"{eff[(32, 2)]:.1%} -> {eff[(256, 2)]:.1%}")

# splitting the finest band over replicas
reps = [simulate_replication(dims, ReplicationPlan(n)) for n in range(1, 7)]
print()
print(emit_sim_csv(reps))
