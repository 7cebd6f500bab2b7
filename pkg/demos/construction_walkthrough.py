"""
Building a 2-alphabet mixing 4-IET
==================================

Run the construction pipeline on (4321) with k = 2 and inspect each stage:
the coprime designated blocks, the block tables after the M1 stage, the
Keane check, and the bridge-length search.
"""

import math

from ietlab import construct_mixing_iet
from ietlab.coding import expand, hat_blocks, return_blocks
from ietlab.mixing import gap_constant

report = construct_mixing_iet("4321", 2, scale_p=3)
d = report.iet.d

# Stage lengths: the two designated blocks have coprime lengths.
lens = report.stage_lengths
print("stage block lengths", lens, "gcd of designated pair", math.gcd(lens[d - 3], lens[d - 2]))
print("prefix moves", report.prefix_depth, "coprime route moves", report.coprime_depth)

# The blocks after the M1(p, p) stage are concatenations of the stage blocks.
stage = report.prefix_depth + report.coprime_depth
before = return_blocks(report.iet, stage)
after = return_blocks(report.iet, len(report.path))
table = hat_blocks("FourLetter", d, report.scale_p, report.scale_p)
assert expand(table, before) == after.blocks
for j, expr in enumerate(table, start=1):
    print(f"B^_{j} = {expr}  (length {len(after.blocks[j - 1])})")
print("gap constant C =", gap_constant(table, lens))

# Keane to 10^4 steps and the bridge search.
print("Keane:", report.keane.to_json())
print(report.mixing.summary())

# What the covering lemmas alone would certify for the full 5g stage.
cov = report.coverage
print("g =", report.g, "coverage verified:", cov.verified, "from", cov.threshold)
