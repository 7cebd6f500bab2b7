"""
Billiards in an L-shaped table
==============================

Turn a table and a direction into a (2413) interval exchange, attach the
return times, and test (1, 0.1)-mixing of the resulting flow.  The table is
chosen by running the construction on (2413) and reading the table back
through the inverse dictionary.
"""

from ietlab import construct_mixing_iet
from ietlab.billiard import (
    LTable,
    flow_mixing_check,
    suspension_data,
    table_from_lengths,
    transversal_iet,
)

# A square-ish table at 45 degrees: every transversal interval has length 1/4.
tb = LTable(3, 1, 1, 1, 1)
print(transversal_iet(tb).to_json())
print("heights", suspension_data(tb).heights)

# A constructed 4-IET on (2413), realized as a table with cot(theta) = 1.
r = construct_mixing_iet("2413", 1, scale_p=3)
table = table_from_lengths(r.iet.lengths, 1)
data = suspension_data(table)
print("table", {key: v.to_decimal(12) for key, v in vars(table).items()})
print("heights", data.heights)

# Sums of heights along allowed words, binned at width epsilon / 32.
for t_max in (1000.0, 2000.0):
    rep = flow_mixing_check(r.iet, data.heights, 1, 0.1, t_max, length_budget=2 * 10**4)
    print(f"t_max={t_max:.0f}: {rep.status}, T0={rep.T0}, words up to length {rep.max_n}")
