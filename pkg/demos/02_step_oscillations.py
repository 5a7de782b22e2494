"""Centred slopes are not monotone: the step of Test 1.2.

Unlimited linear reconstruction over- and undershoots at a jump, while the
first-order scheme smears it without new extrema.
"""

import numpy as np

from ader_adr.problems import make_benchmark, select_dt
from ader_adr.schemes import SchemeKind
from ader_adr.solver import solve

bench = make_benchmark("test1_2", 96)
dt = select_dt(bench)

for scheme in (SchemeKind.ADER_GENERAL, SchemeKind.FIRST_ORDER):
    q = solve(bench.spec, scheme, dt).field.interior
    print(f"{scheme.value:>12}: min {q.min():+.4f}  max {q.max():+.4f}")

# the exact solution is never negative; where does the second-order one dip?
q = solve(bench.spec, SchemeKind.ADER_GENERAL, dt).field.interior
x = bench.spec.grid.centers
print("undershoot near x =", np.round(x[q < -1e-3], 3))
