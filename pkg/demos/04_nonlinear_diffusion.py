"""Nonlinear diffusion q_t = (q^-1 q_x)_x (Test 3).

The coefficient follows the solution, so the step size is re-capped every
step to keep the diffusion number at 1/4.
"""

import numpy as np

from ader_adr.problems import make_benchmark, select_dt, state_dt_limit
from ader_adr.schemes import SchemeKind
from ader_adr.solver import solve

for n in (32, 64, 128):
    bench = make_benchmark("test3", n)
    result = solve(bench.spec, SchemeKind.ADER_GENERAL, select_dt(bench), dt_limit=state_dt_limit(bench))
    grid = bench.spec.grid
    err = np.abs(result.field.interior - bench.spec.exact(grid.centers, 1.0))
    print(f"{n:4d} cells  {result.n_steps:6d} steps  max error {err.max():.3e}")
