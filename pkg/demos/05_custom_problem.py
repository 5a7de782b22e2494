"""Running a problem of your own through the command line.

A problem file is plain key = value text. Here: the damped sine of Test 2.1
on a periodic ring instead of with Dirichlet boundaries.
"""

import tempfile
from pathlib import Path

from ader_adr.cli import main

problem = """\
domain = -1 1
cells = 64
lambda = 1
beta = -0.5
alpha = const 1e-5
exact = builtin damped_sine   # exp((beta - alpha pi^2) t) sin(pi (x - lambda t))
bc = periodic
t_end = 0.5
c_max = 0.5
r_min = -0.5
"""

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "wave.txt"
    path.write_text(problem)
    out = Path(tmp) / "wave.csv"
    code = main(["solve", "--spec-file", str(path), "--out", str(out)])
    print("exit status", code)
    print(out.read_text().splitlines()[:4])

# a single amplification factor
main(["amp", "--theta", "1.0", "--c", "0.5", "--d", "0.1", "--r", "-0.2"])
