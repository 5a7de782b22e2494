"""Second-order convergence on the Gaussian pulse (Test 1.1).

The pulse exp(-2 (x - t)^2 - t) is advected and damped on [0, 2] with the
Courant number pinned to 1. Each mesh doubling should cut the error by 4.
"""

from ader_adr.convergence import StudyConfig, format_reports_csv, run_study

reports = run_study(StudyConfig("test1_1"))

print(f"{'cells':>6} {'L1 error':>12} {'order':>6}")
for rep in reports:
    order = "" if rep.order_l1 is None else f"{rep.order_l1:.2f}"
    print(f"{rep.n_cells:>6} {rep.err_l1:>12.3e} {order:>6}")

# the same table as machine-readable CSV (17 significant digits)
print()
print(format_reports_csv(reports[-2:]))
