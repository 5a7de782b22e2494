import io
import json

import numpy as np
import pytest

from ader_adr.cli import main
from ader_adr.grid import read_field_csv
from ader_adr.problems import error_norms, make_benchmark, select_dt
from ader_adr.schemes import SchemeKind
from ader_adr.solver import solve


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def test_amp_prints_theta_zero_value():
    code, out, _ = run("amp", "--theta", 0, "--c", 0.3, "--d", 0.1, "--r", -0.2)
    assert code == 0
    line = out.splitlines()[0]
    assert line.startswith("A = ") and line.endswith(" + 0i")
    assert float(line.split()[2]) == pytest.approx(0.82, abs=1e-15)


def test_amp_warns_on_unrealizable_pair():
    code, _, err = run("amp", "--theta", 0, "--c", 1, "--d", 0, "--r", -0.5, "--lam", 1, "--beta", -1, "--dx", 0.25)
    assert code == 0 and "warning" in err
    code, _, err = run("amp", "--theta", 0, "--c", 1, "--d", 0, "--r", -0.25, "--lam", 1, "--beta", -1, "--dx", 0.25)
    assert code == 0 and err == ""


def test_unknown_flag_is_configuration_error():
    code, out, err = run("amp", "--theta", 0, "--c", 0, "--d", 0, "--r", 0, "--verbose")
    assert code == 1 and out == "" and "verbose" in err
    assert run()[0] == 1
    assert run("converge", "--benchmark", "test7")[0] == 1


def test_stability_orthotope_json(tmp_path):
    path = tmp_path / "o.json"
    code, _, _ = run("stability", "--mode", "orthotope", "--c-max", 1, "--d-max", 0.25, "--r-min=-0.5", "--out", path)
    assert code == 0
    report = json.loads(path.read_text())
    assert report["stable"] is True
    code, out, err = run("stability", "--mode", "orthotope", "--c-max", 1.2, "--d-max", 0.25, "--r-min=-0.5")
    assert code == 0 and json.loads(out)["stable"] is False and "not stable" in err


def test_stability_region_and_curve():
    code, out, _ = run("stability", "--mode", "region", "--c-range", "0,1,3", "--d-range", "0,0,1", "--r-range=-1,0,2")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "c,d,r,m_theta" and len(lines) == 7
    code, out, _ = run("stability", "--mode", "curve", "--c", 1, "--d", 0, "--r", 0, "--n-theta", 9)
    rows = [list(map(float, ln.split(","))) for ln in out.splitlines()[1:]]
    assert code == 0 and len(rows) == 9
    assert all(abs(row[3] - 1) < 1e-14 for row in rows)
    assert run("stability", "--mode", "curve", "--c", 1)[0] == 1


def test_solve_prints_direct_error_triple(tmp_path):
    path = tmp_path / "q.csv"
    code, out, _ = run("solve", "--benchmark", "test1_1", "--cells", 32, "--out", path)
    assert code == 0
    bench = make_benchmark("test1_1", 32)
    field = solve(bench.spec, SchemeKind.ADER_GENERAL, select_dt(bench)).field
    rep = error_norms(field.interior, bench.spec.exact(bench.spec.grid.centers, 1.0), bench.spec.grid.dx, "final_time")
    values = dict(item.split("=") for item in out.split())
    assert float(values["err_l1"]) == rep.err_l1
    assert float(values["err_l2"]) == rep.err_l2
    assert float(values["err_linf"]) == rep.err_linf
    x, q = read_field_csv(path)
    np.testing.assert_array_equal(q, field.interior)


def test_converge_writes_csv_and_summary(tmp_path):
    path = tmp_path / "t1.csv"
    code, _, _ = run("converge", "--benchmark", "test1_1", "--scheme", "ader", "--meshes", "8,16,32,64,128", "--out", path)
    assert code == 0
    rows = path.read_text().splitlines()
    assert rows[0].startswith("cells,err_l1,order_l1")
    assert abs(float(rows[-1].split(",")[2]) - 2.0) < 0.1
    assert "worst_order_deviation_from_2" in json.loads(path.with_suffix(".json").read_text())


def test_same_argv_gives_identical_artifacts(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert run("converge", "--benchmark", "test3", "--meshes", "8,16", "--out", p)[0] == 0
    assert a.read_bytes() == b.read_bytes()


PROBLEM = """\
# Test 1.1 written as a problem file
domain = 0 2
cells = 32
lambda = 1
beta = -1
alpha = const 0
exact = builtin gaussian
bc = dirichlet
t_end = 1
c_max = 1
r_min = -1
"""


def test_spec_file_reproduces_benchmark(tmp_path):
    spec = tmp_path / "p.txt"
    spec.write_text(PROBLEM)
    _, bench_out, _ = run("solve", "--benchmark", "test1_1", "--cells", 32)
    code, file_out, _ = run("solve", "--spec-file", spec)
    assert code == 0 and file_out == bench_out


def test_spec_file_tables(tmp_path):
    x = np.linspace(0, 1, 41)
    (tmp_path / "q0.csv").write_text("x,q\n" + "".join(f"{v:.17g},{np.sin(2 * np.pi * v) + 2:.17g}\n" for v in x))
    times = [0.0, 0.5, 1.0]
    rows = [",".join(["0"] + [str(t) for t in times])]
    rows += [",".join([str(v)] + ["0.001"] * 3) for v in x]
    (tmp_path / "alpha.csv").write_text("\n".join(rows) + "\n")
    (tmp_path / "p.txt").write_text(
        "domain = 0 1\ncells = 20\nlambda = 1\nbeta = -0.5\nalpha = table alpha.csv\n"
        "q0 = table q0.csv\nbc = periodic\nt_end = 0.2\nc_max = 0.5\nd_max = 0.25\nr_min = -0.5\n")
    out_csv = tmp_path / "q.csv"
    code, out, err = run("solve", "--spec-file", tmp_path / "p.txt", "--out", out_csv)
    assert code == 0, err
    _, q = read_field_csv(out_csv)
    assert q.size == 20 and np.all(np.isfinite(q))


def test_spec_file_errors(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("domain = 0 1\ncolour = red\n")
    code, _, err = run("solve", "--spec-file", bad)
    assert code == 1 and "colour" in err
    assert run("solve", "--spec-file", tmp_path / "missing.txt")[0] == 1
    (tmp_path / "q0.csv").write_text("x,q\n0,nan\n1,2\n")
    bad.write_text("domain = 0 1\nq0 = table q0.csv\nd_max = 0.25\n")
    assert run("solve", "--spec-file", bad)[0] == 1


def test_inadmissible_state_exits_2(tmp_path):
    x = np.linspace(0, 1, 11)
    (tmp_path / "q0.csv").write_text("x,q\n" + "".join(f"{v:.17g},{np.sin(2 * np.pi * v):.17g}\n" for v in x))
    (tmp_path / "p.txt").write_text(
        "domain = 0 1\ncells = 10\nalpha = builtin inverse\nq0 = table q0.csv\nt_end = 0.1\nd_max = 0.25\n")
    out_csv = tmp_path / "q.csv"
    code, _, err = run("solve", "--spec-file", tmp_path / "p.txt", "--out", out_csv)
    assert code == 2 and "numerical failure" in err
    assert not out_csv.exists()
