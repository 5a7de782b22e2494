"""Command-line front end.

Exit status: 0 on success, 1 on a configuration error, 2 on a numerical
failure (non-finite values or an inadmissible state).
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from ._io import atomic_write, dump_json, fmt
from .convergence import DEFAULT_MESHES, StudyConfig, StudyError, format_reports_csv, run_study
from .grid import ConfigurationError, write_field_csv
from .problems import error_norms, make_benchmark, realized_parameters, select_dt, state_dt_limit
from .schemes import DomainError, NonFiniteError, SchemeKind
from .solver import solve
from .specfile import load_problem
from .stability import (
    Orthotope,
    amplification_closed_form,
    check_orthotope,
    coupled_parameters,
    format_region_csv,
    sample_region,
    theta_grid,
)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    """Argument errors become configuration errors instead of exiting with 2."""

    def error(self, message: str):
        raise ConfigurationError(f"{self.prog}: {message}")


def _triple(text: str) -> tuple[float, float, int]:
    try:
        lo, hi, n = text.split(",")
        return float(lo), float(hi), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo,hi,n, got {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ader-adr", description="1D advection-diffusion-reaction finite-volume solver")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="run one benchmark or problem file to t_end")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--benchmark")
    src.add_argument("--spec-file", type=Path)
    s.add_argument("--scheme", default="ader")
    s.add_argument("--cells", type=int)
    s.add_argument("--out", type=Path, help="CSV of final cell averages (x,q)")

    c = sub.add_parser("converge", help="mesh-refinement error/order table")
    c.add_argument("--benchmark", required=True)
    c.add_argument("--scheme", default="ader")
    c.add_argument("--meshes", type=_int_list, default=list(DEFAULT_MESHES))
    c.add_argument("--norm-mode", choices=("sup_over_time", "final_time"))
    c.add_argument("--reference-cells", type=int, default=512)
    c.add_argument("--out", type=Path, help="CSV table; a JSON summary is written next to it")

    st = sub.add_parser("stability", help="von Neumann scans")
    st.add_argument("--mode", choices=("orthotope", "region", "curve"), required=True)
    st.add_argument("--c-max", type=float, default=1.0)
    st.add_argument("--d-max", type=float, default=0.25)
    st.add_argument("--r-min", type=float, default=-0.5)
    st.add_argument("--resolution", type=_int_list, default=[21, 21, 21], help="samples per axis, nc,nd,nr")
    st.add_argument("--c-range", type=_triple, default=(0.0, 1.2, 25), help="lo,hi,n")
    st.add_argument("--d-range", type=_triple, default=(0.0, 0.5, 11))
    st.add_argument("--r-range", type=_triple, default=(-2.0, 0.0, 11))
    st.add_argument("--c", type=float, help="curve mode: Courant number")
    st.add_argument("--d", type=float, help="curve mode: diffusion number")
    st.add_argument("--r", type=float, help="curve mode: reaction number")
    st.add_argument("--n-theta", type=int, default=721)
    st.add_argument("--out", type=Path)

    a = sub.add_parser("amp", help="print one amplification factor")
    a.add_argument("--theta", type=float, required=True)
    a.add_argument("--c", type=float, required=True)
    a.add_argument("--d", type=float, required=True)
    a.add_argument("--r", type=float, required=True)
    a.add_argument("--lam", type=float, help="with --beta and --dx: check that (c, r) is realizable")
    a.add_argument("--beta", type=float)
    a.add_argument("--dx", type=float)
    return p


def _load(args) -> "Benchmark":  # noqa: F821
    if args.spec_file is not None:
        if not args.spec_file.is_file():
            raise ConfigurationError(f"no such problem file: {args.spec_file}")
        bench = load_problem(args.spec_file)
    else:
        bench = make_benchmark(args.benchmark)
    if args.cells is not None:
        bench = bench.on_grid(args.cells)
    return bench


def _cmd_solve(args, out, err) -> int:
    bench = _load(args)
    scheme = SchemeKind.parse(args.scheme)
    dt = select_dt(bench)
    result = solve(bench.spec, scheme, dt, dt_limit=state_dt_limit(bench))
    field = result.field
    c, d, r = realized_parameters(bench, dt)
    print(f"cells={bench.spec.grid.n_cells} steps={result.n_steps} dt={fmt(dt)} c={fmt(c)} d={fmt(d)} r={fmt(r)}",
          file=err)
    if bench.has_exact:
        rep = error_norms(field.interior, bench.spec.exact(bench.spec.grid.centers, field.time),
                          bench.spec.grid.dx, "final_time")
        print(f"err_l1={fmt(rep.err_l1)} err_l2={fmt(rep.err_l2)} err_linf={fmt(rep.err_linf)}", file=out)
    if args.out is not None:
        write_field_csv(field, args.out)
    return EXIT_OK


def _cmd_converge(args, out, err) -> int:
    config = StudyConfig(args.benchmark, SchemeKind.parse(args.scheme), args.meshes, args.norm_mode,
                         args.reference_cells, args.out)
    reports = run_study(config)
    if args.out is None:
        out.write(format_reports_csv(reports))
    return EXIT_OK


def _emit(text: str, path: Optional[Path], out) -> None:
    if path is None:
        out.write(text)
    else:
        atomic_write(path, text)


def _cmd_stability(args, out, err) -> int:
    if args.mode == "orthotope":
        if len(args.resolution) != 3:
            raise ConfigurationError("--resolution needs three integers nc,nd,nr")
        try:
            box = Orthotope(args.c_max, args.d_max, args.r_min)
        except ValueError as exc:
            raise ConfigurationError(str(exc)) from None
        report = check_orthotope(box, args.resolution, args.n_theta)
        _emit(dump_json(report.as_dict()), args.out, out)
        if not report.stable:
            print(f"orthotope not stable: max |A| = {fmt(report.max_norm)}", file=err)
    elif args.mode == "region":
        table = sample_region({"c": args.c_range, "d": args.d_range, "r": args.r_range}, args.n_theta)
        _emit(format_region_csv(table), args.out, out)
    else:
        if args.c is None or args.d is None or args.r is None:
            raise ConfigurationError("curve mode needs --c, --d and --r")
        thetas = theta_grid(args.n_theta)
        a = amplification_closed_form(thetas, args.c, args.d, args.r)
        rows = ["theta,re,im,abs"]
        rows += [f"{fmt(t)},{fmt(z.real)},{fmt(z.imag)},{fmt(abs(z))}" for t, z in zip(thetas, a)]
        _emit("\n".join(rows) + "\n", args.out, out)
    return EXIT_OK


def _cmd_amp(args, out, err) -> int:
    a = amplification_closed_form(args.theta, args.c, args.d, args.r)
    sign = "-" if a.imag < 0 else "+"
    print(f"A = {fmt(a.real)} {sign} {fmt(abs(a.imag))}i", file=out)
    print(f"|A| = {fmt(abs(a))}", file=out)
    given = [v is not None for v in (args.lam, args.beta, args.dx)]
    if any(given) and not all(given):
        raise ConfigurationError("--lam, --beta and --dx must be given together")
    if all(given) and args.lam != 0:
        dt = args.c * args.dx / abs(args.lam)
        _, _, r_real = coupled_parameters(args.lam, args.beta, 0.0, args.dx, dt) if dt > 0 else (0, 0, 0.0)
        if not math.isclose(r_real, args.r, rel_tol=1e-9, abs_tol=1e-14):
            print(f"warning: c={fmt(args.c)} on dx={fmt(args.dx)} forces r={fmt(r_real)}, not {fmt(args.r)}",
                  file=err)
    return EXIT_OK


_COMMANDS = {"solve": _cmd_solve, "converge": _cmd_converge, "stability": _cmd_stability, "amp": _cmd_amp}


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        with np.errstate(over="ignore", invalid="ignore"):
            return _COMMANDS[args.command](args, out, err)
    except (NonFiniteError, DomainError, StudyError) as exc:
        print(f"numerical failure: {exc}", file=err)
        return EXIT_NUMERIC
    except (ConfigurationError, ValueError, OSError) as exc:
        print(f"configuration error: {exc}", file=err)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
