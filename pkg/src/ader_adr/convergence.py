"""Mesh-refinement studies producing error/order tables."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Optional, Sequence, Union

from ._io import atomic_write, dump_json, fmt, thread_count
from .grid import ConfigurationError
from .problems import (
    Benchmark,
    BenchmarkId,
    ErrorReport,
    NormAccumulator,
    ReferenceSolution,
    make_benchmark,
    realized_parameters,
    reference_solution,
    select_dt,
    state_dt_limit,
)
from .schemes import NonFiniteError, SchemeKind
from .solver import solve

DEFAULT_MESHES = (8, 16, 32, 64, 128, 256, 512)

CSV_HEADER = "cells,err_l1,order_l1,err_l2,order_l2,err_linf,order_linf,c,d,r"


class StudyError(RuntimeError):
    def __init__(self, message: str, n_cells: int):
        super().__init__(message)
        self.n_cells = n_cells


@dataclass(frozen=True)
class StudyConfig:
    benchmark: Union[str, BenchmarkId]
    scheme: SchemeKind = SchemeKind.ADER_GENERAL
    meshes: Sequence[int] = DEFAULT_MESHES
    norm_mode: Optional[str] = None
    reference_cells: int = 512
    output: Optional[Path] = None

    def __post_init__(self) -> None:
        meshes = tuple(int(m) for m in self.meshes)
        if not meshes or any(b <= a for a, b in zip(meshes, meshes[1:])):
            raise ConfigurationError("meshes must be strictly increasing")
        object.__setattr__(self, "meshes", meshes)


def order_between(err_coarse: float, err_fine: float, ratio: float = 2.0) -> Optional[float]:
    """Observed rate log(err_coarse / err_fine) / log(ratio); None if undefined."""
    if not ratio > 1:
        raise ValueError("ratio must exceed 1")
    if not (err_coarse > 0 and err_fine > 0):
        return None
    return math.log(err_coarse / err_fine) / math.log(ratio)


def _run_mesh(bench: Benchmark, n: int, scheme: SchemeKind, mode: str,
              reference: Optional[ReferenceSolution]) -> ErrorReport:
    b = bench.on_grid(n)
    spec = b.spec
    dt = select_dt(b)
    acc = NormAccumulator(spec.grid.dx, mode)
    centers = spec.grid.centers
    if reference is None:
        def record(f):
            acc.add(f.interior, spec.exact(centers, f.time))
    else:
        def record(f):
            acc.add(f.interior, reference.projected(f.time, n))
    try:
        solve(spec, scheme, dt, dt_limit=state_dt_limit(b), callback=record)
    except NonFiniteError as exc:
        raise StudyError(f"{b.id.value} on {n} cells: {exc}", n) from exc
    report = acc.report(n)
    report.c, report.d, report.r = realized_parameters(b, dt)
    return report


def run_study(config: StudyConfig) -> list[ErrorReport]:
    """One report per mesh; orders chained between consecutive meshes."""
    bench = make_benchmark(config.benchmark, config.meshes[0])
    mode = config.norm_mode or bench.norm_mode
    reference = None
    if not bench.has_exact:
        bad = [m for m in config.meshes if config.reference_cells % m]
        if bad:
            raise ConfigurationError(f"meshes {bad} do not divide the {config.reference_cells}-cell reference")
        reference = reference_solution(bench, config.reference_cells)

    workers = min(thread_count(), len(config.meshes))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            reports = list(pool.map(lambda n: _run_mesh(bench, n, config.scheme, mode, reference), config.meshes))
    else:
        reports = [_run_mesh(bench, n, config.scheme, mode, reference) for n in config.meshes]

    for coarse, fine in zip(reports, reports[1:]):
        ratio = fine.n_cells / coarse.n_cells
        fine.order_l1 = order_between(coarse.err_l1, fine.err_l1, ratio)
        fine.order_l2 = order_between(coarse.err_l2, fine.err_l2, ratio)
        fine.order_linf = order_between(coarse.err_linf, fine.err_linf, ratio)
    if config.output is not None:
        write_study(reports, config)
    return reports


def format_reports_csv(reports: Sequence[ErrorReport]) -> str:
    lines = [CSV_HEADER]
    for rep in reports:
        cells = [str(rep.n_cells), fmt(rep.err_l1), fmt(rep.order_l1), fmt(rep.err_l2), fmt(rep.order_l2),
                 fmt(rep.err_linf), fmt(rep.order_linf), fmt(rep.c), fmt(rep.d), fmt(rep.r)]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def worst_order_deviation(reports: Sequence[ErrorReport], target: float = 2.0) -> Optional[float]:
    orders = [o for rep in reports for o in (rep.order_l1, rep.order_l2, rep.order_linf) if o is not None]
    return max(abs(o - target) for o in orders) if orders else None


def study_summary(reports: Sequence[ErrorReport], config: StudyConfig) -> dict:
    return {
        "benchmark": BenchmarkId.parse(config.benchmark).value,
        "scheme": config.scheme.value,
        "worst_order_deviation_from_2": worst_order_deviation(reports),
    }


def write_study(reports: Sequence[ErrorReport], config: StudyConfig) -> None:
    out = Path(config.output)
    atomic_write(out, format_reports_csv(reports))
    atomic_write(out.with_suffix(".json"), dump_json(study_summary(reports, config)))
