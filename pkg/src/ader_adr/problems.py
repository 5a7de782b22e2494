"""Benchmark problems, time-step selection and discrete error norms."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Union

import numpy as np

from .grid import (
    ConfigurationError,
    ConstantDiffusion,
    DirichletExact,
    Grid1D,
    Periodic,
    ProblemSpec,
    SpaceTimeDiffusion,
    StateDependentDiffusion,
    ZeroDiffusion,
)
from .grid import project_initial
from .schemes import SchemeKind
from .solver import solve
from .stability import Orthotope, coupled_parameters


class NoExactSolution(LookupError):
    pass


class BenchmarkId(enum.Enum):
    TEST1_1 = "test1_1"
    TEST1_2 = "test1_2"
    TEST2_1 = "test2_1"
    TEST2_2 = "test2_2"
    TEST3 = "test3"
    CUSTOM = "custom"

    @classmethod
    def parse(cls, name: Union[str, "BenchmarkId"]) -> "BenchmarkId":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace(".", "_").replace("-", "_")
        for b in cls:
            if b.value == key:
                return b
        raise ConfigurationError(f"unknown benchmark {name!r}")


@dataclass(frozen=True)
class Benchmark:
    id: BenchmarkId
    spec: ProblemSpec
    bounds: Orthotope
    alpha_ref: Optional[float] = None
    norm_mode: str = "sup_over_time"

    def on_grid(self, n_cells: int) -> "Benchmark":
        return replace(self, spec=self.spec.with_grid(self.spec.grid.with_cells(n_cells)))

    @property
    def has_exact(self) -> bool:
        return self.spec.exact is not None


# -- closed-form data ---------------------------------------------------------


def gaussian_pulse(x, t=0.0, lam=1.0, beta=-1.0):
    return np.exp(-2.0 * (np.asarray(x) - lam * t) ** 2 + beta * t)


def step_pulse(x, t=0.0, speed=0.5, decay=0.0):
    xi = np.asarray(x, dtype=float) - speed * t
    return np.where((xi >= 0.125) & (xi <= 0.5), 1.0, 0.0) * math.exp(decay * t)


def damped_sine(x, t=0.0, lam=10.0, beta=-5.0, alpha=1e-5):
    return np.exp((-alpha * math.pi**2 + beta) * t) * np.sin(math.pi * (np.asarray(x) - lam * t))


def exp_sin2(x, t=0.0):
    return np.exp(np.sin(np.asarray(x)) ** 2)


def nonlinear_diffusion_solution(x, t=0.0):
    return np.sinh(2 * t + 2) / (np.cosh(2 * t + 2) - np.sin(math.sqrt(2) * (np.asarray(x) - 1)))


def alpha_test2_2(x, t):
    return 1e-5 * np.exp(np.asarray(x) * (t - 1.0) ** 2)


def dt_alpha_test2_2(x, t):
    x = np.asarray(x)
    return 1e-5 * np.exp(x * (t - 1.0) ** 2) * 2.0 * x * (t - 1.0)


def make_benchmark(
    bench_id: Union[str, BenchmarkId],
    n_cells: int = 64,
    *,
    decayed_step: bool = False,
    one_sided_slopes: Optional[bool] = None,
) -> Benchmark:
    """Build one of the five benchmark problems on ``n_cells`` cells.

    ``decayed_step`` multiplies the Test 1.2 step by ``exp(beta t)``.
    ``one_sided_slopes`` overrides the boundary slope treatment of the
    Dirichlet problems (one-sided for Tests 1.x, centred for Test 2.1).
    """
    bid = BenchmarkId.parse(bench_id)
    one_sided = bid in (BenchmarkId.TEST1_1, BenchmarkId.TEST1_2) if one_sided_slopes is None else one_sided_slopes
    dirichlet = DirichletExact(one_sided_slopes=one_sided)
    if bid is BenchmarkId.TEST1_1:
        exact = lambda x, t: gaussian_pulse(x, t, 1.0, -1.0)
        spec = ProblemSpec(1.0, -1.0, ZeroDiffusion(), lambda x: exact(x, 0.0), dirichlet,
                           Grid1D(0.0, 2.0, n_cells), 1.0, exact)
        return Benchmark(bid, spec, Orthotope(1.0, 0.0, -1.0))
    if bid is BenchmarkId.TEST1_2:
        decay = -1.0 if decayed_step else 0.0
        exact = lambda x, t: step_pulse(x, t, 0.5, decay)
        spec = ProblemSpec(0.5, -1.0, ZeroDiffusion(), lambda x: exact(x, 0.0), dirichlet,
                           Grid1D(0.0, 1.5, n_cells), 1.0, exact)
        return Benchmark(bid, spec, Orthotope(0.5, 0.0, -1.0))
    if bid is BenchmarkId.TEST2_1:
        exact = lambda x, t: damped_sine(x, t)
        spec = ProblemSpec(10.0, -5.0, ConstantDiffusion(1e-5), lambda x: exact(x, 0.0), dirichlet,
                           Grid1D(-1.0, 1.0, n_cells), 1.0, exact)
        # errors at t_end: the solution decays like exp(-5 t)
        return Benchmark(bid, spec, Orthotope(0.1, 0.25, -0.25), norm_mode="final_time")
    if bid is BenchmarkId.TEST2_2:
        spec = ProblemSpec(10.0, -5.0, SpaceTimeDiffusion(alpha_test2_2, dt_alpha_test2_2), exp_sin2,
                           Periodic(), Grid1D(0.0, 2.0 * math.pi, n_cells), 1.0, None)
        # d reported against the coefficient's scale 1e-5 (its value everywhere at t = 1)
        return Benchmark(bid, spec, Orthotope(0.5, 0.25, -0.5), alpha_ref=1e-5)
    if bid is BenchmarkId.TEST3:
        half = math.sqrt(2.0) * math.pi
        spec = ProblemSpec(0.0, 0.0,
                           StateDependentDiffusion(lambda q: 1.0 / q, lambda q: q > 0),
                           lambda x: nonlinear_diffusion_solution(x, 0.0), Periodic(),
                           Grid1D(-half, half, n_cells), 1.0, nonlinear_diffusion_solution)
        return Benchmark(bid, spec, Orthotope(0.0, 0.25, 0.0))
    raise ConfigurationError(f"unhandled benchmark {bid}")


def exact_solution(bench: Benchmark, x, t: float):
    """Pointwise exact solution; raises :class:`NoExactSolution` for Test 2.2."""
    if bench.spec.exact is None:
        raise NoExactSolution(f"{bench.id.value} has no closed-form solution")
    return bench.spec.exact(x, t)


# -- time step ----------------------------------------------------------------


def reference_alpha(spec: ProblemSpec) -> float:
    """Representative diffusion coefficient used for the diffusion number."""
    model = spec.diffusion
    if isinstance(model, ZeroDiffusion):
        return 0.0
    if isinstance(model, ConstantDiffusion):
        return float(model.alpha)
    g = spec.grid
    if isinstance(model, SpaceTimeDiffusion):
        x = np.linspace(g.x_left, g.x_right, 64)
        t = np.linspace(0.0, spec.t_end, 64)
        return float(max(np.max(model.alpha(x, tk)) for tk in t))
    if isinstance(model, StateDependentDiffusion):
        q = np.asarray(spec.q0(np.linspace(g.x_left, g.x_right, 256)), dtype=float)
        if model.domain is not None:
            q = q[np.asarray(model.domain(q), dtype=bool)]
        with np.errstate(all="ignore"):
            a = np.asarray(model.alpha(q), dtype=float)
        a = a[np.isfinite(a)]
        # inadmissible initial states surface as a DomainError on the first step
        return float(a.max()) if a.size else 0.0
    raise ConfigurationError(f"unknown diffusion model {model!r}")


def _alpha_ref(bench: Benchmark, alpha_ref: Optional[float]) -> float:
    if alpha_ref is not None:
        return alpha_ref
    if bench.alpha_ref is not None:
        return bench.alpha_ref
    return reference_alpha(bench.spec)


def select_dt(bench: Benchmark, grid: Optional[Grid1D] = None, alpha_ref: Optional[float] = None) -> float:
    """Largest step keeping (c, d, r) inside the benchmark's orthotope."""
    grid = grid or bench.spec.grid
    spec = bench.spec
    box = bench.bounds
    a_ref = _alpha_ref(bench, alpha_ref)
    candidates = []
    if spec.lam != 0 and box.c_max > 0:
        candidates.append(box.c_max * grid.dx / abs(spec.lam))
    if a_ref > 0 and box.d_max > 0:
        candidates.append(box.d_max * grid.dx**2 / a_ref)
    if spec.beta < 0 and box.r_min < 0:
        candidates.append(box.r_min / spec.beta)
    if not candidates:
        raise ConfigurationError("no active time-step constraint")
    return min(candidates)


def realized_parameters(bench: Benchmark, dt: float, alpha_ref: Optional[float] = None) -> tuple[float, float, float]:
    spec = bench.spec
    return coupled_parameters(spec.lam, spec.beta, _alpha_ref(bench, alpha_ref), spec.grid.dx, dt)


def state_dt_limit(bench: Benchmark):
    """Per-step cap keeping the diffusion number of a state-dependent model below d_max."""
    spec = bench.spec
    model = spec.diffusion
    if not isinstance(model, StateDependentDiffusion) or bench.bounds.d_max <= 0:
        return None
    dx2, d_max, inner = spec.grid.dx**2, bench.bounds.d_max, spec.grid.interior

    def limit(field):
        a_max = float(np.max(model.alpha(field.values[inner])))
        return d_max * dx2 / a_max if a_max > 0 else math.inf

    return limit


# -- error norms ----------------------------------------------------------------


@dataclass
class ErrorReport:
    n_cells: int
    err_l1: float
    err_l2: float
    err_linf: float
    rel_l1: float
    rel_l2: float
    rel_linf: float
    order_l1: Optional[float] = None
    order_l2: Optional[float] = None
    order_linf: Optional[float] = None
    c: float = float("nan")
    d: float = float("nan")
    r: float = float("nan")


def discrete_norms(values: np.ndarray, dx: float) -> np.ndarray:
    """(L1, L2, Linf) grid norms of a cell-wise array."""
    v = np.abs(np.asarray(values, dtype=float))
    return np.array([dx * v.sum(), math.sqrt(dx * float(np.dot(v, v))), float(v.max()) if v.size else 0.0])


class NormAccumulator:
    """Running l-infinity-in-time of the spatial error norms."""

    def __init__(self, dx: float, mode: str = "sup_over_time"):
        if mode not in ("sup_over_time", "final_time"):
            raise ConfigurationError(f"unknown norm mode {mode!r}")
        self.dx = dx
        self.mode = mode
        self.err = np.zeros(3)
        self.ref = np.zeros(3)
        self.count = 0

    def add(self, numeric: np.ndarray, reference: np.ndarray) -> None:
        numeric = np.asarray(numeric, dtype=float)
        reference = np.asarray(reference, dtype=float)
        if numeric.shape != reference.shape:
            raise ConfigurationError("numeric and reference grids differ")
        e = discrete_norms(numeric - reference, self.dx)
        r = discrete_norms(reference, self.dx)
        if self.mode == "final_time":
            self.err, self.ref = e, r
        else:
            self.err = np.maximum(self.err, e)
            self.ref = np.maximum(self.ref, r)
        self.count += 1

    def report(self, n_cells: int) -> ErrorReport:
        with np.errstate(divide="ignore", invalid="ignore"):
            rel = np.where(self.ref > 0, self.err / self.ref, np.nan)
        return ErrorReport(n_cells, *map(float, self.err), *map(float, rel))


def error_norms(
    numeric: Union[np.ndarray, Sequence[np.ndarray]],
    reference: Union[np.ndarray, Sequence[np.ndarray]],
    dx: float,
    mode: str = "sup_over_time",
) -> ErrorReport:
    """Discrete L1/L2/Linf errors, maximized over the recorded time levels."""
    num = [np.asarray(numeric, dtype=float)] if np.ndim(numeric) == 1 else [np.asarray(a) for a in numeric]
    ref = [np.asarray(reference, dtype=float)] if np.ndim(reference) == 1 else [np.asarray(a) for a in reference]
    if len(num) != len(ref):
        raise ConfigurationError("numeric and reference record different numbers of time levels")
    acc = NormAccumulator(dx, mode)
    for a, b in zip(num, ref):
        acc.add(a, b)
    return acc.report(num[0].size)


def restrict(fine: np.ndarray, n_coarse: int) -> np.ndarray:
    """Average consecutive fine cells onto ``n_coarse`` cells."""
    fine = np.asarray(fine, dtype=float)
    if fine.size % n_coarse:
        raise ConfigurationError(f"{fine.size} fine cells do not divide into {n_coarse}")
    return fine.reshape(n_coarse, -1).mean(axis=1)


@dataclass
class ReferenceSolution:
    """Fine-mesh solve with every time level kept for later restriction."""

    n_cells: int
    times: np.ndarray
    levels: list[np.ndarray]

    @property
    def final(self) -> np.ndarray:
        return self.levels[-1]

    def at(self, t: float, tol: float = 1e-9) -> np.ndarray:
        k = int(np.argmin(np.abs(self.times - t)))
        if abs(self.times[k] - t) > tol * max(1.0, abs(t)):
            raise ConfigurationError(f"reference has no time level at t={t:.17g}")
        return self.levels[k]

    def projected(self, t: float, n_coarse: int) -> np.ndarray:
        return restrict(self.at(t), n_coarse)


def reference_solution(
    bench: Benchmark, fine_cells: int = 512, scheme: Optional[SchemeKind] = None
) -> ReferenceSolution:
    """Solve ``bench`` on ``fine_cells`` cells keeping every time level."""
    scheme = scheme or SchemeKind.ADER_GENERAL
    fine = bench.on_grid(fine_cells)
    dt = select_dt(fine)
    result = solve(fine.spec, scheme, dt, dt_limit=state_dt_limit(fine), keep_history=True)
    times = np.array([0.0] + result.times)
    levels = [project_initial(fine.spec).interior.copy()] + result.history
    return ReferenceSolution(fine_cells, times, levels)
