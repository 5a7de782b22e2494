"""Declarative problem files for the command line.

A problem file is flat ``key = value`` UTF-8 text with ``#`` comments::

    domain = 0 2
    cells = 64
    lambda = 1
    beta = -1
    alpha = const 0          # or: builtin test2_2 | builtin inverse | table alpha.csv
    q0 = builtin gaussian    # or: table q0.csv
    exact = builtin gaussian
    bc = dirichlet           # or: periodic
    t_end = 1
    c_max = 1
    r_min = -1

Tables are CSV files resolved relative to the problem file.  A q0 table has
columns ``x,q``.  An alpha table has ``x`` down the first column and the
time levels across the first row; it is interpolated bilinearly.
"""

from __future__ import annotations

from functools import partial
from pathlib import Path
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import RegularGridInterpolator

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
from .problems import (
    Benchmark,
    BenchmarkId,
    alpha_test2_2,
    dt_alpha_test2_2,
    damped_sine,
    exp_sin2,
    gaussian_pulse,
    nonlinear_diffusion_solution,
    step_pulse,
)
from .stability import Orthotope

KNOWN_KEYS = {
    "domain", "cells", "lambda", "beta", "alpha", "q0", "exact", "bc", "t_end",
    "c_max", "d_max", "r_min", "one_sided_slopes", "alpha_ref",
}


def parse_keyvalue(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lower()
        if key not in KNOWN_KEYS:
            raise ConfigurationError(f"line {lineno}: unknown key {key!r}")
        if key in out:
            raise ConfigurationError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def _float(raw: dict, key: str, default: Optional[float] = None) -> float:
    if key not in raw:
        if default is None:
            raise ConfigurationError(f"missing key {key!r}")
        return default
    try:
        return float(raw[key])
    except ValueError:
        raise ConfigurationError(f"{key}: not a number: {raw[key]!r}") from None


def _builtin_solution(name: str, lam: float, beta: float) -> Callable:
    table = {
        "gaussian": lambda x, t: gaussian_pulse(x, t, lam, beta),
        "step": lambda x, t: step_pulse(x, t, lam, 0.0),
        "decayed_step": lambda x, t: step_pulse(x, t, lam, beta),
        "damped_sine": lambda x, t: damped_sine(x, t, lam, beta),
        "exp_sin2": exp_sin2,
        "nonlinear_th": nonlinear_diffusion_solution,
    }
    if name not in table:
        raise ConfigurationError(f"unknown builtin function {name!r}; choose from {sorted(table)}")
    return table[name]


def _read_table(path: Path, skiprows: int = 0) -> np.ndarray:
    try:
        data = np.loadtxt(path, delimiter=",", skiprows=skiprows, ndmin=2)
    except ValueError as exc:
        raise ConfigurationError(f"{path}: {exc}") from None
    if not np.all(np.isfinite(data)):
        raise ConfigurationError(f"{path}: non-finite table entry")
    return data


def _alpha_table(path: Path) -> SpaceTimeDiffusion:
    data = _read_table(path)
    t = data[0, 1:]
    x = data[1:, 0]
    values = data[1:, 1:]
    interp = RegularGridInterpolator((x, t), values, method="linear", bounds_error=False, fill_value=None)

    def alpha(xq, tq):
        xq = np.asarray(xq, dtype=float)
        pts = np.column_stack([xq.ravel(), np.full(xq.size, float(tq))])
        return interp(pts).reshape(xq.shape)

    return SpaceTimeDiffusion(alpha)


def _q0_table(path: Path) -> Callable:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().replace(" ", "")
    if header != "x,q":
        raise ConfigurationError(f"{path}: expected header 'x,q'")
    data = _read_table(path, skiprows=1)
    xs, qs = data[:, 0], data[:, 1]
    return lambda x: np.interp(x, xs, qs)


def _split(value: str) -> tuple[str, str]:
    parts = value.split(None, 1)
    if len(parts) != 2:
        raise ConfigurationError(f"expected '<kind> <argument>', got {value!r}")
    return parts[0].lower(), parts[1].strip()


def load_problem(path: Path) -> Benchmark:
    """Parse a problem file into a benchmark-like description."""
    path = Path(path)
    raw = parse_keyvalue(path.read_text(encoding="utf-8"))
    base = path.parent

    try:
        lo, hi = (float(v) for v in raw["domain"].split())
    except KeyError:
        raise ConfigurationError("missing key 'domain'") from None
    except ValueError:
        raise ConfigurationError("domain: expected two numbers") from None
    cells = int(_float(raw, "cells", 64))
    lam, beta = _float(raw, "lambda", 0.0), _float(raw, "beta", 0.0)

    diffusion = ZeroDiffusion()
    if "alpha" in raw:
        kind, arg = _split(raw["alpha"])
        if kind == "const":
            a = float(arg)
            diffusion = ConstantDiffusion(a) if a > 0 else ZeroDiffusion()
        elif kind == "builtin" and arg == "test2_2":
            diffusion = SpaceTimeDiffusion(alpha_test2_2, dt_alpha_test2_2)
        elif kind == "builtin" and arg == "inverse":
            diffusion = StateDependentDiffusion(lambda q: 1.0 / q, lambda q: q > 0)
        elif kind == "table":
            diffusion = _alpha_table(base / arg)
        else:
            raise ConfigurationError(f"alpha: unsupported value {raw['alpha']!r}")

    exact = None
    if "exact" in raw:
        kind, arg = _split(raw["exact"])
        if kind != "builtin":
            raise ConfigurationError("exact: only builtin solutions are supported")
        exact = _builtin_solution(arg, lam, beta)
    if "q0" in raw:
        kind, arg = _split(raw["q0"])
        if kind == "builtin":
            q0 = partial(_builtin_solution(arg, lam, beta), t=0.0)
        elif kind == "table":
            q0 = _q0_table(base / arg)
        else:
            raise ConfigurationError(f"q0: unsupported value {raw['q0']!r}")
    elif exact is not None:
        q0 = partial(exact, t=0.0)
    else:
        raise ConfigurationError("need q0 or exact")

    bc_name = raw.get("bc", "periodic").lower()
    if bc_name == "periodic":
        bc = Periodic()
    elif bc_name == "dirichlet":
        one_sided = raw.get("one_sided_slopes", "true").lower() in ("1", "true", "yes")
        bc = DirichletExact(one_sided)
    else:
        raise ConfigurationError(f"bc: unknown boundary condition {bc_name!r}")

    spec = ProblemSpec(lam, beta, diffusion, q0, bc, Grid1D(lo, hi, cells), _float(raw, "t_end", 1.0), exact)
    try:
        bounds = Orthotope(_float(raw, "c_max", 0.0), _float(raw, "d_max", 0.0), _float(raw, "r_min", 0.0))
    except ValueError as exc:
        raise ConfigurationError(str(exc)) from None
    alpha_ref = _float(raw, "alpha_ref") if "alpha_ref" in raw else None
    return Benchmark(BenchmarkId.CUSTOM, spec, bounds, alpha_ref)
