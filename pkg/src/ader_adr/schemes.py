"""Finite-volume update schemes for q_t + lam q_x = (alpha q_x)_x + beta q.

Every step has the shape

    q_i^{n+1} = q_i^n - dt/dx (f_{i+1/2} - f_{i-1/2}) + dt g_i + dt s_i

with an advective flux ``f``, a volume diffusion term ``g`` and a numerical
source ``s``.  Arrays are padded fields (see :mod:`ader_adr.grid`); interface
``j`` sits between padded cells ``j`` and ``j + 1``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .grid import (
    ConfigurationError,
    ConstantDiffusion,
    DirichletExact,
    Field,
    Periodic,
    ProblemSpec,
    SpaceTimeDiffusion,
    StateDependentDiffusion,
    ZeroDiffusion,
    apply_bc,
)


class NonFiniteError(FloatingPointError):
    """A step produced NaN or Inf values."""


class DomainError(ValueError):
    """A state-dependent coefficient was evaluated outside its domain."""

    def __init__(self, message: str, cell: int):
        super().__init__(message)
        self.cell = cell


class SchemeKind(enum.Enum):
    ADER_GENERAL = "ader"
    ADER_CONSTANT_ALPHA = "ader-constant"
    ADER_ADVECTION_REACTION = "ader-ar"
    MUSCL_HANCOCK = "muscl-hancock"
    FIRST_ORDER = "first-order"

    @classmethod
    def parse(cls, name: str) -> "SchemeKind":
        key = name.strip().lower().replace("_", "-")
        aliases = {"mh": cls.MUSCL_HANCOCK, "muscl": cls.MUSCL_HANCOCK, "o1": cls.FIRST_ORDER}
        if key in aliases:
            return aliases[key]
        for kind in cls:
            if kind.value == key:
                return kind
        raise ConfigurationError(f"unknown scheme {name!r}")


@dataclass(frozen=True)
class StepParams:
    """Courant, diffusion and reaction numbers for one time step."""

    dt: float
    c: float
    d: float
    r: float

    @classmethod
    def from_values(cls, lam: float, alpha_ref: float, beta: float, dt: float, dx: float) -> "StepParams":
        if dt <= 0 or dx <= 0:
            raise ConfigurationError("dt and dx must be positive")
        return cls(dt=dt, c=lam * dt / dx, d=alpha_ref * dt / dx**2, r=beta * dt)

    @classmethod
    def from_spec(cls, spec: ProblemSpec, dt: float, alpha_ref: float = 0.0) -> "StepParams":
        return cls.from_values(spec.lam, alpha_ref, spec.beta, dt, spec.grid.dx)


@dataclass(frozen=True)
class InterfaceCoeffs:
    """alpha and its time derivative at every interface of the padded field.

    ``cell_alpha`` keeps the cell values of a state-dependent coefficient so
    the next step can form backward differences in time.
    """

    alpha: np.ndarray
    dt_alpha: np.ndarray
    cell_alpha: Optional[np.ndarray] = None


# -- coefficients ------------------------------------------------------------


def _wrapped(x: np.ndarray, spec: ProblemSpec) -> np.ndarray:
    if isinstance(spec.bc, Periodic):
        g = spec.grid
        return g.x_left + np.mod(x - g.x_left, g.length)
    return x


def interface_alpha(
    field: Field,
    spec: ProblemSpec,
    t: float,
    prev_alpha: Optional[np.ndarray] = None,
    dt_prev: Optional[float] = None,
) -> InterfaceCoeffs:
    """Evaluate the diffusion coefficient at every interface at time ``t``.

    ``prev_alpha`` is the previous level's ``cell_alpha`` (state-dependent
    models) or interface ``alpha`` (space-time models without an analytic
    time derivative); without it the time derivative is taken as zero.
    """
    grid = spec.grid
    n_if = grid.n_total - 1
    model = spec.diffusion
    zeros = np.zeros(n_if)
    if isinstance(model, ZeroDiffusion):
        return InterfaceCoeffs(zeros, zeros.copy())
    if isinstance(model, ConstantDiffusion):
        return InterfaceCoeffs(np.full(n_if, float(model.alpha)), zeros)
    if isinstance(model, SpaceTimeDiffusion):
        x = _wrapped(grid.interfaces, spec)
        alpha = np.broadcast_to(np.asarray(model.alpha(x, t), dtype=float), x.shape).copy()
        if model.dt_alpha is not None:
            dt_alpha = np.broadcast_to(np.asarray(model.dt_alpha(x, t), dtype=float), x.shape).copy()
        elif prev_alpha is not None and dt_prev:
            dt_alpha = (alpha - prev_alpha) / dt_prev
        else:
            dt_alpha = zeros
        return InterfaceCoeffs(alpha, dt_alpha)
    if isinstance(model, StateDependentDiffusion):
        q = field.values
        if model.domain is not None:
            ok = np.asarray(model.domain(q), dtype=bool)
            if not ok.all():
                bad = int(np.flatnonzero(~ok)[0])
                raise DomainError(f"state {q[bad]!r} outside the coefficient's domain at cell {bad}", bad)
        with np.errstate(all="ignore"):
            cell = np.asarray(model.alpha(q), dtype=float)
        bad_mask = ~np.isfinite(cell) | (cell < 0)
        if bad_mask.any():
            bad = int(np.flatnonzero(bad_mask)[0])
            raise DomainError(f"invalid diffusion coefficient {cell[bad]!r} at cell {bad}", bad)
        alpha = 0.5 * (cell[:-1] + cell[1:])
        if prev_alpha is not None and dt_prev:
            rate = (cell - prev_alpha) / dt_prev
            dt_alpha = 0.5 * (rate[:-1] + rate[1:])
        else:
            dt_alpha = zeros
        return InterfaceCoeffs(alpha, dt_alpha, cell)
    raise ConfigurationError(f"unknown diffusion model {model!r}")


# -- single-cell formulas ----------------------------------------------------
#
# Indices are padded-field indices.  These mirror the vectorized kernels
# below term by term and exist mainly for inspection and testing.


def _slope_at(field: Field, spec: Optional[ProblemSpec], i: int) -> float:
    q, g = field.values, field.grid
    if spec is not None and isinstance(spec.bc, DirichletExact) and spec.bc.one_sided_slopes:
        first, last = g.n_ghost, g.n_ghost + g.n_cells - 1
        if i == first:
            return (q[i + 1] - q[i]) / g.dx
        if i == last:
            return (q[i] - q[i - 1]) / g.dx
    return centred_slope(field, i)


def centred_slope(field: Field, i: int) -> float:
    """(q_{i+1} - q_{i-1}) / (2 dx)."""
    q = field.values
    if i < 1 or i > q.size - 2:
        raise IndexError(f"cell {i} lacks a neighbour")
    return (q[i + 1] - q[i - 1]) / (2.0 * field.grid.dx)


def diffusion_operator(field: Field, coeffs: InterfaceCoeffs, i: int) -> float:
    """Central approximation of (alpha q_x)_x in cell ``i``."""
    q, a = field.values, coeffs.alpha
    if i < 1 or i > q.size - 2:
        raise IndexError(f"cell {i} lacks a neighbour")
    return (a[i] * (q[i + 1] - q[i]) - a[i - 1] * (q[i] - q[i - 1])) / field.grid.dx**2


def ader_flux(field: Field, coeffs: InterfaceCoeffs, spec: ProblemSpec, params: StepParams, j: int) -> float:
    """Generalized-Riemann-problem flux at interface ``j``."""
    lam, beta, h = spec.lam, spec.beta, params.dt
    if lam == 0.0:
        return 0.0
    q, dx = field.values, field.grid.dx
    if lam > 0:
        cell, side = j, 0.5
    else:
        cell, side = j + 1, -0.5
    slope = _slope_at(field, spec, cell)
    edge = q[cell] + side * dx * slope
    lap = diffusion_operator(field, coeffs, cell)
    return lam * (edge + 0.5 * h * (-lam * slope + beta * edge + lap))


def half_time_diffusion(
    field: Field, coeffs: InterfaceCoeffs, spec: ProblemSpec, params: StepParams, i: int
) -> float:
    """Diffusion term evaluated with states and coefficients evolved to mid-step."""
    q, dx = field.values, field.grid.dx
    lam, beta, h = spec.lam, spec.beta, params.dt
    a, ta = coeffs.alpha, coeffs.dt_alpha
    s = {k: _slope_at(field, spec, k) for k in (i - 1, i, i + 1)}
    L = {k: diffusion_operator(field, coeffs, k) for k in (i - 1, i, i + 1)}
    right = (a[i] + 0.5 * h * ta[i]) * (
        q[i + 1] - q[i] + 0.5 * h * (-lam * (s[i + 1] - s[i]) + L[i + 1] - L[i] + beta * (q[i + 1] - q[i]))
    )
    left = (a[i - 1] + 0.5 * h * ta[i - 1]) * (
        q[i - 1] - q[i] + 0.5 * h * (-lam * (s[i - 1] - s[i]) + L[i - 1] - L[i] + beta * (q[i - 1] - q[i]))
    )
    return (right + left) / dx**2


def numerical_source(field: Field, coeffs: InterfaceCoeffs, spec: ProblemSpec, params: StepParams, i: int) -> float:
    """beta times the mid-step cell state."""
    q = field.values[i]
    lam, beta, h = spec.lam, spec.beta, params.dt
    return beta * (q + 0.5 * h * (-lam * _slope_at(field, spec, i) + diffusion_operator(field, coeffs, i) + beta * q))


# -- vectorized kernels ------------------------------------------------------


def slopes(q: np.ndarray, dx: float, spec: Optional[ProblemSpec] = None) -> np.ndarray:
    """Slopes of every padded cell; the two outermost entries are zero."""
    out = np.zeros_like(q)
    out[1:-1] = (q[2:] - q[:-2]) / (2.0 * dx)
    if spec is not None and isinstance(spec.bc, DirichletExact) and spec.bc.one_sided_slopes:
        g = spec.grid
        first, last = g.n_ghost, g.n_ghost + g.n_cells - 1
        out[first] = (q[first + 1] - q[first]) / dx
        out[last] = (q[last] - q[last - 1]) / dx
    return out


def diffusion_terms(q: np.ndarray, alpha: np.ndarray, dx: float) -> np.ndarray:
    """(alpha q_x)_x for every padded cell; the two outermost entries are zero."""
    jump = alpha * np.diff(q)
    out = np.zeros_like(q)
    out[1:-1] = (jump[1:] - jump[:-1]) / dx**2
    return out


def _finish(new: np.ndarray, field: Field, spec: ProblemSpec, dt: float) -> Field:
    t = field.time + dt
    grid = spec.grid
    interior = new[grid.interior]
    if not np.all(np.isfinite(interior)):
        bad = int(np.flatnonzero(~np.isfinite(interior))[0])
        raise NonFiniteError(f"non-finite value in cell {bad} at t={t:.17g}")
    return apply_bc(Field(new, t, grid), spec, t)


def _check_dt(dt: float) -> None:
    if not dt > 0:
        raise ConfigurationError("dt must be positive")


def step_ader(field: Field, spec: ProblemSpec, dt: float, coeffs: Optional[InterfaceCoeffs] = None) -> Field:
    """One step of the second-order ADER scheme for a general diffusion coefficient."""
    _check_dt(dt)
    grid = spec.grid
    if coeffs is None:
        coeffs = interface_alpha(field, spec, field.time)
    q, dx = field.values, grid.dx
    lam, beta, h = spec.lam, spec.beta, dt
    a, ta = coeffs.alpha, coeffs.dt_alpha
    D = slopes(q, dx, spec)
    L = diffusion_terms(q, a, dx)

    g0, n = grid.n_ghost, grid.n_cells
    I = slice(g0, g0 + n)
    if lam > 0:
        edge = q + 0.5 * dx * D
        f = lam * (edge + 0.5 * h * (-lam * D + beta * edge + L))
        f_right, f_left = f[g0 : g0 + n], f[g0 - 1 : g0 + n - 1]
    elif lam < 0:
        edge = q - 0.5 * dx * D
        f = lam * (edge + 0.5 * h * (-lam * D + beta * edge + L))
        f_right, f_left = f[g0 + 1 : g0 + n + 1], f[g0 : g0 + n]
    else:
        f_right = f_left = np.zeros(n)

    Ip, Im = slice(g0 + 1, g0 + n + 1), slice(g0 - 1, g0 + n - 1)
    ar, al = a[g0 : g0 + n] + 0.5 * h * ta[g0 : g0 + n], a[g0 - 1 : g0 + n - 1] + 0.5 * h * ta[g0 - 1 : g0 + n - 1]
    dq_r, dq_l = q[Ip] - q[I], q[Im] - q[I]
    g_term = (
        ar * (dq_r + 0.5 * h * (-lam * (D[Ip] - D[I]) + L[Ip] - L[I] + beta * dq_r))
        + al * (dq_l + 0.5 * h * (-lam * (D[Im] - D[I]) + L[Im] - L[I] + beta * dq_l))
    ) / dx**2
    s_term = beta * (q[I] + 0.5 * h * (-lam * D[I] + L[I] + beta * q[I]))

    new = q.copy()
    new[I] = q[I] - (h / dx) * (f_right - f_left) + h * g_term + h * s_term
    return _finish(new, field, spec, dt)


def constant_alpha_update(q: np.ndarray, c: float, d: float, r: float) -> np.ndarray:
    """Five-point constant-coefficient update of the padded array ``q``.

    Returns values for every cell with two neighbours on each side, i.e.
    ``q[2:-2]`` advanced one step.  Assumes ``c >= 0``.
    """
    qm2, qm1, q0, qp1, qp2 = q[:-4], q[1:-3], q[2:-2], q[3:-1], q[4:]
    adv = (
        (2 + r) / 2 * (q0 - qm1)
        + (2 - 2 * c + r) / 8 * (qp1 - qm1 - q0 + qm2)
        + d / 2 * (qp1 - 3 * q0 + 3 * qm1 - qm2)
    )
    dif = (
        qp1 - 2 * q0 + qm1
        - c / 4 * (qp2 - 2 * qp1 + 2 * qm1 - qm2)
        + d / 2 * (qp2 - 4 * qp1 + 6 * q0 - 4 * qm1 + qm2)
        + r / 2 * (qp1 - 2 * q0 + qm1)
    )
    src = q0 - c / 4 * (qp1 - qm1) + d / 2 * (qp1 - 2 * q0 + qm1) + r / 2 * q0
    return q0 - c * adv + d * dif + r * src


def step_ader_stencil_constant_alpha(field: Field, spec: ProblemSpec, dt: float) -> Field:
    """ADER step written as a five-point stencil in (c, d, r); centred slopes only."""
    _check_dt(dt)
    model = spec.diffusion
    if isinstance(model, ZeroDiffusion):
        alpha = 0.0
    elif isinstance(model, ConstantDiffusion):
        alpha = model.alpha
    else:
        raise ConfigurationError("the constant-coefficient stencil needs a Zero or Constant diffusion model")
    p = StepParams.from_spec(spec, dt, alpha)
    q = field.values
    new = q.copy()
    if p.c >= 0:
        new[2:-2] = constant_alpha_update(q, p.c, p.d, p.r)
    else:
        new[2:-2] = constant_alpha_update(q[::-1], -p.c, p.d, p.r)[::-1]
    return _finish(new, field, spec, dt)


def step_muscl_hancock(
    field: Field, spec: ProblemSpec, dt: float, coeffs: Optional[InterfaceCoeffs] = None
) -> Field:
    """MUSCL-Hancock step with diffusion and reaction in the half-step evolution."""
    _check_dt(dt)
    grid = spec.grid
    if coeffs is None:
        coeffs = interface_alpha(field, spec, field.time)
    q, dx = field.values, grid.dx
    lam, beta, h = spec.lam, spec.beta, dt

    D = slopes(q, dx, spec)
    q_left = q - 0.5 * dx * D
    q_right = q + 0.5 * dx * D
    # boundary-extrapolated values evolved by dt/2, diffusion and source included
    transport = lam * (q_right - q_left) / dx - diffusion_terms(q, coeffs.alpha, dx)
    qb_right = q_right - 0.5 * h * (transport - beta * q_right)
    qb_left = q_left - 0.5 * h * (transport - beta * q_left)

    g0, n = grid.n_ghost, grid.n_cells
    I = slice(g0, g0 + n)
    if lam > 0:
        f = lam * qb_right  # upwind state left of interface j is cell j
        f_right, f_left = f[g0 : g0 + n], f[g0 - 1 : g0 + n - 1]
    elif lam < 0:
        f = lam * qb_left
        f_right, f_left = f[g0 + 1 : g0 + n + 1], f[g0 : g0 + n]
    else:
        f_right = f_left = np.zeros(n)

    # volume terms from the mid-step cell state
    q_half = 0.5 * (qb_left + qb_right)
    a_half = coeffs.alpha + 0.5 * h * coeffs.dt_alpha
    jump = a_half * np.diff(q_half)
    g_term = (jump[g0 : g0 + n] - jump[g0 - 1 : g0 + n - 1]) / dx**2
    s_term = beta * q_half[I]

    new = q.copy()
    new[I] = q[I] - (h / dx) * (f_right - f_left) + h * g_term + h * s_term
    return _finish(new, field, spec, dt)


def step_advection_reaction(field: Field, spec: ProblemSpec, dt: float, coeffs: Optional[InterfaceCoeffs] = None) -> Field:
    """ADER step for the zero-diffusion case (flux and source only)."""
    _check_dt(dt)
    if not isinstance(spec.diffusion, ZeroDiffusion):
        raise ConfigurationError("advection-reaction scheme needs zero diffusion")
    grid = spec.grid
    q, dx = field.values, grid.dx
    lam, beta, h = spec.lam, spec.beta, dt
    D = slopes(q, dx, spec)
    g0, n = grid.n_ghost, grid.n_cells
    I = slice(g0, g0 + n)
    if lam >= 0:
        edge = q + 0.5 * dx * D
        f = lam * (edge + 0.5 * h * (-lam * D + beta * edge))
        f_right, f_left = f[g0 : g0 + n], f[g0 - 1 : g0 + n - 1]
    else:
        edge = q - 0.5 * dx * D
        f = lam * (edge + 0.5 * h * (-lam * D + beta * edge))
        f_right, f_left = f[g0 + 1 : g0 + n + 1], f[g0 : g0 + n]
    s_term = beta * (q[I] + 0.5 * h * (-lam * D[I] + beta * q[I]))
    new = q.copy()
    new[I] = q[I] - (h / dx) * (f_right - f_left) + h * s_term
    return _finish(new, field, spec, dt)


def step_first_order(field: Field, spec: ProblemSpec, dt: float, coeffs: Optional[InterfaceCoeffs] = None) -> Field:
    """Upwind advection, explicit central diffusion, explicit reaction."""
    _check_dt(dt)
    grid = spec.grid
    if coeffs is None:
        coeffs = interface_alpha(field, spec, field.time)
    q, dx, a = field.values, grid.dx, coeffs.alpha
    g0, n = grid.n_ghost, grid.n_cells
    I, Ip, Im = slice(g0, g0 + n), slice(g0 + 1, g0 + n + 1), slice(g0 - 1, g0 + n - 1)
    c = spec.lam * dt / dx
    r = spec.beta * dt
    upwind = q[I] - q[Im] if c >= 0 else q[Ip] - q[I]
    diffusion = a[g0 : g0 + n] * (q[Ip] - q[I]) + a[g0 - 1 : g0 + n - 1] * (q[Im] - q[I])
    new = q.copy()
    new[I] = q[I] - c * upwind + (dt / dx**2) * diffusion + r * q[I]
    return _finish(new, field, spec, dt)


Stepper = Callable[..., Field]

_STEPPERS: dict[SchemeKind, Stepper] = {
    SchemeKind.ADER_GENERAL: step_ader,
    SchemeKind.MUSCL_HANCOCK: step_muscl_hancock,
    SchemeKind.ADER_ADVECTION_REACTION: step_advection_reaction,
    SchemeKind.FIRST_ORDER: step_first_order,
}


def advance(
    field: Field, spec: ProblemSpec, dt: float, scheme: SchemeKind, coeffs: Optional[InterfaceCoeffs] = None
) -> Field:
    """Advance ``field`` by ``dt`` with the chosen scheme."""
    if scheme is SchemeKind.ADER_CONSTANT_ALPHA:
        return step_ader_stencil_constant_alpha(field, spec, dt)
    return _STEPPERS[scheme](field, spec, dt, coeffs)
