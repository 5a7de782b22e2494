"""Uniform 1D grids, problem descriptions and ghost-cell fields.

Cell values are stored padded with ``N_GHOST`` ghost cells on each side, so
the interior cell ``k`` (0-based) lives at index ``k + N_GHOST`` of
``Field.values``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field, replace
from pathlib import Path
from typing import Callable, Optional, Union

import numpy as np

from ._io import atomic_write, fmt

N_GHOST = 2

ScalarFn = Callable[[np.ndarray], np.ndarray]
SpaceTimeFn = Callable[[np.ndarray, float], np.ndarray]


class ConfigurationError(ValueError):
    """Raised for inconsistent problem or solver configuration."""


@dataclass(frozen=True)
class Grid1D:
    """Uniform partition of ``[x_left, x_right]`` into ``n_cells`` cells."""

    x_left: float
    x_right: float
    n_cells: int
    n_ghost: int = N_GHOST

    def __post_init__(self) -> None:
        if not (np.isfinite(self.x_left) and np.isfinite(self.x_right)):
            raise ConfigurationError("grid bounds must be finite")
        if self.x_right <= self.x_left:
            raise ConfigurationError("x_right must be greater than x_left")
        if int(self.n_cells) != self.n_cells or self.n_cells <= 0:
            raise ConfigurationError("n_cells must be a positive integer")
        if self.n_ghost != N_GHOST:
            raise ConfigurationError(f"n_ghost is fixed to {N_GHOST}")

    @property
    def dx(self) -> float:
        return (self.x_right - self.x_left) / self.n_cells

    @property
    def length(self) -> float:
        return self.x_right - self.x_left

    @property
    def n_total(self) -> int:
        return self.n_cells + 2 * self.n_ghost

    @property
    def interior(self) -> slice:
        return slice(self.n_ghost, self.n_ghost + self.n_cells)

    @property
    def centers(self) -> np.ndarray:
        """Interior cell centers."""
        return self.x_left + (np.arange(self.n_cells) + 0.5) * self.dx

    @property
    def padded_centers(self) -> np.ndarray:
        """Cell centers including ghost cells (ghost centers lie outside the domain)."""
        k = np.arange(-self.n_ghost, self.n_cells + self.n_ghost)
        return self.x_left + (k + 0.5) * self.dx

    @property
    def interfaces(self) -> np.ndarray:
        """Interface positions of the padded field; entry j separates cells j and j+1."""
        k = np.arange(-self.n_ghost + 1, self.n_cells + self.n_ghost)
        return self.x_left + k * self.dx

    def with_cells(self, n_cells: int) -> "Grid1D":
        return replace(self, n_cells=n_cells)


# -- diffusion models --------------------------------------------------------


@dataclass(frozen=True)
class ZeroDiffusion:
    pass


@dataclass(frozen=True)
class ConstantDiffusion:
    alpha: float

    def __post_init__(self) -> None:
        if not self.alpha >= 0.0:
            raise ConfigurationError("constant diffusion coefficient must be >= 0")


@dataclass(frozen=True)
class SpaceTimeDiffusion:
    """Prescribed ``alpha(x, t)``; ``dt_alpha`` is its time derivative if known."""

    alpha: SpaceTimeFn
    dt_alpha: Optional[SpaceTimeFn] = None


@dataclass(frozen=True)
class StateDependentDiffusion:
    """``alpha(q)``; ``domain(q)`` returns a boolean mask of admissible states."""

    alpha: ScalarFn
    domain: Optional[ScalarFn] = None


DiffusionModel = Union[ZeroDiffusion, ConstantDiffusion, SpaceTimeDiffusion, StateDependentDiffusion]


# -- boundary conditions -----------------------------------------------------


@dataclass(frozen=True)
class Periodic:
    pass


@dataclass(frozen=True)
class DirichletExact:
    """Ghost cells take exact-solution point values at the ghost centers.

    With ``one_sided_slopes`` the first and last interior cells use the
    forward/backward slope instead of the centred one.
    """

    one_sided_slopes: bool = True


BoundaryCondition = Union[Periodic, DirichletExact]


@dataclass(frozen=True)
class ProblemSpec:
    """Linear advection speed, reaction coefficient, diffusion model and data."""

    lam: float
    beta: float
    diffusion: DiffusionModel
    q0: ScalarFn
    bc: BoundaryCondition
    grid: Grid1D
    t_end: float
    exact: Optional[SpaceTimeFn] = None

    def __post_init__(self) -> None:
        if not self.t_end > 0:
            raise ConfigurationError("t_end must be positive")
        if isinstance(self.bc, DirichletExact) and self.exact is None:
            raise ConfigurationError("Dirichlet boundaries need an exact solution")

    def with_grid(self, grid: Grid1D) -> "ProblemSpec":
        return replace(self, grid=grid)


@dataclass
class Field:
    """One time level of cell averages, padded with ghost cells."""

    values: np.ndarray
    time: float
    grid: Grid1D = dc_field(repr=False)

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.n_total,):
            raise ConfigurationError(
                f"field has {self.values.shape[0]} entries, grid needs {self.grid.n_total}"
            )

    @property
    def interior(self) -> np.ndarray:
        return self.values[self.grid.interior]

    def copy(self) -> "Field":
        return Field(self.values.copy(), self.time, self.grid)


def from_interior(values: np.ndarray, spec: ProblemSpec, t: float = 0.0) -> Field:
    """Wrap interior values into a padded field and fill its ghosts."""
    grid = spec.grid
    values = np.asarray(values, dtype=float)
    if values.shape != (grid.n_cells,):
        raise ConfigurationError("interior values do not match the grid")
    padded = np.zeros(grid.n_total)
    padded[grid.interior] = values
    return apply_bc(Field(padded, t, grid), spec, t)


def project_initial(spec: ProblemSpec, quadrature_points: int = 16) -> Field:
    """Cell averages of ``spec.q0`` by Gauss-Legendre quadrature on every cell.

    One point is the midpoint rule; more points integrate smooth data to
    round-off and still average a cell-aligned step exactly.
    """
    if quadrature_points < 1:
        raise ConfigurationError("quadrature_points must be >= 1")
    grid = spec.grid
    nodes, weights = np.polynomial.legendre.leggauss(quadrature_points)
    x = grid.centers[:, None] + 0.5 * nodes[None, :] * grid.dx
    averages = 0.5 * np.asarray(spec.q0(x), dtype=float).reshape(x.shape) @ weights
    return from_interior(averages, spec, 0.0)


def apply_bc(field: Field, spec: ProblemSpec, t: float) -> Field:
    """Return a copy of ``field`` with ghost cells filled for time ``t``."""
    grid = spec.grid
    if field.values.shape != (grid.n_total,):
        raise ConfigurationError("field length inconsistent with grid")
    g, n = grid.n_ghost, grid.n_cells
    out = field.values.copy()
    if isinstance(spec.bc, Periodic):
        if n < g:
            raise ConfigurationError("periodic ring needs at least n_ghost cells")
        out[:g] = out[n : n + g]
        out[n + g :] = out[g : 2 * g]
    elif isinstance(spec.bc, DirichletExact):
        if spec.exact is None:
            raise ConfigurationError("Dirichlet boundaries need an exact solution")
        xg = grid.padded_centers
        out[:g] = spec.exact(xg[:g], t)
        out[n + g :] = spec.exact(xg[n + g :], t)
    else:
        raise ConfigurationError(f"unknown boundary condition {spec.bc!r}")
    return Field(out, t, grid)


def write_field_csv(field: Field, path: Union[str, Path]) -> None:
    """Write interior cells as ``x,q`` rows with 17 significant digits."""
    atomic_write(path, format_field_csv(field))


def format_field_csv(field: Field) -> str:
    rows = ["x,q"]
    rows += [f"{fmt(x)},{fmt(q)}" for x, q in zip(field.grid.centers, field.interior)]
    return "\n".join(rows) + "\n"


def read_field_csv(path: Union[str, Path]) -> tuple[np.ndarray, np.ndarray]:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return data[:, 0], data[:, 1]
