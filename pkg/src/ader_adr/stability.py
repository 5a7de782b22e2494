"""von Neumann analysis of the constant-coefficient ADER / MUSCL-Hancock scheme.

The amplification factor ``A(theta, c, d, r)`` multiplies the Fourier mode
``exp(I theta i)`` after one step.  It is available in closed form and,
independently, by stepping a Fourier mode through the five-point stencil.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

STABILITY_TOL = 1e-12


class InconsistentMultiplierError(RuntimeError):
    """A Fourier mode was not mapped onto a multiple of itself."""


@dataclass(frozen=True)
class AmplificationSample:
    theta: float
    c: float
    d: float
    r: float
    a: complex

    @property
    def norm2(self) -> float:
        return self.a.real**2 + self.a.imag**2


@dataclass(frozen=True)
class Orthotope:
    """Box [0, c_max] x [0, d_max] x [r_min, 0] of (c, d, r)."""

    c_max: float
    d_max: float
    r_min: float

    def __post_init__(self) -> None:
        if self.c_max < 0 or self.d_max < 0 or self.r_min > 0:
            raise ValueError("need c_max >= 0, d_max >= 0, r_min <= 0")


def amplification_closed_form(theta, c, d, r):
    """Closed-form amplification factor; broadcasts over array arguments."""
    theta = np.asarray(theta, dtype=float)
    cos1, sin1 = np.cos(theta), np.sin(theta)
    cos2, sin2 = np.cos(2 * theta), np.sin(2 * theta)
    I = 1j
    upwind = 1 - cos1 + I * sin1
    curvature = 2 * I * sin1 - 1 + cos2 - I * sin2
    advective = (
        upwind
        + (1 - c) / 4 * curvature
        + r / 2 * (upwind + curvature / 4)
        + d / 2 * (4 * cos1 - 2 * I * sin1 - 3 - (cos2 - I * sin2))
    )
    diffusive = (
        2 * cos1 - 2
        - c / 4 * (2 * I * sin2 - 4 * I * sin1)
        + d / 2 * (2 * cos2 - 8 * cos1 + 6)
        + r / 2 * (2 * cos1 - 2)
    )
    reactive = 1 - c / 2 * I * sin1 + d * (cos1 - 1) + r / 2
    A = 1 - c * advective + d * diffusive + r * reactive
    return complex(A) if np.ndim(A) == 0 else A


def lae_norm2(theta, c):
    """|A|^2 for pure linear advection (d = r = 0)."""
    theta = np.asarray(theta, dtype=float)
    k = c * (c - 1)
    return k * (np.cos(theta) - 1) ** 2 * (0.5 * k * (np.cos(theta) + 1) + 1) + 1


def amplification_empirical(theta: float, c: float, d: float, r: float, n_cells: int = 64) -> complex:
    """Multiplier of the mode exp(I theta i) after one stencil step on a periodic ring."""
    from .schemes import constant_alpha_update

    if n_cells < 8:
        raise ValueError("n_cells must be >= 8")
    k = theta * n_cells / (2 * math.pi)
    if abs(k - round(k)) > 1e-9:
        raise ValueError("theta must be 2 pi k / n_cells for an integer k")
    idx = np.arange(n_cells)
    phase = theta * idx
    re_new = _ring_step(np.cos(phase), c, d, r, constant_alpha_update)
    im_new = _ring_step(np.sin(phase), c, d, r, constant_alpha_update)
    multipliers = (re_new + 1j * im_new) * np.exp(-1j * phase)
    a = multipliers[0]  # cell 0 has phase 0, so no rounding enters the readout
    if np.max(np.abs(multipliers - a)) > 1e-12 * max(1.0, abs(a)):
        raise InconsistentMultiplierError("Fourier mode multiplier varies across cells")
    return complex(a)


def _ring_step(values: np.ndarray, c, d, r, update) -> np.ndarray:
    padded = np.concatenate([values[-2:], values, values[:2]])
    return update(padded, c, d, r)


def theta_grid(n_theta: int = 721) -> np.ndarray:
    if n_theta < 3:
        raise ValueError("n_theta must be >= 3")
    return np.linspace(-math.pi, math.pi, n_theta)


def m_theta(c: float, d: float, r: float, n_theta: int = 721) -> float:
    """Maximum of |A| over a uniform closed theta grid on [-pi, pi]."""
    return float(np.max(np.abs(amplification_closed_form(theta_grid(n_theta), c, d, r))))


def _m_theta_many(c, d, r, thetas: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized m_theta over broadcast (c, d, r); also returns the maximizing theta index."""
    c, d, r = (np.asarray(v, dtype=float)[..., None] for v in (c, d, r))
    mags = np.abs(amplification_closed_form(thetas, c, d, r))
    return mags.max(axis=-1), mags.argmax(axis=-1)


def _axis(lo: float, hi: float, n: int) -> np.ndarray:
    if lo == hi:
        return np.array([lo])
    if n < 2:
        raise ValueError("need at least 2 samples on a non-degenerate axis")
    return np.linspace(lo, hi, n)


@dataclass(frozen=True)
class OrthotopeReport:
    box: Orthotope
    max_norm: float
    argmax: tuple[float, float, float, float]
    stable: bool

    def as_dict(self) -> dict:
        c, d, r, th = self.argmax
        return {
            "c_max": self.box.c_max,
            "d_max": self.box.d_max,
            "r_min": self.box.r_min,
            "max_norm": self.max_norm,
            "argmax": {"c": c, "d": d, "r": r, "theta": th},
            "stable": self.stable,
        }


def check_orthotope(
    box: Orthotope, grid_resolution: Sequence[int] = (21, 21, 21), n_theta: int = 721
) -> OrthotopeReport:
    """Sample m_theta on the box and report whether it stays within 1 + 1e-12."""
    nc, nd, nr = grid_resolution
    cs = _axis(0.0, box.c_max, nc)
    ds = _axis(0.0, box.d_max, nd)
    rs = _axis(box.r_min, 0.0, nr)
    thetas = theta_grid(n_theta)
    best, best_at = -math.inf, (0.0, 0.0, 0.0, 0.0)
    for r in rs:
        C, D = np.meshgrid(cs, ds, indexing="ij")
        m, arg = _m_theta_many(C, D, np.full_like(C, r), thetas)
        k = np.unravel_index(int(np.argmax(m)), m.shape)
        if m[k] > best:
            best = float(m[k])
            best_at = (float(C[k]), float(D[k]), float(r), float(thetas[arg[k]]))
    return OrthotopeReport(box, best, best_at, best <= 1.0 + STABILITY_TOL)


def sample_region(ranges: dict, n_theta: int = 721) -> np.ndarray:
    """Tabulate m_theta over a (c, d, r) grid.

    ``ranges`` maps "c", "d", "r" to ``(lo, hi, n)``.  Rows are ordered with r
    outermost and c innermost; columns are c, d, r, m_theta.
    """
    axes = {}
    for key in ("c", "d", "r"):
        lo, hi, n = ranges[key]
        if n < 1:
            raise ValueError(f"{key}: need n >= 1")
        axes[key] = np.array([lo]) if n == 1 else np.linspace(lo, hi, int(n))
    R, D, C = np.meshgrid(axes["r"], axes["d"], axes["c"], indexing="ij")
    m, _ = _m_theta_many(C.ravel(), D.ravel(), R.ravel(), theta_grid(n_theta))
    return np.column_stack([C.ravel(), D.ravel(), R.ravel(), m])


def coupled_parameters(lam: float, beta: float, alpha_ref: float, dx: float, dt: float) -> tuple[float, float, float]:
    """(c, d, r) realized by a single time step on a given mesh."""
    if dx <= 0 or dt <= 0:
        raise ValueError("dx and dt must be positive")
    return lam * dt / dx, alpha_ref * dt / dx**2, beta * dt


def courant_from_reaction(lam: float, beta: float, r: float, dx: float) -> float:
    """Courant number implied by fixing the reaction number."""
    return lam * r / (beta * dx)


def reaction_from_courant(lam: float, beta: float, c: float, dx: float) -> float:
    """Reaction number implied by fixing the Courant number."""
    return beta * c * dx / lam


def format_region_csv(table: np.ndarray) -> str:
    lines = ["c,d,r,m_theta"]
    lines += [",".join(f"{v:.17g}" for v in row) for row in table]
    return "\n".join(lines) + "\n"
