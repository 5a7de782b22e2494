"""Time loop shared by single solves, reference solves and convergence studies."""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Callable, Optional

import numpy as np

from .grid import Field, ProblemSpec, StateDependentDiffusion, SpaceTimeDiffusion, project_initial
from .schemes import InterfaceCoeffs, SchemeKind, advance, interface_alpha


@dataclass
class SolveResult:
    field: Field
    times: list[float] = dc_field(default_factory=list)
    dts: list[float] = dc_field(default_factory=list)
    history: Optional[list[np.ndarray]] = None

    @property
    def n_steps(self) -> int:
        return len(self.dts)


def solve(
    spec: ProblemSpec,
    scheme: SchemeKind,
    dt: float,
    *,
    initial: Optional[Field] = None,
    quadrature_points: int = 16,
    dt_limit: Optional[Callable[[Field], float]] = None,
    callback: Optional[Callable[[Field], None]] = None,
    keep_history: bool = False,
) -> SolveResult:
    """Advance from ``t = 0`` to ``spec.t_end`` with nominal step ``dt``.

    Steps are taken at ``t_n = n * dt`` with the last one clipped onto
    ``t_end``.  ``dt_limit(field)`` may shorten individual steps (used for
    state-dependent diffusion); ``callback`` sees every new time level.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    field = initial if initial is not None else project_initial(spec, quadrature_points)
    result = SolveResult(field, history=[] if keep_history else None)
    t_end = spec.t_end
    # tolerate round-off so that t_end/dt integral does not add a sliver step
    n_nominal = max(1, math.ceil(t_end / dt - 1e-9))
    needs_coeff_history = isinstance(spec.diffusion, (StateDependentDiffusion, SpaceTimeDiffusion))
    prev_coeffs: Optional[InterfaceCoeffs] = None
    prev_dt: Optional[float] = None
    n = 0
    t = field.time
    while t < t_end and not math.isclose(t, t_end, rel_tol=0.0, abs_tol=1e-12 * max(1.0, t_end)):
        if dt_limit is None:
            n += 1
            t_next = t_end if n >= n_nominal else n * dt
            h = t_next - t
        else:
            h = min(dt, dt_limit(field), t_end - t)
            if t_end - (t + h) < 1e-9 * h:
                h = t_end - t
            t_next = t + h
        prev_alpha = None
        if needs_coeff_history and prev_coeffs is not None:
            prev_alpha = (
                prev_coeffs.cell_alpha
                if isinstance(spec.diffusion, StateDependentDiffusion)
                else prev_coeffs.alpha
            )
        coeffs = interface_alpha(field, spec, t, prev_alpha, prev_dt)
        field = advance(field, spec, h, scheme, coeffs)
        field.time = t_next
        t = t_next
        prev_coeffs, prev_dt = coeffs, h
        result.times.append(t)
        result.dts.append(h)
        if keep_history:
            result.history.append(field.interior.copy())
        if callback is not None:
            callback(field)
    result.field = field
    return result
