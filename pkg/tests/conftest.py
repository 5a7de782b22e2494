import numpy as np
import pytest

from ader_adr.grid import Grid1D, Periodic, ProblemSpec, ZeroDiffusion, from_interior


def ring_spec(n=16, lam=1.0, beta=0.0, diffusion=None, length=1.0, t_end=1.0):
    """Periodic problem on [0, length]; q0 is irrelevant for single-step tests."""
    return ProblemSpec(
        lam, beta, diffusion or ZeroDiffusion(), lambda x: np.zeros_like(x), Periodic(),
        Grid1D(0.0, length, n), t_end,
    )


def random_field(spec, rng, scale=1.0):
    return from_interior(scale * rng.standard_normal(spec.grid.n_cells), spec, 0.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


# one line per acceptance criterion, printed after the run
ACCEPTANCE: dict[str, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE, key=lambda k: int(k)):
            terminalreporter.write_line(ACCEPTANCE[key])
