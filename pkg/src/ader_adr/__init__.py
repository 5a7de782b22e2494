"""Second-order ADER / MUSCL-Hancock finite volumes for 1D advection-diffusion-reaction."""

from .convergence import StudyConfig, StudyError, order_between, run_study
from .grid import (
    ConfigurationError,
    ConstantDiffusion,
    DirichletExact,
    Field,
    Grid1D,
    Periodic,
    ProblemSpec,
    SpaceTimeDiffusion,
    StateDependentDiffusion,
    ZeroDiffusion,
    apply_bc,
    project_initial,
)
from .problems import Benchmark, BenchmarkId, ErrorReport, error_norms, make_benchmark, select_dt
from .schemes import DomainError, NonFiniteError, SchemeKind, advance
from .solver import SolveResult, solve
from .stability import (
    Orthotope,
    amplification_closed_form,
    amplification_empirical,
    check_orthotope,
    m_theta,
    sample_region,
)

__version__ = "0.1.0"
