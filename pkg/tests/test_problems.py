import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from ader_adr.grid import ConfigurationError, project_initial
from ader_adr.problems import (
    BenchmarkId,
    NoExactSolution,
    NormAccumulator,
    discrete_norms,
    error_norms,
    exact_solution,
    make_benchmark,
    nonlinear_diffusion_solution,
    realized_parameters,
    reference_alpha,
    restrict,
    select_dt,
)

CLOSED_FORM = ["test1_1", "test1_2", "test2_1", "test3"]


def test_benchmark_parameters():
    b = make_benchmark("test2_1")
    s = b.spec
    assert (s.lam, s.beta, s.diffusion.alpha, s.grid.x_left, s.grid.x_right) == (10, -5, 1e-5, -1, 1)
    b = make_benchmark("Test3")
    assert b.spec.grid.x_right == pytest.approx(math.sqrt(2) * math.pi)
    assert BenchmarkId.parse("test2.2") is BenchmarkId.TEST2_2
    with pytest.raises(ConfigurationError):
        BenchmarkId.parse("test9")


def test_exact_examples():
    assert exact_solution(make_benchmark("test1_1"), 1.0, 1.0) == pytest.approx(math.exp(-1), abs=1e-15)
    assert exact_solution(make_benchmark("test1_2"), 0.5, 0.5) == 1.0
    assert exact_solution(make_benchmark("test1_2", decayed_step=True), 0.5, 0.5) == pytest.approx(math.exp(-0.5))
    with pytest.raises(NoExactSolution):
        exact_solution(make_benchmark("test2_2"), 0.0, 0.0)


@pytest.mark.parametrize("name", CLOSED_FORM)
def test_exact_matches_initial_data(name):
    b = make_benchmark(name)
    g = b.spec.grid
    x = np.random.default_rng(1).uniform(g.x_left, g.x_right, 100)
    np.testing.assert_allclose(b.spec.exact(x, 0.0), b.spec.q0(x), rtol=0, atol=1e-14)


def test_damped_sine_formula():
    b = make_benchmark("test2_1")
    x, t = 0.3, 0.7
    expect = math.exp((-1e-5 * math.pi**2 - 5) * t) * math.sin(math.pi * (x - 10 * t))
    assert b.spec.exact(x, t) == pytest.approx(expect, rel=1e-13)


def test_nonlinear_solution_satisfies_pde():
    rng = np.random.default_rng(11)
    x = rng.uniform(-math.sqrt(2) * math.pi, math.sqrt(2) * math.pi, 100)
    t = rng.uniform(0.0, 1.0, 100)
    h = 1e-3
    q = nonlinear_diffusion_solution

    def d1(f, y):  # fourth-order central first derivative
        return (-f(y + 2 * h) + 8 * f(y + h) - 8 * f(y - h) + f(y - 2 * h)) / (12 * h)

    q_t = d1(lambda s: q(x, s), t)
    flux = lambda y: d1(lambda z: q(z, t), y) / q(y, t)
    residual = q_t - d1(flux, x)
    assert np.max(np.abs(residual)) < 1e-6


def test_select_dt_examples():
    b = make_benchmark("test1_1", 8)
    assert select_dt(b) == 0.25
    b = make_benchmark("test3", 32)
    assert select_dt(b) == pytest.approx(0.25 * b.spec.grid.dx**2 / reference_alpha(b.spec))
    b = make_benchmark("test2_2", 8)
    c, d, r = realized_parameters(b, select_dt(b))
    assert c == pytest.approx(0.5)
    assert d == pytest.approx(6.37e-7, rel=5e-3)
    assert r == pytest.approx(-1.96e-1, rel=5e-3)


@pytest.mark.parametrize("name", ["test1_1", "test1_2", "test2_1", "test2_2", "test3"])
@pytest.mark.parametrize("n", [8, 37, 128, 512])
def test_select_dt_respects_bounds(name, n):
    b = make_benchmark(name, n)
    c, d, r = realized_parameters(b, select_dt(b))
    box = b.bounds
    assert abs(c) <= box.c_max * (1 + 1e-12) or box.c_max == 0
    assert d <= box.d_max * (1 + 1e-12) or box.d_max == 0
    assert r >= box.r_min * (1 + 1e-12) or box.r_min == 0


def test_select_dt_needs_a_constraint():
    b = make_benchmark("test1_1")
    from dataclasses import replace
    from ader_adr.stability import Orthotope

    with pytest.raises(ConfigurationError):
        select_dt(replace(b, bounds=Orthotope(0.0, 0.0, 0.0)))


def test_norm_examples():
    assert error_norms(np.ones(5), np.ones(5), 0.1).err_l1 == 0.0
    rep = error_norms(np.ones(8), np.zeros(8), 0.25)
    assert (rep.err_l1, rep.err_l2, rep.err_linf) == pytest.approx((2.0, math.sqrt(2), 1.0))


def test_norm_modes():
    levels_num = [np.zeros(4), np.full(4, 3.0), np.ones(4)]
    levels_ref = [np.zeros(4)] * 3
    assert error_norms(levels_num, levels_ref, 1.0, "sup_over_time").err_linf == 3.0
    assert error_norms(levels_num, levels_ref, 1.0, "final_time").err_linf == 1.0
    with pytest.raises(ConfigurationError):
        NormAccumulator(1.0, "average")
    with pytest.raises(ConfigurationError):
        error_norms(np.zeros(3), np.zeros(4), 1.0)


def test_relative_errors():
    rep = error_norms(np.full(4, 1.5), np.full(4, 1.0), 0.5)
    assert (rep.rel_l1, rep.rel_l2, rep.rel_linf) == pytest.approx((0.5, 0.5, 0.5))


vec = arrays(np.float64, 16, elements=st.floats(-1e3, 1e3))


@settings(max_examples=100, deadline=None)
@given(vec, vec, st.floats(-100, 100))
def test_discrete_norms_are_norms(a, b, k):
    na, nb, nab = discrete_norms(a, 0.1), discrete_norms(b, 0.1), discrete_norms(a + b, 0.1)
    assert np.all(nab <= na + nb + 1e-9 * (1 + na + nb))
    np.testing.assert_allclose(discrete_norms(k * a, 0.1), abs(k) * na, rtol=1e-12, atol=1e-9)


def test_restrict():
    assert np.all(restrict(np.full(512, 2.5), 64) == 2.5)
    edges = np.linspace(0.0, 1.0, 513)
    fine = 3.0 * 0.5 * (edges[:-1] + edges[1:]) - 1.0
    coarse_edges = np.linspace(0.0, 1.0, 257)
    np.testing.assert_allclose(restrict(fine, 256), 3.0 * 0.5 * (coarse_edges[:-1] + coarse_edges[1:]) - 1.0,
                               rtol=0, atol=1e-14)
    with pytest.raises(ConfigurationError):
        restrict(np.zeros(512), 48)


def test_initial_projection_of_each_benchmark_is_finite():
    for name in ["test1_1", "test1_2", "test2_1", "test2_2", "test3"]:
        assert np.all(np.isfinite(project_initial(make_benchmark(name, 16).spec).values))
