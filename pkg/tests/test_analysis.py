import numpy as np
import pytest

from radial_eigen import (
    ExplicitKind,
    Operator,
    Potential,
    PucciParams,
    RadialProblem,
    RadialProfile,
    explicit_solution,
)
from radial_eigen.analysis import (
    SweepKind,
    check_comparison,
    holder_fit,
    nonexistence_probe,
    sweep,
)
from radial_eigen.analysis_types import extrapolate_invlogsq, extrapolate_power
from radial_eigen.core import barrier_height_for_forcing
from radial_eigen.eigensolvers import eigen_shoot_scale
from radial_eigen.errors import (
    FitRejectedError,
    ParameterError,
)
from radial_eigen.ode import DirichletProblem, dirichlet_solve, make_graded_grid

ISO3 = PucciParams(1.0, 1.0, 3, 0.0)


# ---------------------------------------------------------------------------
# extrapolation machinery
# ---------------------------------------------------------------------------


def test_power_extrapolation_recovers_synthetic_limit():
    h = 0.2 * 2.0 ** -np.arange(5)
    y = 3.0 + 1.7 * h ** 1.3
    lim, rate = extrapolate_power(h, y)
    assert lim == pytest.approx(3.0, abs=1e-10)
    assert rate == pytest.approx(1.3, abs=1e-8)


def test_invlogsq_extrapolation_recovers_synthetic_limit():
    h = 2.0 ** -np.arange(2, 10)
    L = np.log(1.0 / h)
    y = 0.25 + 9.87 / (L - 1.2) ** 2
    lim, B = extrapolate_invlogsq(h, y, n_tail=5)
    assert lim == pytest.approx(0.25, abs=1e-8)
    assert B == pytest.approx(-1.2, abs=1e-4)


# ---------------------------------------------------------------------------
# holder fits
# ---------------------------------------------------------------------------


def test_holder_fit_self_test_synthetic():
    for s in (0.3, 0.5, 1.0):
        r = np.geomspace(1e-6, 1e-2, 200)
        prof = RadialProfile(r, 2.0 - 0.7 * r ** s, -np.ones_like(r), 0.0)
        expo, r2 = holder_fit(prof, window=(1e-6, 1e-2))
        assert abs(expo - s) < 1e-3
        assert r2 > 0.999999


def test_holder_fit_rejects_sparse_window():
    r = np.geomspace(1e-6, 1e-2, 5)
    prof = RadialProfile(r, 2.0 - r ** 0.5, -np.ones_like(r), 0.0)
    with pytest.raises(FitRejectedError):
        holder_fit(prof, window=(1e-6, 1e-2))


def test_holder_fit_rejects_non_monotone():
    r = np.geomspace(1e-6, 1e-2, 50)
    u = 2.0 - r ** 0.5
    u[20] = u[19] + 0.1
    prof = RadialProfile(r, u, -np.ones_like(r), 0.0)
    with pytest.raises(FitRejectedError):
        holder_fit(prof, window=(1e-6, 1e-2))


def test_holder_fit_rejects_unbounded_profile():
    p = PucciParams(1.0, 1.0, 3, 1.0)
    r = np.geomspace(1e-7, 0.9, 400)
    u, up, upp = explicit_solution(ExplicitKind.POWER_TAU, p, r)
    prof = RadialProfile(r, u, np.sign(up) * np.abs(up) ** 2, 1.0)
    with pytest.raises(FitRejectedError):
        holder_fit(prof, window=(1e-5, 1e-2))


def test_holder_fit_on_computed_eigenfunction():
    prob = RadialProblem(ISO3, Operator.M_PLUS, gamma=1.5, potential=Potential.singular())
    est = eigen_shoot_scale(prob, tol=1e-10, r_start=1e-9)
    expo, r2 = holder_fit(est.profile, window=(1e-6, 1e-3))
    assert abs(expo - 0.5) <= 0.02


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------


def test_epsilon_sweep_monotone_and_limit():
    # fixed gamma = 1 < 2+alpha: power-model extrapolation toward the
    # singular-ball value
    prob = RadialProblem(ISO3, Operator.M_PLUS, gamma=1.0, potential=Potential.singular())
    ref = eigen_shoot_scale(prob, tol=1e-10).value
    res = sweep(SweepKind.EPSILON_TO_ZERO, prob, 0.1 * 2.0 ** -np.arange(6), tol=1e-10)
    assert res.monotonic and res.model == "power"
    assert np.all(np.diff(res.eigenvalues) <= 1e-12)
    # bounded below by the singular eigenvalue all along the sequence
    assert np.all(res.eigenvalues >= ref - 1e-9 * ref)
    assert res.limit == pytest.approx(ref, rel=1e-3)


def test_delta_sweep_reproduces_singular_value():
    prob = RadialProblem(ISO3, Operator.M_PLUS, gamma=1.0, potential=Potential.singular())
    ref = eigen_shoot_scale(prob, tol=1e-10).value
    res = sweep(SweepKind.DELTA_TO_ZERO, prob, 0.2 * 2.0 ** -np.arange(6), tol=1e-10)
    assert res.monotonic
    assert res.limit == pytest.approx(ref, rel=1e-2)


def test_gamma_sweep_runs_variational():
    p = PucciParams(1.0, 1.0, 4, 0.0)
    prob = RadialProblem(p, Operator.M_PLUS, gamma=1.0, potential=Potential.singular())
    sched = 2.0 - 0.3 * 2.0 ** -np.arange(5)
    res = sweep(SweepKind.GAMMA_TO_BORDERLINE, prob, sched, mesh_size=700)
    assert res.model == "invlogsq"
    # endpoint ordering: all values above the extrapolated limit
    assert np.all(res.eigenvalues >= res.limit - 1e-6)


def test_sweep_schedule_validation():
    prob = RadialProblem(ISO3, Operator.M_PLUS, gamma=1.0, potential=Potential.singular())
    with pytest.raises(ParameterError):
        sweep(SweepKind.EPSILON_TO_ZERO, prob, [0.1, 0.2, 0.3])
    with pytest.raises(ParameterError):
        sweep(SweepKind.GAMMA_TO_BORDERLINE, prob, [1.5, 1.4, 1.9])


def test_nonexistence_probe_decay_and_contrast():
    deltas = 2.0 ** -np.arange(1, 9)
    res = nonexistence_probe(ISO3, 2.5, deltas, tol=1e-9)
    vals = res.eigenvalues
    assert np.all(np.diff(vals) < 0)
    assert vals[-1] < vals[0] / 10.0
    assert res.rate > 0
    with pytest.raises(ParameterError):
        nonexistence_probe(ISO3, 1.9, deltas)


# ---------------------------------------------------------------------------
# comparison checker
# ---------------------------------------------------------------------------


def test_comparison_ordered_dirichlet_pair():
    prob = RadialProblem(ISO3, Operator.M_PLUS, gamma=1.0, potential=Potential.singular())
    grid = make_graded_grid(1e-6, 1.0, max_dr=0.005)
    u = dirichlet_solve(DirichletProblem(prob, -1.0), 1e-10, grid=grid)
    v = dirichlet_solve(DirichletProblem(prob, -2.0), 1e-10, grid=grid)
    rep = check_comparison(u, v, -1.0, -2.0, 0.0, prob)
    assert rep.passed


def test_comparison_swapped_roles_is_precondition_violation():
    prob = RadialProblem(ISO3, Operator.M_PLUS, gamma=1.0, potential=Potential.singular())
    grid = make_graded_grid(1e-6, 1.0, max_dr=0.005)
    u = dirichlet_solve(DirichletProblem(prob, -2.0), 1e-10, grid=grid)
    v = dirichlet_solve(DirichletProblem(prob, -1.0), 1e-10, grid=grid)
    rep = check_comparison(u, v, -2.0, -1.0, 0.0, prob)
    assert rep.precondition_violation
    assert not rep.precondition_ok


def test_comparison_zero_versus_barrier():
    # u = 0 against the explicit supersolution barrier
    p = PucciParams(1.0, 2.0, 5, 0.5)
    g = 1.2
    prob = RadialProblem(p, Operator.M_PLUS, gamma=g, potential=Potential.singular())
    grid = make_graded_grid(1e-5, 1.0 - 1e-9, ratio=1.03)
    L = barrier_height_for_forcing(p, g, 1.0)
    w, wp, wpp = explicit_solution(
        ExplicitKind.BARRIER, p, grid, barrier_height=L, gamma=g, barrier_offset=0.0
    )
    flux = np.sign(wp) * np.abs(wp) ** (1 + p.alpha)
    barrier = RadialProfile(grid, w, flux, p.alpha)
    zero = RadialProfile(grid, np.zeros_like(grid), np.zeros_like(grid), p.alpha)
    rep = check_comparison(zero, barrier, 0.0, -1.0, 0.0, prob)
    assert rep.passed
    assert np.all(barrier.u >= -1e-12)


def test_comparison_scaled_self_trivial_order():
    prob = RadialProblem(ISO3, Operator.M_PLUS, gamma=1.0, potential=Potential.singular())
    grid = make_graded_grid(1e-6, 1.0, max_dr=0.005)
    u = dirichlet_solve(DirichletProblem(prob, -1.0), 1e-10, grid=grid)
    two = RadialProfile(u.grid, 2.0 * u.u, 2.0 * u.w, 0.0)
    rep = check_comparison(u, two, -1.0, -2.0, 0.0, prob)
    assert rep.ordering_ok
