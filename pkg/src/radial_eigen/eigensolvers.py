"""Eigenvalue pipelines: shoot-and-scale, bracket bisection, inverse power.

All three return an :class:`~radial_eigen.core.EigenEstimate`. They are
independent routes to the same principal eigenvalue and are cross-checked
against each other (and against the variational route) by the test suite.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .core import (
    Annulus,
    Ball,
    EigenEstimate,
    Method,
    RadialProblem,
    RadialProfile,
)
from .errors import BracketError, ConvergenceError, NoZeroError, ParameterError
from .ode import (
    DirichletProblem,
    dirichlet_solve,
    integrate,
    make_graded_grid,
    origin_start,
    profile_defect,
    shoot_first_zero,
)


def _require(cond: bool, msg: str):
    if not cond:
        raise ParameterError(msg)


def eigen_shoot_scale(
    problem: RadialProblem,
    tol: float = 1e-8,
    *,
    r_start: Optional[float] = None,
    r_cap: float = 1e6,
    u0: float = 1.0,
) -> EigenEstimate:
    """Shoot the mu = 1 problem from the origin and rescale its first zero.

    By joint homogeneity of the operator and the potential, the first zero
    r_bar of the unit shot gives the eigenvalue of the ball of radius R as
    (r_bar / R)^(2 + alpha - gamma); the eigenfunction is the shot profile
    mapped onto the ball.
    """
    a = problem.params.alpha
    g = problem.gamma
    _require(isinstance(problem.domain, Ball), "shoot-and-scale works on a ball")
    _require(problem.potential.is_singular, "shoot-and-scale addresses the singular potential")
    _require(0.0 < g < 2.0 + a, f"shoot-and-scale needs 0 < gamma < 2+alpha, got {g}")
    R = problem.outer_radius
    rs, u_s, w_s, exp, _ok = origin_start(problem, u0, r_start=r_start, mu=1.0)
    res = integrate(problem, (rs, u_s, w_s), r_cap, tol, mu=1.0, detect_zero=True)
    if res.first_zero is None:
        raise NoZeroError(
            f"no zero of the mu=1 shot before r = {r_cap}",
            {"u_end": res.end_state[1], "r_end": res.end_state[0]},
        )
    r_bar = res.first_zero
    lam_bar = (r_bar / R) ** (2.0 + a - g)
    scale = R / r_bar
    prof = RadialProfile(
        res.profile.grid * scale,
        res.profile.u.copy(),
        res.profile.w * scale ** (-(1.0 + a)),
        a,
        u_origin=u0,
    )
    # the rescaled profile solves the eigen-equation with mu = lam_bar on B(0, R)
    defect = profile_defect(problem, prof, tol, mu=lam_bar)
    return EigenEstimate(
        value=lam_bar,
        method=Method.SHOOT_SCALE,
        residual_norm=defect,
        iterations=res.steps,
        profile=prof,
        problem=problem,
        first_zero=r_bar,
    )


def _bisect_start(problem: RadialProblem, u0: float, mu: float, tol: float):
    """Initial state for a bisection shot: origin for a regularized ball,
    inner rim with unit flux for an annulus."""
    if isinstance(problem.domain, Annulus):
        return problem.domain.inner, 0.0, 1.0
    rs, u_s, w_s, _exp, _ok = origin_start(problem, u0, mu=mu)
    return rs, u_s, w_s


def eigen_bisect(
    problem: RadialProblem,
    mu_lo: Optional[float] = None,
    mu_hi: Optional[float] = None,
    tol: float = 1e-6,
    *,
    integ_tol: float = 1e-8,
    u0: float = 1.0,
    max_expand: int = 60,
) -> EigenEstimate:
    """Bisect mu until the first zero of the shot lands on the outer radius.

    Applies to the regularized ball (shot from the origin) and to annuli
    (shot from the inner rim with u = 0, w = 1; any positive flux gives the
    same eigenvalue by homogeneity). The first-zero radius decreases in mu,
    so the shots bracket monotonically.
    """
    if isinstance(problem.domain, Ball) and problem.potential.is_singular:
        raise ParameterError(
            "bisection on the singular ball is ill-posed; use shoot-and-scale, "
            "inverse power, or a regularized potential"
        )
    R = problem.outer_radius

    def has_zero(mu: float):
        start = _bisect_start(problem, u0, mu, integ_tol)
        found, zr, u_end, _w_end, steps = shoot_first_zero(
            problem, start, R, integ_tol, mu=mu
        )
        return found, (zr if found else np.nan), u_end, steps

    guess = mu_lo if mu_lo is not None else (mu_hi if mu_hi is not None else 1.0)
    lo = mu_lo
    hi = mu_hi
    n_iter = 0
    if lo is None or hi is None:
        m = guess
        found, _, _, _ = has_zero(m)
        if found:
            hi = m if hi is None else hi
            while lo is None and n_iter < max_expand:
                m /= 2.0
                n_iter += 1
                f2, _, _, _ = has_zero(m)
                if not f2:
                    lo = m
        else:
            lo = m if lo is None else lo
            while hi is None and n_iter < max_expand:
                m *= 2.0
                n_iter += 1
                f2, _, _, _ = has_zero(m)
                if f2:
                    hi = m
    if lo is None or hi is None:
        raise BracketError(
            "could not bracket the eigenvalue",
            {"last_mu": m, "expansions": n_iter},
        )
    f_lo, z_lo, _, _ = has_zero(lo)
    f_hi, z_hi, _, _ = has_zero(hi)
    if f_lo or not f_hi:
        raise BracketError(
            "invalid bracket: want no zero at mu_lo and a zero inside at mu_hi",
            {"mu_lo": lo, "zero_lo": z_lo, "mu_hi": hi, "zero_hi": z_hi},
        )
    while hi - lo > tol * max(abs(hi), 1e-300):
        mid = 0.5 * (lo + hi)
        found, _, _, _ = has_zero(mid)
        if found:
            hi = mid
        else:
            lo = mid
        n_iter += 1
        if n_iter > 400:
            raise ConvergenceError("bisection failed to converge", {"lo": lo, "hi": hi})
    mu_star = 0.5 * (lo + hi)
    start = _bisect_start(problem, u0, lo, integ_tol)
    res = integrate(problem, start, R, integ_tol, mu=lo, detect_zero=False)
    prof = res.profile
    if isinstance(problem.domain, Ball):
        prof.u_origin = u0
    _, z_hi, _, _ = has_zero(hi)
    defect = profile_defect(problem, prof, integ_tol, mu=lo)
    return EigenEstimate(
        value=mu_star,
        method=Method.BISECT,
        residual_norm=defect,
        iterations=n_iter,
        profile=prof,
        problem=problem,
        first_zero=float(z_hi),
    )


def inverse_power(
    problem: RadialProblem,
    tol: float = 1e-8,
    max_iter: int = 80,
    *,
    integ_tol: float = 1e-8,
    r_start: Optional[float] = None,
    grid: Optional[np.ndarray] = None,
) -> EigenEstimate:
    """Nonlinear inverse power iteration through Dirichlet solves.

    v_{n+1} solves the Dirichlet problem with forcing -v_n^{1+alpha} (v_n
    normalized in sup norm); the sup norms converge to lambda^{-1/(1+alpha)}
    by homogeneity. The first iterate is forced by f = -1.
    """
    a = problem.params.alpha
    g = problem.gamma
    _require(isinstance(problem.domain, Ball), "inverse power iteration works on a ball")
    _require(problem.potential.is_singular, "inverse power addresses the singular potential")
    _require(0.0 < g < 2.0 + a, f"inverse power needs 0 < gamma < 2+alpha, got {g}")
    R = problem.outer_radius
    base = problem.with_(mu=0.0)
    if grid is None:
        # the normalized iterate is fed back through a piecewise-linear table;
        # the outer spacing bounds that representation error, which is the
        # accuracy floor of the converged eigenvalue
        rs0 = r_start if r_start is not None else 1e-7 * R
        grid = make_graded_grid(rs0, R, ratio=1.05, max_dr=0.0015 * R)
    history = []
    prof = dirichlet_solve(
        DirichletProblem(base, -1.0), integ_tol, grid=grid
    )
    lam = float(prof.u_origin) ** (-(1.0 + a))
    history.append(lam)
    vhat = None
    for it in range(1, max_iter + 1):
        sup = float(prof.u_origin)
        vhat_u = prof.u / sup
        rf = np.concatenate(([0.0], prof.grid))
        ff = -np.concatenate(([1.0], np.abs(vhat_u) ** (1.0 + a)))
        prof = dirichlet_solve(
            DirichletProblem(base, (rf, ff)), integ_tol, grid=grid
        )
        lam_new = float(prof.u_origin) ** (-(1.0 + a))
        history.append(lam_new)
        if abs(lam_new - lam) < tol * abs(lam_new):
            lam = lam_new
            vhat = prof
            break
        lam = lam_new
    else:
        raise ConvergenceError(
            f"inverse power did not converge in {max_iter} iterations",
            {"history": history},
        )
    sup = float(vhat.u_origin)
    norm_prof = RadialProfile(
        vhat.grid, vhat.u / sup, vhat.w / sup ** (1.0 + a), a, u_origin=1.0
    )
    defect = profile_defect(problem, norm_prof, integ_tol, mu=lam)
    return EigenEstimate(
        value=lam,
        method=Method.INVERSE_POWER,
        residual_norm=defect,
        iterations=len(history),
        profile=norm_prof,
        problem=problem,
        first_zero=None,
    )


def rescale_domain(estimate: EigenEstimate, t: float) -> float:
    """Eigenvalue of the t-dilated domain: value * t^(gamma - 2 - alpha)."""
    if t <= 0:
        raise ParameterError(f"dilation factor must be > 0, got {t}")
    p = estimate.problem
    return estimate.value * t ** (p.gamma - 2.0 - p.params.alpha)
