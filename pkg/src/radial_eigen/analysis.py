"""Parameter sweeps with limit extrapolation, regularity-exponent fits,
discrete comparison checks, and the non-existence probe.

Sweeps assert the monotonicity the theory guarantees and abort with
diagnostics when computed data violates it; per-point solver failures are
tolerated and marked, the fit then using the surviving points.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import _kernels as K
from .analysis_types import SweepResult, extrapolate_invlogsq, extrapolate_power
from .core import Annulus, Ball, Operator, Potential, PucciParams, RadialProblem, RadialProfile
from .eigensolvers import eigen_bisect
from .errors import (
    ConvergenceError,
    FitRejectedError,
    InvariantViolationError,
    ParameterError,
    RadialEigenError,
    SolverError,
)
from .ode import forcing_table
from .variational import default_mesh, minimize_rayleigh


class SweepKind(enum.Enum):
    GAMMA_TO_BORDERLINE = "gamma"
    EPSILON_TO_ZERO = "eps"
    DELTA_TO_ZERO = "delta"


_MONO_SLACK = 1e-12


def _variational_point(params: PucciParams, gamma: float, mesh, v0):
    for tol in (3e-6, 1e-5, 3e-5):
        try:
            lam_var, prof, _ = minimize_rayleigh(params, gamma, tol=tol, mesh=mesh, v0=v0)
            return params.big_lam / (1.0 + params.alpha) * lam_var, prof.u
        except ConvergenceError:
            continue
    raise ConvergenceError(f"variational point gamma={gamma} failed at all tolerances")


def sweep(
    kind: SweepKind,
    problem: RadialProblem,
    schedule: Sequence[float],
    tol: float = 1e-9,
    *,
    mesh_size: int = 1400,
    mesh_r_min: float = 1e-14,
    n_tail: int = 5,
) -> SweepResult:
    """Run one eigenvalue per schedule point and extrapolate the limit.

    GAMMA_TO_BORDERLINE takes a gamma schedule increasing to 2+alpha and uses
    the variational pipeline (warm-started along the sweep). EPSILON_TO_ZERO
    bisects on the regularized ball with decreasing eps; DELTA_TO_ZERO bisects
    on annuli with decreasing inner radius. At the borderline exponent the
    convergence is logarithmic in the cutoff, so those limits use the
    inverse-log-square model; elsewhere a fitted power law.
    """
    a = problem.params.alpha
    border = 2.0 + a
    sched = np.asarray(list(schedule), dtype=float)
    vals = np.full(sched.size, np.nan)
    statuses = ["ok"] * sched.size

    if kind is SweepKind.GAMMA_TO_BORDERLINE:
        if np.any(np.diff(sched) <= 0) or sched[-1] >= border:
            raise ParameterError("gamma schedule must increase strictly below 2+alpha")
        if problem.operator is not Operator.M_PLUS:
            raise ParameterError("the gamma sweep runs through the variational route (maximal operator)")
        mesh = default_mesh(mesh_size, mesh_r_min)
        v0 = None
        for i, g in enumerate(sched):
            try:
                vals[i], v0 = _variational_point(problem.params, float(g), mesh, v0)
            except RadialEigenError as exc:
                statuses[i] = f"failed: {exc}"
        hs = border - sched
        model = "invlogsq"
    else:
        if np.any(np.diff(sched) >= 0):
            raise ParameterError("cutoff schedule must decrease strictly toward 0")
        g = problem.gamma
        if g > border + 1e-12:
            raise ParameterError("use nonexistence_probe beyond the borderline exponent")
        for i, c in enumerate(sched):
            c = float(c)
            if kind is SweepKind.EPSILON_TO_ZERO:
                pt = problem.with_(potential=Potential.regularized(c), domain=Ball(problem.outer_radius))
            else:
                pt = problem.with_(
                    potential=Potential.singular(),
                    domain=Annulus(c, problem.outer_radius),
                )
            try:
                vals[i] = eigen_bisect(pt, tol=tol, integ_tol=min(tol, 1e-9)).value
            except RadialEigenError as exc:
                statuses[i] = f"failed: {exc}"
        hs = sched
        model = "invlogsq" if abs(g - border) <= 1e-12 else "power"

    good = np.isfinite(vals)
    if int(np.sum(good)) < 3:
        raise SolverError(
            f"only {int(np.sum(good))} sweep points succeeded; need at least 3",
            {"statuses": statuses},
        )
    if model == "invlogsq":
        limit, rate = extrapolate_invlogsq(hs[good], vals[good], n_tail=n_tail)
    else:
        limit, rate = extrapolate_power(hs[good], vals[good])

    if kind is SweepKind.GAMMA_TO_BORDERLINE:
        direction = "above_limit"
        ok = bool(np.all(vals[good] >= limit - max(_MONO_SLACK, 1e-3 * abs(limit))))
    else:
        direction = "nonincreasing"
        vg = vals[good]
        ok = bool(np.all(np.diff(vg) <= _MONO_SLACK))
    if not ok:
        raise InvariantViolationError(
            f"{kind.value} sweep violated its proven monotonicity ({direction})",
            data={"values": sched.tolist(), "eigenvalues": vals.tolist()},
        )
    return SweepResult(
        parameter=kind.value,
        values=sched,
        eigenvalues=vals,
        limit=limit,
        rate=rate,
        model=model,
        monotonic=ok,
        direction=direction,
        statuses=statuses,
    )


def nonexistence_probe(
    params: PucciParams,
    gamma: float,
    delta_schedule: Sequence[float],
    tol: float = 1e-9,
    *,
    operator: Operator = Operator.M_PLUS,
    outer_radius: float = 1.0,
) -> SweepResult:
    """Annulus eigenvalues beyond the borderline exponent: they must decay to 0.

    Asserts strict decrease along the schedule and reports the fitted power
    rate of the decay (empirical; the theory gives no rate).
    """
    a = params.alpha
    if gamma <= 2.0 + a:
        raise ParameterError(f"non-existence regime requires gamma > 2+alpha, got {gamma}")
    sched = np.asarray(list(delta_schedule), dtype=float)
    if np.any(np.diff(sched) >= 0):
        raise ParameterError("delta schedule must decrease strictly")
    vals = np.empty(sched.size)
    for i, d in enumerate(sched):
        prob = RadialProblem(
            params, operator, gamma=gamma, potential=Potential.singular(),
            domain=Annulus(float(d), outer_radius),
        )
        vals[i] = eigen_bisect(prob, tol=tol, integ_tol=min(tol, 1e-9)).value
    if not bool(np.all(np.diff(vals) < 0)):
        raise InvariantViolationError(
            "annulus eigenvalues failed to decrease strictly in the non-existence regime",
            data={"deltas": sched.tolist(), "eigenvalues": vals.tolist()},
        )
    n_fit = min(4, sched.size)
    slope = np.polyfit(np.log(sched[-n_fit:]), np.log(vals[-n_fit:]), 1)[0]
    return SweepResult(
        parameter="delta",
        values=sched,
        eigenvalues=vals,
        limit=0.0,
        rate=float(slope),
        model="decay",
        monotonic=True,
        direction="decreasing_to_zero",
    )


# ---------------------------------------------------------------------------
# regularity fits
# ---------------------------------------------------------------------------


def _joint_origin_fit(r: np.ndarray, u: np.ndarray):
    """Fit u(r) = u0 - c r^s; linear in (u0, c) for fixed s, golden search in s."""

    def sse(s):
        x = r**s
        A = np.column_stack([np.ones_like(x), -x])
        coef, *_ = np.linalg.lstsq(A, u, rcond=None)
        resid = u - A @ coef
        return float(np.dot(resid, resid)), coef

    lo, hi = 0.02, 3.0
    gr = (math.sqrt(5.0) - 1.0) / 2.0
    m1 = hi - gr * (hi - lo)
    m2 = lo + gr * (hi - lo)
    f1, _ = sse(m1)
    f2, _ = sse(m2)
    for _ in range(90):
        if f1 <= f2:
            hi = m2
            m2, f2 = m1, f1
            m1 = hi - gr * (hi - lo)
            f1, _ = sse(m1)
        else:
            lo = m1
            m1, f1 = m2, f2
            m2 = lo + gr * (hi - lo)
            f2, _ = sse(m2)
    s = 0.5 * (lo + hi)
    _, coef = sse(s)
    return float(coef[0]), float(coef[1]), s


def holder_fit(profile: RadialProfile, window=(1e-5, 1e-2)):
    """Regularity exponent near the origin: slope of log(u(0+) - u) vs log r.

    u(0+) comes from a joint fit of u = u0 - c r^s over the window (taking the
    smallest node value instead would bias the exponent). Rejected when u is
    not monotone in the window or has no finite limit at the origin.
    Returns (exponent, r_squared).
    """
    r_lo, r_hi = window
    m = (profile.grid >= r_lo) & (profile.grid <= r_hi)
    r = profile.grid[m]
    u = profile.u[m]
    if r.size < 10:
        raise FitRejectedError(
            f"only {r.size} profile nodes in window [{r_lo}, {r_hi}]; need >= 10"
        )
    if np.any(np.diff(u) > 0):
        raise FitRejectedError("u is not monotone decreasing in the fit window")
    # u(0+) finite precondition: an eigenfunction with finite origin value
    # varies by an O(1) factor across the window, an unbounded one by orders
    # of magnitude
    if u[-1] <= 0 or u[0] / u[-1] > 10.0:
        raise FitRejectedError(
            f"u grows by a factor {u[0] / max(u[-1], 1e-300):.1f} across the window; "
            "u(0+) is not finite"
        )
    u0, c, s_joint = _joint_origin_fit(r, u)
    diff = u0 - u
    if np.any(diff <= 0):
        raise FitRejectedError("fitted origin value does not dominate the window data")
    x = np.log(r)
    y = np.log(diff)
    A = np.column_stack([x, np.ones_like(x)])
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    pred = A @ coef
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    expo = float(coef[0])
    if expo <= 0.01:
        raise FitRejectedError(
            f"fitted exponent {expo:.3f} is not positive; u(0+) is not finite"
        )
    return expo, r2


# ---------------------------------------------------------------------------
# comparison checker
# ---------------------------------------------------------------------------


@dataclass
class ComparisonReport:
    precondition_ok: bool
    sub_ok: bool
    super_ok: bool
    ordering_ok: bool
    max_ordering_violation: float
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.precondition_ok and self.sub_ok and self.super_ok and self.ordering_ok

    @property
    def precondition_violation(self) -> bool:
        return not (self.precondition_ok and self.sub_ok and self.super_ok)


def _fd_wprime(grid: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Three-point derivative on a nonuniform grid (interior nodes)."""
    hl = grid[1:-1] - grid[:-2]
    hr = grid[2:] - grid[1:-1]
    return (
        -hr / (hl * (hl + hr)) * w[:-2]
        + (hr - hl) / (hl * hr) * w[1:-1]
        + hl / (hr * (hl + hr)) * w[2:]
    )


def _residual_sign_ok(
    problem: RadialProblem,
    profile: RadialProfile,
    forcing,
    beta: float,
    want: str,
    rel_slack: float,
    r_min_check: float,
):
    """Check the discrete differential inequality on the profile grid.

    want='sub' verifies |u'|^a F - beta |u|^a u V >= f V; 'super' the reverse.
    """
    g, u, w = profile.grid, profile.u, profile.w
    a = problem.params.alpha
    p = problem.params
    lam, big = p.lam, p.big_lam
    op = problem.operator.sign
    rf, ff = forcing_table(forcing, g[-1])
    wp = _fd_wprime(g, w)
    worst = 0.0
    n_bad = 0
    for i in range(1, g.size - 1):
        r = g[i]
        if r < r_min_check:
            continue
        V = float(problem.potential(r, problem.gamma))
        lhs = K.env_h(op, lam, big, wp[i - 1] / (1.0 + a)) + K.env_h(
            op, lam, big, (p.dim - 1.0) * w[i] / r
        )
        su = math.copysign(abs(u[i]) ** (1.0 + a), u[i]) if u[i] != 0.0 else 0.0
        fval = float(np.interp(r, rf, ff)) if rf.size else 0.0
        resid = lhs - beta * su * V - fval * V
        scale = abs(lhs) + abs(beta * su * V) + abs(fval * V) + 1e-30
        t = resid / scale
        if want == "sub":
            bad = t < -rel_slack
            mag = max(0.0, -t)
        else:
            bad = t > rel_slack
            mag = max(0.0, t)
        if bad:
            n_bad += 1
            worst = max(worst, mag)
    return n_bad == 0, worst, n_bad


def check_comparison(
    u: RadialProfile,
    v: RadialProfile,
    f,
    g,
    beta: float,
    problem: RadialProblem,
    tol: float = 1e-8,
    *,
    rel_slack: float = 0.05,
    r_min_check: Optional[float] = None,
) -> ComparisonReport:
    """Verify a sub/supersolution pair and the ordering u <= v it implies.

    Preconditions checked first: forcing ordering f >= g with strict
    inequality somewhere, then the discrete residual inequalities for each
    profile. A violated precondition is reported as such, distinct from a
    comparison failure.
    """
    if beta < 0:
        raise ParameterError("beta must be >= 0")
    R = max(u.grid[-1], v.grid[-1])
    rf_f, ff_f = forcing_table(f, R)
    rf_g, ff_g = forcing_table(g, R)
    probe = np.geomspace(max(u.grid[0], v.grid[0], 1e-12), R, 200)
    fv = np.interp(probe, rf_f, ff_f) if rf_f.size else np.zeros_like(probe)
    gv = np.interp(probe, rf_g, ff_g) if rf_g.size else np.zeros_like(probe)
    notes = []
    pre_ok = bool(np.all(fv >= gv - 1e-14)) and bool(np.any(fv > gv + 1e-14))
    if not pre_ok:
        notes.append("forcing ordering f >= g (strict somewhere) fails")
    if r_min_check is None:
        r_min_check = 1e-3 * R
    sub_ok, sub_mag, sub_bad = _residual_sign_ok(
        problem, u, f, beta, "sub", rel_slack, r_min_check
    )
    if not sub_ok:
        notes.append(f"subsolution residual inequality fails at {sub_bad} nodes (worst {sub_mag:.2e})")
    super_ok, sup_mag, sup_bad = _residual_sign_ok(
        problem, v, g, beta, "super", rel_slack, r_min_check
    )
    if not super_ok:
        notes.append(f"supersolution residual inequality fails at {sup_bad} nodes (worst {sup_mag:.2e})")

    vb = v.u[-1] if v.grid[-1] >= u.grid[-1] else float(np.interp(u.grid[-1], v.grid, v.u))
    if u.u[-1] > vb + tol:
        notes.append("boundary ordering u(R) <= v(R) fails")
        pre_ok = False
    v_on_u = np.interp(u.grid, v.grid, v.u)
    viol = float(np.max(u.u - v_on_u))
    ordering_ok = viol <= tol
    return ComparisonReport(
        precondition_ok=pre_ok,
        sub_ok=sub_ok,
        super_ok=super_ok,
        ordering_ok=ordering_ok,
        max_ordering_violation=max(viol, 0.0),
        notes=notes,
    )
