"""Command-line front end.

Three subcommands: ``eigen`` (one eigenvalue per method), ``sweep``
(parameter sweeps with extrapolated limits), ``verify`` (closed-form and
cross-method checks). Problems are configured by flags or by an INI-style
config file (``--config``); flags override file values. A config value in the
[problem] block may be a comma list, in which case the command runs the
cartesian product of all listed values.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 invariant violation, 4 solver failure.
"""

from __future__ import annotations

import argparse
import configparser
import itertools
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from .analysis import SweepKind, check_comparison, nonexistence_probe, sweep
from .core import (
    Annulus,
    Ball,
    EigenEstimate,
    ExplicitKind,
    Method,
    Operator,
    Potential,
    PucciParams,
    RadialProblem,
    borderline_eigenvalue,
    explicit_solution,
    envelope_h,
    envelope_h_inv,
    radial_equation_residual,
)
from .eigensolvers import eigen_bisect, eigen_shoot_scale, inverse_power
from .errors import (
    InvariantViolationError,
    ParameterError,
    RadialEigenError,
)
from .ode import DirichletProblem, dirichlet_solve, integrate, origin_start, picard_fixed_point
from .variational import variational_eigenvalue

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_CONFIG = 2
EXIT_INVARIANT = 3
EXIT_SOLVER = 4


def _fmt(x) -> str:
    if isinstance(x, float):
        return "%.17g" % x
    return str(x)


_PROBLEM_KEYS = {
    "op": str,
    "lam": float,
    "Lam": float,
    "N": int,
    "alpha": float,
    "gamma": float,
    "potential": str,
    "eps": float,
    "domain": str,
    "delta": float,
    "R": float,
}
_SOLVE_KEYS = {
    "method": str,
    "tol": float,
    "bracket_tol": float,
    "r_start": float,
    "seed": int,
    "out": str,
    "profile_out": str,
}
_SWEEP_KEYS = {
    "kind": str,
    "schedule": str,
    "plot_out": str,
    "tail": int,
}


@dataclass
class RunConfig:
    """Problem/solver/sweep settings; [problem] values may be lists (matrix runs)."""

    problem: Dict[str, list] = field(default_factory=dict)
    solve: Dict[str, object] = field(default_factory=dict)
    sweep: Dict[str, object] = field(default_factory=dict)

    DEFAULTS = {
        "op": "mplus",
        "lam": 1.0,
        "Lam": 1.0,
        "N": 3,
        "alpha": 0.0,
        "gamma": 1.0,
        "potential": "singular",
        "eps": 0.0,
        "domain": "ball",
        "delta": 0.5,
        "R": 1.0,
    }

    @staticmethod
    def from_file(path: str) -> "RunConfig":
        cp = configparser.ConfigParser()
        cp.optionxform = str
        read = cp.read(path)
        if not read:
            raise ParameterError(f"cannot read config file {path}")
        cfg = RunConfig()
        specs = {"problem": _PROBLEM_KEYS, "solve": _SOLVE_KEYS, "sweep": _SWEEP_KEYS}
        for section in cp.sections():
            if section not in specs:
                raise ParameterError(f"unknown config section [{section}]")
            keys = specs[section]
            for key, raw in cp[section].items():
                if key not in keys:
                    raise ParameterError(f"unknown config key '{key}' in [{section}]")
                conv = keys[key]
                if section == "problem":
                    vals = [conv(tok.strip()) for tok in raw.split(",") if tok.strip()]
                    if not vals:
                        raise ParameterError(f"empty value for '{key}'")
                    cfg.problem[key] = vals
                else:
                    getattr(cfg, section)[key] = conv(raw.strip())
        return cfg

    def merge_cli(self, args: argparse.Namespace):
        for key in _PROBLEM_KEYS:
            flag = getattr(args, key if key != "N" else "N", None)
            if flag is not None:
                self.problem[key] = flag if isinstance(flag, list) else [flag]
        for key in _SOLVE_KEYS:
            val = getattr(args, key, None)
            if val is not None:
                self.solve[key] = val
        for key in _SWEEP_KEYS:
            val = getattr(args, key, None)
            if val is not None:
                self.sweep[key] = val

    def problem_matrix(self):
        """Yield (varying_key_values, RadialProblem) over the cartesian product."""
        merged = {k: [v] for k, v in self.DEFAULTS.items()}
        merged.update(self.problem)
        varying = [k for k, v in merged.items() if len(v) > 1]
        keys = list(merged)
        for combo in itertools.product(*(merged[k] for k in keys)):
            d = dict(zip(keys, combo))
            yield {k: d[k] for k in varying}, _build_problem(d)


def _build_problem(d: Dict[str, object]) -> RadialProblem:
    op = {"mplus": Operator.M_PLUS, "mminus": Operator.M_MINUS}.get(str(d["op"]).lower())
    if op is None:
        raise ParameterError(f"operator must be mplus or mminus, got {d['op']}")
    params = PucciParams(float(d["lam"]), float(d["Lam"]), int(d["N"]), float(d["alpha"]))
    pot_name = str(d["potential"]).lower()
    if pot_name == "singular":
        pot = Potential.singular()
    elif pot_name == "regularized":
        if float(d["eps"]) <= 0:
            raise ParameterError("regularized potential requires eps > 0")
        pot = Potential.regularized(float(d["eps"]))
    else:
        raise ParameterError(f"potential must be singular or regularized, got {d['potential']}")
    dom_name = str(d["domain"]).lower()
    if dom_name == "ball":
        dom = Ball(float(d["R"]))
    elif dom_name == "annulus":
        dom = Annulus(float(d["delta"]), float(d["R"]))
    else:
        raise ParameterError(f"domain must be ball or annulus, got {d['domain']}")
    return RadialProblem(params, op, gamma=float(d["gamma"]), potential=pot, domain=dom)


def _write_lines(lines: List[str], path: Optional[str]):
    text = "\n".join(lines) + "\n"
    if path and path != "-":
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# eigen
# ---------------------------------------------------------------------------


def _run_method(problem: RadialProblem, method: str, tol: float, bracket_tol: float,
                r_start: Optional[float]):
    if method == "shoot":
        return eigen_shoot_scale(problem, tol=tol, r_start=r_start)
    if method == "bisect":
        prob = problem
        if problem.potential.is_singular and isinstance(problem.domain, Ball):
            # proxy regularization: bisection is ill-posed on the singular ball
            prob = problem.with_(potential=Potential.regularized(1e-4 * problem.outer_radius))
        return eigen_bisect(prob, tol=bracket_tol, integ_tol=tol)
    if method == "invpow":
        return inverse_power(problem, tol=max(bracket_tol, 1e-10), integ_tol=tol)
    if method == "variational":
        val, prof, info = variational_eigenvalue(problem.params, problem.gamma)
        return EigenEstimate(
            value=val, method=Method.VARIATIONAL, residual_norm=info.residual,
            iterations=info.iterations, profile=prof, problem=problem,
        )
    raise ParameterError(f"unknown method '{method}'")


def cmd_eigen(cfg: RunConfig) -> int:
    tol = float(cfg.solve.get("tol", 1e-8))
    bracket_tol = float(cfg.solve.get("bracket_tol", 1e-6))
    r_start = cfg.solve.get("r_start")
    r_start = float(r_start) if r_start is not None else None
    method = str(cfg.solve.get("method", "shoot")).lower()
    rows = []
    header_keys: List[str] = []
    profile_out = cfg.solve.get("profile_out")
    last_profile = None
    for key_vals, problem in cfg.problem_matrix():
        if not header_keys:
            header_keys = list(key_vals)
        methods = [method]
        if method == "all":
            methods = ["shoot", "bisect", "invpow"]
            a, g = problem.params.alpha, problem.gamma
            if problem.operator is Operator.M_PLUS and 1.0 < g < 2.0 + a:
                methods.append("variational")
        ests = []
        for m in methods:
            est = _run_method(problem, m, tol, bracket_tol, r_start)
            ests.append((m, est))
            last_profile = est.profile
        vals = [e.value for _, e in ests]
        for m, est in ests:
            dev = 0.0
            if len(vals) > 1:
                dev = max(abs(est.value - v) / max(abs(v), 1e-300) for v in vals)
            row = [key_vals[k] for k in header_keys]
            row += [m, est.value,
                    est.first_zero if est.first_zero is not None else float("nan"),
                    est.residual_norm, est.iterations]
            if method == "all":
                row.append(dev)
            rows.append(row)
    header = header_keys + ["method", "eigenvalue", "first_zero", "residual", "iterations"]
    if method == "all":
        header.append("pairwise_dev")
    lines = [",".join(header)] + [",".join(_fmt(x) for x in row) for row in rows]
    _write_lines(lines, cfg.solve.get("out"))
    if profile_out and last_profile is not None:
        prof_lines = [
            "%s %s %s" % (_fmt(float(r)), _fmt(float(u)), _fmt(float(w)))
            for r, u, w in zip(last_profile.grid, last_profile.u, last_profile.w)
        ]
        _write_lines(prof_lines, profile_out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


def _parse_schedule(raw: str) -> List[float]:
    vals = [float(tok) for tok in str(raw).split(",") if tok.strip()]
    if len(vals) < 3:
        raise ParameterError("schedule needs at least 3 comma-separated values")
    return vals


def cmd_sweep(cfg: RunConfig) -> int:
    kind_name = str(cfg.sweep.get("kind", "")).lower()
    kinds = {
        "gamma": SweepKind.GAMMA_TO_BORDERLINE,
        "eps": SweepKind.EPSILON_TO_ZERO,
        "delta": SweepKind.DELTA_TO_ZERO,
    }
    if kind_name not in kinds:
        raise ParameterError("sweep kind must be one of gamma|eps|delta")
    if "schedule" not in cfg.sweep:
        raise ParameterError("sweep requires a schedule")
    schedule = _parse_schedule(cfg.sweep["schedule"])
    tol = float(cfg.solve.get("bracket_tol", 1e-9))
    tail = int(cfg.sweep.get("tail", 5))
    problems = list(cfg.problem_matrix())
    if len(problems) != 1:
        raise ParameterError("sweep runs one problem at a time (no matrix values)")
    _, problem = problems[0]

    a = problem.params.alpha
    if kind_name == "delta" and problem.gamma > 2.0 + a + 1e-12:
        result = nonexistence_probe(
            problem.params, problem.gamma, schedule, tol=tol,
            operator=problem.operator, outer_radius=problem.outer_radius,
        )
    else:
        result = sweep(kinds[kind_name], problem, schedule, tol=tol, n_tail=tail)

    lines = ["param,value,eigenvalue,residual,status"]
    statuses = result.statuses or ["ok"] * result.values.size
    for x, y, st in zip(result.values, result.eigenvalues, statuses):
        resid = abs(y - result.limit) if np.isfinite(y) else float("nan")
        lines.append(
            ",".join([result.parameter, _fmt(float(x)), _fmt(float(y)), _fmt(resid), st])
        )
    lines.append("# extrapolated = " + _fmt(result.limit))
    lines.append("# rate = " + _fmt(result.rate))
    lines.append("# model = " + result.model)
    lines.append("# monotonic = " + ("yes" if result.monotonic else "no"))
    lines.append("# direction = " + result.direction)
    _write_lines(lines, cfg.solve.get("out"))
    plot_out = cfg.sweep.get("plot_out")
    if plot_out:
        plot = ["%s\t%s" % (_fmt(float(x)), _fmt(float(y)))
                for x, y in zip(result.values, result.eigenvalues)]
        _write_lines(plot, plot_out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _verify_checks(cfg: RunConfig):
    tol = float(cfg.solve.get("tol", 1e-8))
    seed = int(cfg.solve.get("seed", 20240801))
    rng = np.random.default_rng(seed)
    checks = []

    # closed-form residual of the borderline power eigenfunction
    for (a, lam, big, N) in [(0.0, 1.0, 1.0, 3), (1.0, 1.0, 1.0, 3), (0.0, 1.0, 2.0, 5)]:
        p = PucciParams(lam, big, N, a)
        prob = RadialProblem(
            p, Operator.M_PLUS, gamma=2.0 + a, potential=Potential.singular(),
            mu=borderline_eigenvalue(p),
        )
        rs = np.logspace(-6, -0.01, 100)
        u, up, upp = explicit_solution(ExplicitKind.POWER_TAU, p, rs)
        res = radial_equation_residual(prob, rs, u, up, upp)
        scale = np.abs(up) ** a * (np.abs(upp) + (N - 1) * np.abs(up) / rs)
        checks.append((
            f"power_tau_residual(a={a},lam={lam},Lam={big},N={N})",
            float(np.max(np.abs(res) / scale)), 1e-10,
        ))

    # logarithmic solution at the critical exponent, alpha = 0
    for (lam, big, N) in [(1.0, 1.0, 3), (1.0, 2.0, 5)]:
        p = PucciParams(lam, big, N, 0.0)
        prob = RadialProblem(
            p, Operator.M_PLUS, gamma=2.0, potential=Potential.singular(),
            mu=big * (p.n_tilde_plus - 2.0) ** 2 / 4.0,
        )
        rs = np.logspace(-6, -0.01, 100)
        u, up, upp = explicit_solution(ExplicitKind.HARDY_LOG, p, rs)
        res = radial_equation_residual(prob, rs, u, up, upp)
        scale = np.abs(upp) + (N - 1) * np.abs(up) / rs
        checks.append((
            f"hardy_log_residual(lam={lam},Lam={big},N={N})",
            float(np.max(np.abs(res) / scale)), 1e-9,
        ))

    # envelope inversion round trip
    p = PucciParams(1.0, 2.0, 4, 0.5)
    worst = 0.0
    for _ in range(200):
        x = float(rng.normal(scale=10.0))
        for op in (Operator.M_PLUS, Operator.M_MINUS):
            y = envelope_h(p, op, x)
            worst = max(worst, abs(envelope_h_inv(p, op, y) - x) / max(abs(x), 1e-30))
    checks.append(("envelope_inverse_roundtrip", worst, 1e-12))

    # Picard fixed point against direct integration, evaluated at shared nodes
    p = PucciParams(1.0, 1.0, 3, 0.5)
    prob = RadialProblem(p, Operator.M_PLUS, gamma=1.5, potential=Potential.singular(), mu=1.0)
    prof, info = picard_fixed_point(prob, tol=min(1e-8, tol))
    r_half = 0.5 * info.r_o
    m = prof.grid <= r_half
    nodes = prof.grid[m]
    rs0, u_s, w_s, _, _ = origin_start(prob, 1.0, mu=1.0, r_start=0.5 * nodes[0])
    ivp = integrate(prob, (rs0, u_s, w_s), r_half, tol, mu=1.0, detect_zero=False, r_nodes=nodes)
    gap = float(np.max(np.abs(prof.u[m] - ivp.profile.u)))
    checks.append(("picard_vs_ivp_sup_gap", gap, 1e-6))

    # comparison principle on an ordered Dirichlet pair
    p = PucciParams(1.0, 2.0, 5, 0.5)
    base = RadialProblem(p, Operator.M_PLUS, gamma=1.2, potential=Potential.singular())
    u_prof = dirichlet_solve(DirichletProblem(base, -1.0), tol)
    v_prof = dirichlet_solve(DirichletProblem(base, -2.0), tol)
    rep = check_comparison(u_prof, v_prof, -1.0, -2.0, 0.0, base)
    checks.append(("comparison_ordered_pair", 0.0 if rep.passed else 1.0, 0.5))

    # two pipelines must agree on the same problem
    p = PucciParams(1.0, 1.0, 3, 0.0)
    prob = RadialProblem(p, Operator.M_PLUS, gamma=1.0, potential=Potential.singular())
    e1 = eigen_shoot_scale(prob, tol=tol)
    e2 = inverse_power(prob, tol=max(tol / 100.0, 1e-10), integ_tol=tol)
    checks.append((
        "shoot_vs_inverse_power_rel_dev",
        abs(e1.value - e2.value) / e1.value, 1e-3,
    ))
    return checks


def cmd_verify(cfg: RunConfig) -> int:
    try:
        checks = _verify_checks(cfg)
    except RadialEigenError as exc:
        sys.stdout.write(f"FAIL verification run aborted: {exc}\n")
        return EXIT_VERIFY_FAIL
    lines = []
    n_fail = 0
    for name, value, thresh in checks:
        ok = value <= thresh
        n_fail += 0 if ok else 1
        lines.append("%s %-55s value=%s threshold=%s" % ("PASS" if ok else "FAIL", name, _fmt(float(value)), _fmt(float(thresh))))
    lines.append("# summary passed=%d failed=%d" % (len(checks) - n_fail, n_fail))
    _write_lines(lines, cfg.solve.get("out"))
    return EXIT_OK if n_fail == 0 else EXIT_VERIFY_FAIL


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _add_problem_flags(sp: argparse.ArgumentParser):
    sp.add_argument("--config", default=None)
    sp.add_argument("--op", choices=["mplus", "mminus"], default=None)
    sp.add_argument("--lam", type=float, default=None)
    sp.add_argument("--Lam", type=float, default=None)
    sp.add_argument("--N", type=int, default=None)
    sp.add_argument("--alpha", type=float, default=None)
    sp.add_argument("--gamma", type=float, default=None)
    sp.add_argument("--potential", choices=["singular", "regularized"], default=None)
    sp.add_argument("--eps", type=float, default=None)
    sp.add_argument("--domain", choices=["ball", "annulus"], default=None)
    sp.add_argument("--delta", type=float, default=None)
    sp.add_argument("--R", type=float, default=None)
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--bracket-tol", dest="bracket_tol", type=float, default=None)
    sp.add_argument("--r-start", dest="r_start", type=float, default=None)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--out", default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="radial-eigen",
        description="Radial principal eigenvalues of degenerate Pucci extremal equations",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("eigen", help="compute the principal eigenvalue")
    _add_problem_flags(sp)
    sp.add_argument("--method", choices=["shoot", "bisect", "invpow", "variational", "all"], default=None)
    sp.add_argument("--profile-out", dest="profile_out", default=None)

    sp = sub.add_parser("sweep", help="run a parameter sweep with extrapolation")
    _add_problem_flags(sp)
    sp.add_argument("--kind", choices=["gamma", "eps", "delta"], default=None)
    sp.add_argument("--schedule", default=None)
    sp.add_argument("--plot-out", dest="plot_out", default=None)
    sp.add_argument("--tail", type=int, default=None)

    sp = sub.add_parser("verify", help="run the closed-form verification bundle")
    _add_problem_flags(sp)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
        cfg.merge_cli(args)
        if args.command == "eigen":
            return cmd_eigen(cfg)
        if args.command == "sweep":
            return cmd_sweep(cfg)
        return cmd_verify(cfg)
    except (ParameterError, configparser.Error) as exc:
        sys.stderr.write(f"configuration error: {exc}\n")
        return EXIT_CONFIG
    except InvariantViolationError as exc:
        sys.stderr.write(f"invariant violation: {exc}\n")
        return EXIT_INVARIANT
    except RadialEigenError as exc:
        sys.stderr.write(f"solver failure: {exc}\n")
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
