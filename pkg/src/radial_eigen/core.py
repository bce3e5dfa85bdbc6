"""Domain types and exact radial algebra for Pucci extremal operators.

Everything in this module is closed-form: parameter bookkeeping, the radial
form of the extremal operators, the scalar envelope used to invert the ODE,
and the explicit solutions that serve as oracles elsewhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .errors import DomainError, ParameterError


class Operator(Enum):
    """Pucci extremal operators; ``sign`` selects the envelope orientation."""

    M_PLUS = 1
    M_MINUS = -1

    @property
    def sign(self) -> int:
        return self.value


class Method(Enum):
    SHOOT_SCALE = "shoot"
    BISECT = "bisect"
    INVERSE_POWER = "invpow"
    VARIATIONAL = "variational"


def dimension_like_params(lam: float, big_lam: float, dim: int):
    """Effective dimensions (n_plus, n_minus) for the two extremal operators."""
    if not (0.0 < lam <= big_lam):
        raise ParameterError(
            "ellipticity constants must satisfy 0 < lam <= big_lam, got "
            f"({lam}, {big_lam})"
        )
    if dim < 2:
        raise ParameterError(f"dimension must be >= 2, got {dim}")
    n_plus = (lam / big_lam) * (dim - 1) + 1.0
    n_minus = (big_lam / lam) * (dim - 1) + 1.0
    return n_plus, n_minus


@dataclass(frozen=True)
class PucciParams:
    """Ellipticity pair, dimension and gradient-degeneracy exponent.

    Derived quantities: ``n_tilde_plus``/``n_tilde_minus`` are the effective
    dimensions entering the radial ODEs, ``tau`` the borderline decay
    exponent. Construction enforces ``n_tilde_plus > 2``.
    """

    lambda_minus: float
    lambda_plus: float
    dim: int
    alpha: float = 0.0
    n_tilde_plus: float = field(init=False)
    n_tilde_minus: float = field(init=False)
    tau: float = field(init=False)

    def __post_init__(self):
        n_plus, n_minus = dimension_like_params(
            self.lambda_minus, self.lambda_plus, self.dim
        )
        if self.alpha <= -1.0:
            raise ParameterError(f"alpha must be > -1, got {self.alpha}")
        if n_plus <= 2.0:
            raise ParameterError(
                f"n_tilde_plus = {n_plus} <= 2; the radial theory requires "
                "n_tilde_plus > 2"
            )
        object.__setattr__(self, "n_tilde_plus", n_plus)
        object.__setattr__(self, "n_tilde_minus", n_minus)
        object.__setattr__(
            self,
            "tau",
            (n_plus - 2.0) * (1.0 + self.alpha) / (2.0 + self.alpha),
        )

    @property
    def lam(self) -> float:
        return self.lambda_minus

    @property
    def big_lam(self) -> float:
        return self.lambda_plus


@dataclass(frozen=True)
class Ball:
    radius: float = 1.0

    def __post_init__(self):
        if self.radius <= 0:
            raise ParameterError(f"ball radius must be > 0, got {self.radius}")


@dataclass(frozen=True)
class Annulus:
    inner: float
    outer: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.inner < self.outer):
            raise ParameterError(
                f"annulus requires 0 < inner < outer, got ({self.inner}, {self.outer})"
            )


@dataclass(frozen=True)
class Potential:
    """Radial potential r^-gamma, optionally regularized to (r^2+eps^2)^(-gamma/2)."""

    eps: float = 0.0

    @staticmethod
    def singular() -> "Potential":
        return Potential(0.0)

    @staticmethod
    def regularized(eps: float) -> "Potential":
        if eps <= 0:
            raise ParameterError(f"regularization eps must be > 0, got {eps}")
        return Potential(eps)

    @property
    def is_singular(self) -> bool:
        return self.eps == 0.0

    def __call__(self, r, gamma: float):
        r = np.asarray(r, dtype=float)
        if self.is_singular:
            if np.any(r <= 0):
                raise DomainError("singular potential only defined for r > 0")
            out = r ** (-gamma)
        else:
            out = (r * r + self.eps * self.eps) ** (-gamma / 2.0)
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class RadialProblem:
    """A radial eigen/Dirichlet problem on a ball or annulus."""

    params: PucciParams
    operator: Operator = Operator.M_PLUS
    gamma: float = 1.0
    potential: Potential = field(default_factory=Potential.singular)
    domain: object = field(default_factory=Ball)
    mu: float = 0.0

    def __post_init__(self):
        if self.gamma < 0:
            raise ParameterError(f"gamma must be >= 0, got {self.gamma}")
        if self.mu < 0:
            raise ParameterError(f"mu must be >= 0, got {self.mu}")
        if not isinstance(self.domain, (Ball, Annulus)):
            raise ParameterError(f"domain must be Ball or Annulus, got {self.domain!r}")

    @property
    def outer_radius(self) -> float:
        return self.domain.radius if isinstance(self.domain, Ball) else self.domain.outer

    def with_(self, **kw) -> "RadialProblem":
        cur = dict(
            params=self.params,
            operator=self.operator,
            gamma=self.gamma,
            potential=self.potential,
            domain=self.domain,
            mu=self.mu,
        )
        cur.update(kw)
        return RadialProblem(**cur)


@dataclass
class RadialProfile:
    """Radial samples (grid, u, flux w = |u'|^alpha u') on a graded grid.

    ``u_origin`` carries the extrapolated value at r = 0 when the profile was
    produced by an origin startup (the grid itself never contains r = 0; the
    flux may blow up there).
    """

    grid: np.ndarray
    u: np.ndarray
    w: np.ndarray
    alpha: float = 0.0
    u_origin: Optional[float] = None

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.u = np.asarray(self.u, dtype=float)
        self.w = np.asarray(self.w, dtype=float)
        if not (self.grid.shape == self.u.shape == self.w.shape):
            raise ParameterError("grid, u, w must have identical shapes")
        if self.grid.size and np.any(np.diff(self.grid) <= 0):
            raise ParameterError("profile grid must be strictly increasing")

    @property
    def uprime(self) -> np.ndarray:
        e = 1.0 / (1.0 + self.alpha)
        return np.sign(self.w) * np.abs(self.w) ** e

    def interp_u(self, r):
        return np.interp(r, self.grid, self.u)

    def sup_norm(self) -> float:
        m = float(np.max(np.abs(self.u))) if self.u.size else 0.0
        if self.u_origin is not None:
            m = max(m, abs(self.u_origin))
        return m


@dataclass
class EigenEstimate:
    """Principal eigenvalue estimate with its witness profile and diagnostics."""

    value: float
    method: Method
    residual_norm: float
    iterations: int
    profile: RadialProfile
    problem: RadialProblem
    first_zero: Optional[float] = None


# ---------------------------------------------------------------------------
# radial operator algebra
# ---------------------------------------------------------------------------


def _ellipticity(params):
    """(lam, Lam, dim) from PucciParams or a raw triple.

    The pure operator algebra is defined for any admissible ellipticity pair,
    including ones the eigen theory's n_tilde_plus > 2 gate rejects, so these
    operations also take a plain (lam, Lam, N).
    """
    if isinstance(params, PucciParams):
        return params.lam, params.big_lam, params.dim
    lam, big, dim = params
    dimension_like_params(lam, big, dim)  # validates ordering and dimension
    return float(lam), float(big), int(dim)


def envelope_h(params, op: Operator, x: float) -> float:
    """Scalar envelope: Lam*x^+ - lam*x^- for M+, coefficients swapped for M-."""
    lam, big, _ = _ellipticity(params)
    if op is Operator.M_MINUS:
        lam, big = big, lam
    x = float(x)
    return big * x if x >= 0.0 else lam * x


def envelope_h_inv(params, op: Operator, y: float) -> float:
    """Inverse of ``envelope_h`` (strictly increasing, piecewise linear)."""
    lam, big, _ = _ellipticity(params)
    if op is Operator.M_MINUS:
        lam, big = big, lam
    y = float(y)
    return y / big if y >= 0.0 else y / lam


def envelope_g(params, op: Operator, p: float, q: float) -> float:
    """Two-argument envelope h(p) + h(q); the radial operator decomposition."""
    return envelope_h(params, op, p) + envelope_h(params, op, q)


def pucci_radial_value(op: Operator, params, r: float, uprime: float, usecond: float) -> float:
    """Value of the extremal operator on a radial function with given derivatives."""
    if r <= 0:
        raise DomainError(f"radial operator needs r > 0, got r = {r}")
    _, _, dim = _ellipticity(params)
    return envelope_g(params, op, (dim - 1) * uprime / r, usecond)


def borderline_eigenvalue(params: PucciParams) -> float:
    """Closed-form principal eigenvalue at the critical potential exponent 2+alpha."""
    a = params.alpha
    return params.big_lam / (1.0 + a) * params.tau ** (2.0 + a)


# ---------------------------------------------------------------------------
# explicit reference solutions
# ---------------------------------------------------------------------------


class ExplicitKind(Enum):
    POWER_TAU = "power_tau"
    HARDY_LOG = "hardy_log"
    BARRIER = "barrier"


def explicit_solution(
    kind: ExplicitKind,
    params: PucciParams,
    r,
    *,
    barrier_height: float = 1.0,
    barrier_exponent: Optional[float] = None,
    barrier_offset: float = 0.0,
    gamma: Optional[float] = None,
):
    """Exact (u, u', u'') of a named closed-form radial function at r in (0, 1).

    POWER_TAU is the unbounded borderline eigenfunction r^-tau, HARDY_LOG the
    alpha = 0 critical solution r^(-(n_plus-2)/2) * (-ln r), BARRIER the
    supersolution L*(1 - r^t) + b used by the comparison machinery.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0) or np.any(r >= 1.0):
        raise DomainError("explicit solutions are defined on 0 < r < 1")

    if kind is ExplicitKind.POWER_TAU:
        t = params.tau
        u = r ** (-t)
        up = -t * r ** (-t - 1.0)
        upp = t * (t + 1.0) * r ** (-t - 2.0)
    elif kind is ExplicitKind.HARDY_LOG:
        if params.alpha != 0.0:
            raise ParameterError("the logarithmic solution requires alpha = 0")
        b = (params.n_tilde_plus - 2.0) / 2.0
        ln = np.log(r)
        u = r ** (-b) * (-ln)
        up = r ** (-b - 1.0) * (b * ln - 1.0)
        upp = r ** (-b - 2.0) * (-b * (b + 1.0) * ln + 2.0 * b + 1.0)
    elif kind is ExplicitKind.BARRIER:
        if barrier_exponent is None:
            g = params.gamma if gamma is None else gamma
            barrier_exponent = barrier_admissible_exponent(params, g)
        t = barrier_exponent
        cap = min(
            (params.alpha + 2.0 - (gamma if gamma is not None else 0.0))
            / (params.alpha + 1.0),
            params.n_tilde_plus,
        )
        if not (0.0 < t <= cap + 1e-12):
            raise ParameterError(
                f"barrier exponent {t} outside (0, {cap}] for these parameters"
            )
        L = barrier_height
        u = L * (1.0 - r**t) + barrier_offset
        up = -L * t * r ** (t - 1.0)
        upp = -L * t * (t - 1.0) * r ** (t - 2.0)
    else:  # pragma: no cover - exhaustive enum
        raise ParameterError(f"unknown explicit solution kind {kind!r}")

    if u.ndim:
        return u, up, upp
    return float(u), float(up), float(upp)


def barrier_admissible_exponent(params: PucciParams, gamma: float) -> float:
    """Largest barrier exponent compatible with forcing strength r^-gamma."""
    return min((params.alpha + 2.0 - gamma) / (params.alpha + 1.0), params.n_tilde_plus)


def barrier_height_for_forcing(
    params: PucciParams, gamma: float, f_inf: float, margin: float = 1.1
) -> float:
    """Height L making w(r) = L(1-r^t) a supersolution against forcing -|f|_inf r^-gamma.

    Uses the smallest admissible exponent budget: with t at its cap the barrier
    satisfies |w'|^alpha M+(D^2 w) <= -C (L t)^alpha L r^-gamma.
    """
    t = barrier_admissible_exponent(params, gamma)
    c = t * params.big_lam * (params.n_tilde_plus - 1.0 - abs(t - 1.0))
    if c <= 0:
        raise ParameterError("barrier slope constant is not positive")
    return (margin * f_inf / (c * t**params.alpha)) ** (1.0 / (1.0 + params.alpha))


def radial_equation_residual(
    problem: RadialProblem, r, u, uprime, usecond, forcing=None
) -> np.ndarray:
    """Pointwise residual of |u'|^a F(D^2 u) - beta-free radial equation.

    Residual of |u'|^a F + mu*u^{1+a}*V - f*V evaluated from exact derivatives;
    used by the closed-form verification suite.
    """
    r = np.asarray(r, dtype=float)
    u = np.asarray(u, dtype=float)
    uprime = np.asarray(uprime, dtype=float)
    usecond = np.asarray(usecond, dtype=float)
    a = problem.params.alpha
    vals = np.empty_like(r)
    for i in range(r.size):
        F = pucci_radial_value(
            problem.operator, problem.params, r.flat[i], uprime.flat[i], usecond.flat[i]
        )
        vals.flat[i] = abs(uprime.flat[i]) ** a * F
    V = problem.potential(r, problem.gamma)
    su = np.sign(u) * np.abs(u) ** (1.0 + a)
    res = vals + problem.mu * su * V
    if forcing is not None:
        res = res - np.asarray(forcing, dtype=float) * V
    return res


def default_rng(seed: Optional[int]) -> np.random.Generator:
    return np.random.default_rng(seed)


def log_radii(n: int = 100, lo: float = 1e-6, hi: float = 0.999) -> np.ndarray:
    return np.logspace(math.log10(lo), math.log10(hi), n)
