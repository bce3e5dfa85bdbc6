"""Sweep result container and limit extrapolation models.

Shared by the sweep drivers and the variational module. Two extrapolation
models are provided: a fitted power law lambda(h) = lambda* + C h^p (rate p is
fitted, never assumed) and an inverse-log-square law
lambda = lambda* + C/(B + ln(1/h))^2 for the borderline sweeps whose
convergence is logarithmic in the cutoff.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List

import numpy as np

from .errors import ParameterError


@dataclass
class SweepResult:
    """Ordered parameter/eigenvalue pairs plus the extrapolated limit."""

    parameter: str
    values: np.ndarray
    eigenvalues: np.ndarray
    limit: float
    rate: float
    model: str = "power"
    monotonic: bool = True
    direction: str = "nonincreasing"
    statuses: List[str] = field(default_factory=list)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        self.eigenvalues = np.asarray(self.eigenvalues, dtype=float)
        d = np.diff(self.values)
        if self.values.size > 1 and not (np.all(d > 0) or np.all(d < 0)):
            raise ParameterError("sweep parameter values must be strictly monotone")
        good = np.isfinite(self.eigenvalues)
        if not np.all(self.eigenvalues[good] > 0):
            raise ParameterError("sweep eigenvalues must be finite and positive")


def extrapolate_power(h: np.ndarray, y: np.ndarray):
    """Fit y = y* + C h^p on the last three points (h decreasing to 0).

    Returns (y*, p). The rate is solved from the two successive differences;
    non-geometric h schedules are handled by a secant iteration on p.
    """
    h = np.asarray(h, dtype=float)
    y = np.asarray(y, dtype=float)
    if h.size < 3:
        raise ParameterError("power extrapolation needs at least three points")
    order = np.argsort(h)[::-1]
    h = h[order][-3:]
    y = y[order][-3:]
    d1 = y[0] - y[1]
    d2 = y[1] - y[2]
    if d1 == 0.0 or d2 == 0.0 or np.sign(d1) != np.sign(d2):
        return float(y[-1]), 0.0
    r1 = h[0] / h[1]
    r2 = h[1] / h[2]
    if abs(np.log(r1) - np.log(r2)) < 1e-9:
        p = float(np.log(d1 / d2) / np.log(r1))
    else:
        # solve d1/d2 = (h0^p - h1^p)/(h1^p - h2^p) for p
        target = d1 / d2

        def f(p):
            return (h[0] ** p - h[1] ** p) / (h[1] ** p - h[2] ** p) - target

        p_lo, p_hi = 1e-4, 16.0
        f_lo, f_hi = f(p_lo), f(p_hi)
        if np.sign(f_lo) == np.sign(f_hi):
            p = float(np.log(d1 / d2) / np.log(r1))
        else:
            for _ in range(200):
                p_mid = 0.5 * (p_lo + p_hi)
                if np.sign(f(p_mid)) == np.sign(f_lo):
                    p_lo = p_mid
                else:
                    p_hi = p_mid
            p = 0.5 * (p_lo + p_hi)
    if p <= 0:
        return float(y[-1]), 0.0
    ratio = (h[1] / h[2]) ** p
    y_star = y[2] - d2 / (ratio - 1.0)
    return float(y_star), float(p)


def extrapolate_invlogsq(h: np.ndarray, y: np.ndarray, n_tail: int = 5):
    """Fit y = y* + C/(B + ln(1/h))^2 by least squares over the tail points.

    B is found by scanning + refinement; for each B the remaining parameters
    are linear. Returns (y*, B).
    """
    h = np.asarray(h, dtype=float)
    y = np.asarray(y, dtype=float)
    order = np.argsort(h)[::-1]
    h = h[order]
    y = y[order]
    n = min(max(n_tail, 3), h.size)
    h = h[-n:]
    y = y[-n:]
    L = np.log(1.0 / h)

    def fit(B):
        x = 1.0 / (B + L) ** 2
        A = np.column_stack([np.ones_like(x), x])
        coef, res, *_ = np.linalg.lstsq(A, y, rcond=None)
        pred = A @ coef
        return float(np.sum((y - pred) ** 2)), coef

    b_lo = -0.9 * float(np.min(L))  # keep B + L positive
    bs = np.linspace(b_lo, 20.0, 160)
    errs = [fit(b)[0] for b in bs]
    i = int(np.argmin(errs))
    lo = bs[max(i - 1, 0)]
    hi = bs[min(i + 1, len(bs) - 1)]
    for _ in range(60):
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if fit(m1)[0] < fit(m2)[0]:
            hi = m2
        else:
            lo = m1
    B = 0.5 * (lo + hi)
    _, coef = fit(B)
    return float(coef[0]), float(B)
