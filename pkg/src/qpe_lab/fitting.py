"""Nonlinear and linear least-squares fits for the sweep statistics.

The saturation model for the output standard deviation at small error
probability is ``y(p) = k1 + k2 * exp(-k3 * p)``, fitted by a damped
Gauss-Newton (Levenberg-Marquardt) iteration with the analytic Jacobian.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["ExpFit", "LinearFit", "fit_exp_saturation", "fit_line"]

MAX_ITERATIONS = 200
STEP_TOL = 1e-10
DEGENERATE_SPREAD = 1e-12


@dataclass(frozen=True)
class ExpFit:
    """Parameters of y = k1 + k2*exp(-k3*p) plus goodness of fit."""

    k1: float
    k2: float
    k3: float
    r_squared: float
    iterations: int
    converged: bool

    def predict(self, p) -> np.ndarray:
        return self.k1 + self.k2 * np.exp(-self.k3 * np.asarray(p, dtype=float))


def _model(k: np.ndarray, p: np.ndarray) -> np.ndarray:
    return k[0] + k[1] * np.exp(-k[2] * p)


def _jacobian(k: np.ndarray, p: np.ndarray) -> np.ndarray:
    e = np.exp(-k[2] * p)
    return np.column_stack((np.ones_like(p), e, -k[1] * p * e))


def fit_exp_saturation(p, y) -> ExpFit:
    """Levenberg-Marquardt fit of the exponential saturation model.

    Initialization: k1 = max(y), k2 = min(y) - max(y), k3 = 2 / median of the
    positive p values.  Converges when the relative parameter step drops
    below 1e-10, capped at 200 iterations.  Raises ValueError for fewer than
    6 points or an all-equal y series (degenerate fit).
    """
    p = np.asarray(p, dtype=float)
    y = np.asarray(y, dtype=float)
    if p.shape != y.shape or p.ndim != 1:
        raise ValueError("p and y must be 1-d arrays of equal length")
    if p.size < 6:
        raise ValueError(f"need at least 6 points to fit, got {p.size}")
    if float(np.ptp(y)) < DEGENERATE_SPREAD:
        raise ValueError("degenerate series: all y values are equal")

    positive = p[p > 0]
    if positive.size == 0:
        raise ValueError("need at least one positive p value")
    k = np.array([y.max(), y.min() - y.max(), 2.0 / float(np.median(positive))])

    with np.errstate(over="ignore", invalid="ignore"):
        residual = y - _model(k, p)
        sse = float(residual @ residual)
        lam = 1e-3
        converged = False
        iterations = 0
        for iterations in range(1, MAX_ITERATIONS + 1):
            jac = _jacobian(k, p)
            jtj = jac.T @ jac
            grad = jac.T @ residual
            try:
                step = np.linalg.solve(
                    jtj + lam * np.diag(np.diag(jtj)), grad
                )
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            trial = k + step
            trial_res = y - _model(trial, p)
            trial_sse = float(trial_res @ trial_res)
            if np.isfinite(trial_sse) and trial_sse <= sse:
                k, residual, sse = trial, trial_res, trial_sse
                lam = max(lam * 0.1, 1e-14)
                if np.linalg.norm(step) <= STEP_TOL * (np.linalg.norm(k) + 1e-30):
                    converged = True
                    break
            else:
                lam = min(lam * 10.0, 1e14)

    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 - sse / ss_tot if ss_tot > 0 else float("-inf")
    return ExpFit(
        k1=float(k[0]),
        k2=float(k[1]),
        k3=float(k[2]),
        r_squared=r_squared,
        iterations=iterations,
        converged=converged,
    )


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    r_squared: float


def fit_line(x, y) -> LinearFit:
    """Ordinary least squares y = slope*x + intercept."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size != y.size or x.size < 2:
        raise ValueError("need at least two points for a line fit")
    slope, intercept = np.polyfit(x, y, 1)
    pred = slope * x + intercept
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    # a constant series is fitted perfectly by its mean
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 1e-20 else 1.0
    return LinearFit(float(slope), float(intercept), r_squared)
