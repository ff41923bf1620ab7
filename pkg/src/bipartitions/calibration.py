"""Calibration of the Gibbs shape parameters.

Solves the implicit equation Theta(alpha) = n1/sqrt(n2) (barred variant for
the part set with axis parts) by bracketed bisection followed by Newton
refinement, then sets beta from the second-moment equation.  Theta is
strictly decreasing from +infinity to 0, so a bracket always exists and can
be found by geometric expansion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .exact_count import PartSet, Target
from .special_functions import ZETA2, phi, phi_derivatives, theta

MAX_ITER = 200
BISECTION_WIDTH = 1e-2


class ConvergenceError(Exception):
    """Root search did not converge; carries the final bracket."""

    def __init__(self, message: str, bracket: tuple[float, float]):
        super().__init__(f"{message} (bracket: {bracket})")
        self.bracket = bracket


@dataclass(frozen=True)
class ShapeParams:
    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError(f"shape parameters must be positive, got {self}")


@dataclass(frozen=True)
class CalibrationResult:
    params: ShapeParams
    target: Target
    part_set: PartSet
    residuals: tuple[float, float]  # relative defects of the two equations


def _theta_prime(alpha: float, barred: bool) -> float:
    """Derivative of Theta, from the differentiated series.

    Theta = -Phi'/sqrt(P) with P = Phi (+ pi^2/6 if barred), so
    Theta' = -Phi''/sqrt(P) + Phi' * Phi' / (2 P^{3/2}).
    """
    p = phi(alpha)
    if barred:
        p += ZETA2
    dp = phi_derivatives(alpha, 1)
    ddp = phi_derivatives(alpha, 2)
    return -ddp / math.sqrt(p) + dp * dp / (2.0 * p**1.5)


def solve_theta(t: float, barred: bool, rel_tol: float = 1e-12) -> float:
    """Unique alpha > 0 with Theta(alpha) = t (barred variant if asked)."""
    if not (t > 0 and math.isfinite(t)):
        raise ValueError(f"target ratio must be a positive real, got {t!r}")

    def f(a: float) -> float:
        return theta(a, barred) - t

    # geometric expansion from alpha = 1: Theta decreases from +inf to 0
    lo = hi = 1.0
    if f(1.0) > 0.0:
        while f(hi) > 0.0:
            lo = hi
            hi *= 2.0
            if hi > 1e6:
                raise ConvergenceError("bracket expansion failed upward", (lo, hi))
    else:
        while f(lo) <= 0.0:
            hi = lo
            lo /= 2.0
            if lo < 1e-12:
                raise ConvergenceError("bracket expansion failed downward", (lo, hi))

    # bisect to a narrow bracket, then Newton with bisection fallback
    iterations = 0
    while hi - lo > BISECTION_WIDTH:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
        iterations += 1
        if iterations > MAX_ITER:
            raise ConvergenceError("bisection iteration cap exceeded", (lo, hi))

    a = 0.5 * (lo + hi)
    for _ in range(MAX_ITER):
        fa = f(a)
        if abs(fa) <= rel_tol * t:
            return a
        if fa > 0.0:
            lo = max(lo, a)
        else:
            hi = min(hi, a)
        step = fa / _theta_prime(a, barred)
        candidate = a - step
        if not (lo < candidate < hi):
            candidate = 0.5 * (lo + hi)  # Newton overshoot: fall back
        if candidate == a:
            return a
        a = candidate
    raise ConvergenceError("Newton iteration cap exceeded", (lo, hi))


def calibrate(
    target: Target, part_set: PartSet, rel_tol: float = 1e-12
) -> CalibrationResult:
    """Solve the two implicit shape-parameter equations for the target.

    alpha solves Theta(alpha) = n1/sqrt(n2); beta is set from the stabler
    equation beta = sqrt(P(alpha)/n2), and the first equation
    -Phi'(alpha)/beta = n1 is reported as a residual check.
    """
    if target.n1 < 1 or target.n2 < 1:
        raise ValueError(f"calibration requires n1, n2 >= 1, got {target}")
    barred = part_set is PartSet.NONZERO_VECTORS
    t = target.n1 / math.sqrt(target.n2)
    alpha = solve_theta(t, barred, rel_tol)
    p = phi(alpha)
    if barred:
        p += ZETA2
    beta = math.sqrt(p / target.n2)
    r1 = abs(-phi_derivatives(alpha, 1) / beta - target.n1) / target.n1
    r2 = abs(p / beta**2 - target.n2) / target.n2
    return CalibrationResult(
        params=ShapeParams(alpha=alpha, beta=beta),
        target=target,
        part_set=part_set,
        residuals=(r1, r2),
    )


ORDER_CHECK_BAND = (1.0 / 50.0, 50.0)


def order_checks(result: CalibrationResult) -> dict:
    """Scale ratios that should stay bounded along calibrated sequences.

    Reports e^{-alpha}/(beta n1), e^{-alpha}/(beta^2 n2) and beta n2/n1,
    flagging any ratio outside [1/50, 50].
    """
    alpha, beta = result.params.alpha, result.params.beta
    n1, n2 = result.target.n1, result.target.n2
    e = math.exp(-alpha)
    ratios = {
        "exp_over_beta_n1": e / (beta * n1),
        "exp_over_beta2_n2": e / (beta**2 * n2),
        "beta_n2_over_n1": beta * n2 / n1,
    }
    lo, hi = ORDER_CHECK_BAND
    flagged = [name for name, v in ratios.items() if not (lo <= v <= hi)]
    return {"ratios": ratios, "flagged": flagged}
