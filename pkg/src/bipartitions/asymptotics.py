"""Log partition function, its expansion in the small parameter, Gibbs
moments, the main asymptotic counting formulas, and the exponential rate
functions.

Everything is evaluated in log space: the counts grow like exp(c*sqrt(n2))
and overflow any fixed-precision float almost immediately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .calibration import CalibrationResult, ShapeParams, calibrate, solve_theta
from .exact_count import PartSet, Target
from .special_functions import (
    DEFAULT_TOL,
    ZETA2,
    dirichlet,
    phi,
    phi_derivatives,
    psi,
    zeta_neg,
)

MAX_EXPANSION_ORDER = 8


def _check_params(params: ShapeParams) -> None:
    if not (params.alpha > 0 and params.beta > 0):
        raise ValueError(f"parameters must be positive, got {params}")


def _sum_r(alpha: float, beta: float, term, tol: float) -> float:
    """Sum term(r) over r >= 1 with a geometric tail bound in e^{-(a+b)r}."""
    q = math.exp(-(alpha + beta))
    total = 0.0
    r = 1
    while True:
        t = term(r)
        total += t
        if abs(t) * q / (1.0 - q) < tol:
            return total
        r += 1
        if r > 100_000_000:  # pragma: no cover
            raise RuntimeError("r-series failed to converge")


def log_z_direct(
    params: ShapeParams, part_set: PartSet, tol: float = DEFAULT_TOL
) -> float:
    """log Z as the collapsed single r-sum over both geometric factors.

    For the nonzero part set, the two axis families contribute Psi(alpha)
    and Psi(beta) on top of the interior sum.
    """
    _check_params(params)
    a, b = params.alpha, params.beta

    def term(r: int) -> float:
        ea = math.exp(-a * r)
        eb = math.exp(-b * r)
        return (ea / (1.0 - ea)) * (eb / (1.0 - eb)) / r

    value = _sum_r(a, b, term, tol)
    if part_set is PartSet.NONZERO_VECTORS:
        value += psi(a, tol) + psi(b, tol)
    return value


@dataclass(frozen=True)
class LogZExpansion:
    """Truncated residue expansion of log Z for the strict part set.

    value = leading + sum(terms) with leading = D_alpha(2)/beta and
    terms[k] = (-1)^k zeta(-k) D_alpha(1-k) beta^k / k!.
    """

    alpha: float
    beta: float
    order: int
    leading: float
    terms: tuple[float, ...]
    value: float


def log_z_expansion(
    params: ShapeParams, part_set: PartSet, m: int, tol: float = DEFAULT_TOL
) -> LogZExpansion:
    """Residue expansion of log Z to order m in beta (strict part set only)."""
    _check_params(params)
    if not (0 <= m <= MAX_EXPANSION_ORDER):
        raise ValueError(f"expansion order must lie in [0, {MAX_EXPANSION_ORDER}]")
    if part_set is not PartSet.STRICT_POSITIVE:
        raise ValueError(
            "the residue expansion applies to the strict part set; the nonzero "
            "variant is only exposed through log_z_nonzero_remark"
        )
    a, b = params.alpha, params.beta
    leading = dirichlet(a, 2.0, tol) / b
    terms = []
    factorial = 1
    for k in range(m + 1):
        if k > 0:
            factorial *= k
        zk = zeta_neg(k)
        if zk == 0:
            terms.append(0.0)
            continue
        sign = -1.0 if k % 2 else 1.0
        terms.append(sign * float(zk) * dirichlet(a, 1.0 - k, tol) * b**k / factorial)
    value = leading + math.fsum(terms)
    return LogZExpansion(
        alpha=a, beta=b, order=m, leading=leading, terms=tuple(terms), value=value
    )


def log_z_nonzero_remark(params: ShapeParams, tol: float = DEFAULT_TOL) -> float:
    """Informal small-beta expansion of log Z for the nonzero part set.

    (Phi(alpha) + zeta(2))/beta + log(beta)/2 + Psi(alpha)/2 - log(2 pi)/2
    + (D_alpha(0)/12 - 1/24) beta, truncated after the beta^1 term.
    Diagnostic only.
    """
    _check_params(params)
    a, b = params.alpha, params.beta
    return (
        (phi(a, tol) + ZETA2) / b
        + 0.5 * math.log(b)
        + 0.5 * psi(a, tol)
        - 0.5 * math.log(2.0 * math.pi)
        + (dirichlet(a, 0.0, tol) / 12.0 - 1.0 / 24.0) * b
    )


def gibbs_mean(
    params: ShapeParams, part_set: PartSet, tol: float = DEFAULT_TOL
) -> tuple[float, float]:
    """Mean of N under the Gibbs measure: minus the gradient of log Z."""
    _check_params(params)
    a, b = params.alpha, params.beta

    def term1(r: int) -> float:
        ea = math.exp(-a * r)
        eb = math.exp(-b * r)
        return (ea / (1.0 - ea) ** 2) * (eb / (1.0 - eb))

    def term2(r: int) -> float:
        ea = math.exp(-a * r)
        eb = math.exp(-b * r)
        return (ea / (1.0 - ea)) * (eb / (1.0 - eb) ** 2)

    m1 = _sum_r(a, b, term1, tol)
    m2 = _sum_r(a, b, term2, tol)
    if part_set is PartSet.NONZERO_VECTORS:
        # -Psi'(x) = sum_r e^{-xr}/(1-e^{-xr})^2
        m1 += _sum_r(a, 0.0, lambda r: math.exp(-a * r) / (1 - math.exp(-a * r)) ** 2, tol)
        m2 += _sum_r(b, 0.0, lambda r: math.exp(-b * r) / (1 - math.exp(-b * r)) ** 2, tol)
    return (m1, m2)


def gibbs_covariance(
    params: ShapeParams, part_set: PartSet, tol: float = DEFAULT_TOL
) -> tuple[tuple[float, float], tuple[float, float]]:
    """Covariance of N: the Hessian of log Z, from second derivative series."""
    _check_params(params)
    a, b = params.alpha, params.beta

    def taa(r: int) -> float:
        ea = math.exp(-a * r)
        eb = math.exp(-b * r)
        return r * ea * (1.0 + ea) / (1.0 - ea) ** 3 * (eb / (1.0 - eb))

    def tbb(r: int) -> float:
        ea = math.exp(-a * r)
        eb = math.exp(-b * r)
        return r * eb * (1.0 + eb) / (1.0 - eb) ** 3 * (ea / (1.0 - ea))

    def tab(r: int) -> float:
        ea = math.exp(-a * r)
        eb = math.exp(-b * r)
        return r * (ea / (1.0 - ea) ** 2) * (eb / (1.0 - eb) ** 2)

    # second-derivative terms carry an extra factor r: tail growth exponent 1
    caa = _sum_r_weighted(a, b, taa, tol)
    cbb = _sum_r_weighted(a, b, tbb, tol)
    cab = _sum_r_weighted(a, b, tab, tol)
    if part_set is PartSet.NONZERO_VECTORS:
        # Psi''(x) = sum_r r e^{-xr}(1+e^{-xr})/(1-e^{-xr})^3
        caa += _sum_r_weighted(
            a, 0.0,
            lambda r: r * math.exp(-a * r) * (1 + math.exp(-a * r)) / (1 - math.exp(-a * r)) ** 3,
            tol,
        )
        cbb += _sum_r_weighted(
            b, 0.0,
            lambda r: r * math.exp(-b * r) * (1 + math.exp(-b * r)) / (1 - math.exp(-b * r)) ** 3,
            tol,
        )
    return ((caa, cab), (cab, cbb))


def _sum_r_weighted(alpha: float, beta: float, term, tol: float) -> float:
    """Like _sum_r but with a term ratio bound e^{-(a+b)} * (r+1)/r."""
    total = 0.0
    r = 1
    while True:
        t = term(r)
        total += t
        q = math.exp(-(alpha + beta)) * ((r + 1) / r)
        if q < 1.0 and abs(t) * q / (1.0 - q) < tol:
            return total
        r += 1
        if r > 100_000_000:  # pragma: no cover
            raise RuntimeError("r-series failed to converge")


@dataclass(frozen=True)
class AsymptoticEstimate:
    """Main-theorem prediction, log_value = exponent + log_prefactor."""

    log_value: float
    exponent: float
    log_prefactor: float
    part_set: PartSet
    calibration: CalibrationResult


def theorem_estimate(target: Target, part_set: PartSet) -> AsymptoticEstimate:
    """Main asymptotic formula for log p_X(n1, n2), after calibration."""
    cal = calibrate(target, part_set)
    alpha = cal.params.alpha
    t = target.n1 / math.sqrt(target.n2)
    p = phi(alpha)
    ps = psi(alpha)
    from .special_functions import delta as delta_fn

    if part_set is PartSet.STRICT_POSITIVE:
        exponent = (alpha * t + 2.0 * math.sqrt(p)) * math.sqrt(target.n2)
        log_prefactor = (
            -math.log(2.0 * math.pi)
            + math.log(p / target.n2)
            - 0.5 * ps
            - 0.5 * math.log(delta_fn(alpha, barred=False))
        )
    else:
        pb = p + ZETA2
        exponent = (alpha * t + 2.0 * math.sqrt(pb)) * math.sqrt(target.n2)
        log_prefactor = (
            -1.5 * math.log(2.0 * math.pi)
            + 1.25 * math.log(pb / target.n2)
            + 0.5 * ps
            - 0.5 * math.log(delta_fn(alpha, barred=True))
        )
    return AsymptoticEstimate(
        log_value=exponent + log_prefactor,
        exponent=exponent,
        log_prefactor=log_prefactor,
        part_set=part_set,
        calibration=cal,
    )


def rate_function(t: float, part_set: PartSet) -> float:
    """Exponential rate of log p_X(floor(t sqrt(n)), n) / sqrt(n)."""
    if not (t > 0):
        raise ValueError(f"rate function requires t > 0, got {t!r}")
    barred = part_set is PartSet.NONZERO_VECTORS
    alpha = solve_theta(t, barred)
    p = phi(alpha)
    if barred:
        p += ZETA2
    return alpha * t + 2.0 * math.sqrt(p)


def rate_table(t_grid: list[float]) -> list[tuple[float, float, float]]:
    """Rows (t, h(t), h_bar(t)) for plotting the two rate functions."""
    return [
        (
            t,
            rate_function(t, PartSet.STRICT_POSITIVE),
            rate_function(t, PartSet.NONZERO_VECTORS),
        )
        for t in t_grid
    ]
