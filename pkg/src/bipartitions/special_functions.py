"""Auxiliary series evaluators: Phi, Psi, Theta, Delta, the Dirichlet-type
sums D_alpha(s), the squared-divisor function, and exact zeta values at
non-positive integers via Bernoulli numbers.

All series are summed term by term with an explicit geometric tail bound, so
every evaluator honours an absolute-error tolerance.  Derivatives are always
obtained from the differentiated series, never from finite differences.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

ZETA2 = math.pi**2 / 6

DEFAULT_TOL = 1e-12


def _check_alpha(alpha: float) -> None:
    if not (isinstance(alpha, (int, float)) and math.isfinite(alpha) and alpha > 0):
        raise ValueError(f"alpha must be a finite positive real, got {alpha!r}")


def _check_tol(tol: float) -> None:
    if not (0 < tol <= 1e-6):
        raise ValueError(f"tolerance must lie in (0, 1e-6], got {tol!r}")


def _sum_series(alpha: float, term, weight_exponent: float, tol: float) -> float:
    """Sum term(r) for r = 1, 2, ... until the geometric tail is below tol.

    ``term(r)`` must be bounded in modulus by r**weight_exponent *
    exp(-alpha*r) / (1 - exp(-alpha)); the loop stops once
    |term(r)| * q / (1 - q) < tol with q an upper bound on the term ratio.
    """
    total = 0.0
    r = 1
    growth = max(0.0, weight_exponent)
    while True:
        t = term(r)
        total += t
        # ratio bound: e^{-alpha} * ((r+1)/r)^growth, valid since the
        # non-exponential part grows at most like r^growth
        q = math.exp(-alpha) * ((r + 1) / r) ** growth
        if q < 1.0 and abs(t) * q / (1.0 - q) < tol:
            return total
        r += 1
        if r > 100_000_000:  # pragma: no cover - safety stop
            raise RuntimeError("series failed to converge within the term cap")


def dirichlet(alpha: float, s: float, tol: float = DEFAULT_TOL) -> float:
    """D_alpha(s) = sum_{r>=1} r^{-s} e^{-alpha r} / (1 - e^{-alpha r})."""
    _check_alpha(alpha)
    _check_tol(tol)

    def term(r: int) -> float:
        e = math.exp(-alpha * r)
        return r ** (-s) * e / (1.0 - e)

    return _sum_series(alpha, term, -s, tol)


def phi(alpha: float, tol: float = DEFAULT_TOL) -> float:
    """Phi(alpha) = sum_{r>=1} r^{-2} e^{-alpha r}/(1 - e^{-alpha r})."""
    return dirichlet(alpha, 2.0, tol)


def psi(alpha: float, tol: float = DEFAULT_TOL) -> float:
    """Psi(alpha) = sum_{r>=1} r^{-1} e^{-alpha r}/(1 - e^{-alpha r})."""
    return dirichlet(alpha, 1.0, tol)


def phi_derivatives(alpha: float, order: int, tol: float = DEFAULT_TOL) -> float:
    """First or second derivative of Phi, from the differentiated series.

    Phi'(alpha)  = -sum_r r^{-1} e^{-alpha r} / (1 - e^{-alpha r})^2
    Phi''(alpha) =  sum_r e^{-alpha r} (1 + e^{-alpha r}) / (1 - e^{-alpha r})^3
    """
    _check_alpha(alpha)
    _check_tol(tol)
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order!r}")

    if order == 1:

        def term(r: int) -> float:
            e = math.exp(-alpha * r)
            return -e / (r * (1.0 - e) ** 2)

        return _sum_series(alpha, term, 0.0, tol)

    def term(r: int) -> float:
        e = math.exp(-alpha * r)
        return e * (1.0 + e) / (1.0 - e) ** 3

    return _sum_series(alpha, term, 0.0, tol)


def sigma2(m: int) -> int:
    """Sum of squared divisors of m."""
    if m < 1:
        raise ValueError(f"sigma2 requires m >= 1, got {m!r}")
    total = 0
    d = 1
    while d * d <= m:
        if m % d == 0:
            total += d * d
            e = m // d
            if e != d:
                total += e * e
        d += 1
    return total


def phi_lambert(alpha: float, tol: float = DEFAULT_TOL) -> float:
    """Phi via its Lambert-series form sum_m sigma2(m)/m^2 e^{-alpha m}.

    Independent cross-check of :func:`phi`; the two must agree to ~tol.
    """
    _check_alpha(alpha)
    _check_tol(tol)
    total = 0.0
    m = 1
    while True:
        t = sigma2(m) / (m * m) * math.exp(-alpha * m)
        total += t
        # sigma2(m)/m^2 <= sigma(m)... bounded by m * d(m) <= m^2, so the
        # summand is at most m^2 e^{-alpha m}; ratio bound with growth 2
        q = math.exp(-alpha) * ((m + 1) / m) ** 2
        if q < 1.0 and m * m * math.exp(-alpha * m) * q / (1.0 - q) < tol:
            return total
        m += 1


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n with the convention B_1 = -1/2."""
    if n < 0:
        raise ValueError("Bernoulli index must be non-negative")
    if n == 0:
        return Fraction(1)
    # B_n = -1/(n+1) * sum_{j<n} C(n+1, j) B_j
    acc = Fraction(0)
    for j in range(n):
        acc += math.comb(n + 1, j) * bernoulli(j)
    return -acc / (n + 1)


def zeta_neg(k: int) -> Fraction:
    """Exact rational zeta(-k) = (-1)^k B_{k+1}/(k+1) for k >= 0.

    With B_1 = -1/2 this gives zeta(0) = -1/2, and the sign is immaterial
    for k >= 1 odd while the even values vanish.
    """
    if k < 0:
        raise ValueError(f"zeta_neg requires k >= 0, got {k!r}")
    value = bernoulli(k + 1) / (k + 1)
    return -value if k % 2 else value


def phi_bar(alpha: float, tol: float = DEFAULT_TOL) -> float:
    """Phi-bar(alpha) = Phi(alpha) + pi^2/6."""
    return phi(alpha, tol) + ZETA2


def theta(alpha: float, barred: bool = False, tol: float = DEFAULT_TOL) -> float:
    """Theta(alpha) = -Phi'(alpha)/sqrt(Phi(alpha)); barred uses Phi-bar.

    The barred variant keeps the same numerator since Phi-bar' = Phi'.
    """
    p = phi(alpha, tol)
    dp = phi_derivatives(alpha, 1, tol)
    denom = math.sqrt(p + ZETA2) if barred else math.sqrt(p)
    return -dp / denom


def delta(alpha: float, barred: bool = False, tol: float = DEFAULT_TOL) -> float:
    """Delta(alpha) = 2 Phi Phi'' - Phi'^2 (barred: Phi-bar in the product)."""
    p = phi(alpha, tol)
    if barred:
        p += ZETA2
    dp = phi_derivatives(alpha, 1, tol)
    ddp = phi_derivatives(alpha, 2, tol)
    return 2.0 * p * ddp - dp * dp
