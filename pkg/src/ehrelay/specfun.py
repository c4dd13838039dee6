# See LICENSE for details.

"""
Special functions and quadrature oracles behind the closed-form outage
expressions.

Only the handful of functions the outage formulas need are provided, for
real positive arguments.  Everything here is a pure function of its
arguments.
"""

from __future__ import annotations

import math

from dataclasses import dataclass
from typing import Callable, NamedTuple

from scipy import integrate


EULER_GAMMA = 0.5772156649015329

_EPS = 1e-15
_MAXIT = 500
_FPMIN = 1e-300

# exp(-x) underflows to zero beyond this point.
_EXP_HORIZON = 745.0


class DomainError(ValueError):
    """
    A special function was asked for a value outside its domain.
    """


@dataclass(frozen=True)
class SeriesControl:
    """
    Truncation of the Maclaurin series used by the EPS-RS closed form.

    The series stops as soon as a term's contribution falls below
    *rel_tol* of the running sum, and gives up after *max_terms* terms.
    """

    max_terms: int = 60
    rel_tol: float = 1e-12

    def __post_init__(self) -> None:
        if self.max_terms < 2:
            raise ValueError(f"max_terms must be at least 2, got {self.max_terms}")
        if not 0.0 < self.rel_tol < 1.0:
            raise ValueError(f"rel_tol must lie in (0, 1), got {self.rel_tol}")


class SeriesValue(NamedTuple):
    value: float
    converged: bool
    terms: int


def exp_integral_En(n: int, x: float) -> float:
    """
    Generalised exponential integral E_n(x) = int_1^inf exp(-x t) / t^n dt.

    A power series is used below x = 1 and a modified Lentz continued
    fraction from x = 1 upwards.
    """
    if n < 0 or x < 0 or (x == 0 and n <= 1) or math.isnan(x):
        raise DomainError(f"E_{n}({x}) is undefined")

    if n == 0:
        return math.exp(-x) / x
    if x == 0:
        return 1.0 / (n - 1)
    if x > _EXP_HORIZON:
        return 0.0

    nm1 = n - 1
    if x >= 1.0:
        b = x + n
        c = 1.0 / _FPMIN
        d = 1.0 / b
        h = d
        for i in range(1, _MAXIT + 1):
            an = -i * (nm1 + i)
            b += 2.0
            d = 1.0 / (an * d + b)
            c = b + an / c
            delta = c * d
            h *= delta
            if abs(delta - 1.0) < _EPS:
                return h * math.exp(-x)
        raise ArithmeticError(f"continued fraction for E_{n}({x}) did not converge")

    ans = 1.0 / nm1 if nm1 else -math.log(x) - EULER_GAMMA
    fact = 1.0
    for i in range(1, _MAXIT + 1):
        fact *= -x / i
        if i != nm1:
            term = -fact / (i - nm1)
        else:
            psi = -EULER_GAMMA + math.fsum(1.0 / k for k in range(1, nm1 + 1))
            term = fact * (-math.log(x) + psi)
        ans += term
        if abs(term) < abs(ans) * _EPS:
            return ans
    raise ArithmeticError(f"series for E_{n}({x}) did not converge")


def exp_integral_E1(x: float) -> float:
    """
    E1(x) = int_x^inf exp(-t) / t dt for x > 0.
    """
    if not x > 0:
        raise DomainError(f"E1 is only defined for x > 0, got {x}")
    return exp_integral_En(1, x)


def _k1_small_deficit(x: float) -> float:
    # 1 - x K1(x) from the ascending series, without the leading 1.
    t = 0.25 * x * x
    log_half = math.log(0.5 * x) + EULER_GAMMA
    coef = 1.0
    harmonic_k = 0.0
    harmonic_k1 = 1.0
    total = 0.0
    for k in range(_MAXIT):
        if k:
            coef *= t / (k * (k + 1))
            harmonic_k += 1.0 / k
            harmonic_k1 += 1.0 / (k + 1)
        term = coef * (log_half - 0.5 * (harmonic_k + harmonic_k1))
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return -0.5 * x * x * total


def _k1_steed(x: float) -> float:
    # Steed's continued fraction (Temme's CF2) for K0, then K1 from the
    # Wronskian-style relation with xmu = 0.
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = delh = d
    q1 = 0.0
    q2 = 1.0
    a1 = 0.25
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, _MAXIT + 1):
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1 = q2
        q2 = qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < _EPS:
            break
    else:
        raise ArithmeticError(f"continued fraction for K1({x}) did not converge")
    h = a1 * h
    k0 = math.sqrt(math.pi / (2.0 * x)) * math.exp(-x) / s
    return k0 * (x + 0.5 - h) / x


def bessel_k1(x: float) -> float:
    """
    First-order modified Bessel function of the second kind, K1(x), x > 0.
    """
    if not x > 0:
        raise DomainError(f"K1 is only defined for x > 0, got {x}")
    if x <= 2.0:
        return (1.0 - _k1_small_deficit(x)) / x
    return _k1_steed(x)


def bessel_k1_deficit(x: float) -> float:
    """
    Return 1 - x K1(x).

    For small *x* this is the interesting part of the OPS-RS outage term and
    it is computed directly rather than by subtracting two numbers close to 1.
    """
    if not x > 0:
        raise DomainError(f"K1 is only defined for x > 0, got {x}")
    if x <= 2.0:
        return _k1_small_deficit(x)
    return 1.0 - x * _k1_steed(x)


def _quad(func: Callable[[float], float], lo: float, hi: float, **kw: object) -> float:
    value, _abserr = integrate.quad(func, lo, hi, limit=400, **kw)
    return float(value)


def quad_tail_product(
    beta: float, sigma_si2: float, alpha_over_sigma_id2: float
) -> float:
    """
    Phi = (1/s) int_beta^inf exp(-x/s - w/x) dx by adaptive quadrature, with
    s = *sigma_si2* and w = *alpha_over_sigma_id2*.

    This is the probability Pr(X > beta, Y > alpha / X) for independent
    exponentials X (mean s) and Y (mean sigma_id2).
    """
    if beta < 0 or sigma_si2 <= 0 or alpha_over_sigma_id2 < 0:
        raise DomainError(
            f"invalid tail arguments beta={beta}, sigma_si2={sigma_si2}, "
            f"alpha/sigma_id2={alpha_over_sigma_id2}"
        )

    s = sigma_si2
    w = alpha_over_sigma_id2
    if w == 0:
        return math.exp(-beta / s)

    def integrand(x: float) -> float:
        if x <= 0:
            return 0.0
        return math.exp(-x / s - w / x)

    hi = beta + s * _EXP_HORIZON
    points = [p for p in (math.sqrt(s * w), s) if beta < p < hi]
    value = _quad(integrand, beta, hi, points=points, epsabs=1e-14, epsrel=1e-12)
    return min(max(value / s, 0.0), 1.0)


def quad_tail_complement(
    beta: float, sigma_si2: float, alpha_over_sigma_id2: float
) -> float:
    """
    1 - Phi, computed as a sum of two nonnegative parts so that values far
    below machine epsilon keep their relative precision.

    The second part is integrated over log(x), where the integrand is smooth
    across the many decades between *beta* and *sigma_si2*.
    """
    if beta < 0 or sigma_si2 <= 0 or alpha_over_sigma_id2 < 0:
        raise DomainError(
            f"invalid tail arguments beta={beta}, sigma_si2={sigma_si2}, "
            f"alpha/sigma_id2={alpha_over_sigma_id2}"
        )

    s = sigma_si2
    w = alpha_over_sigma_id2
    head = -math.expm1(-beta / s)
    if w == 0:
        return head

    def integrand(u: float) -> float:
        x = math.exp(u)
        return math.exp(-x / s) * -math.expm1(-w / x) * x

    lo = math.log(beta) if beta > 0 else math.log(w) - 40.0
    hi = math.log(s * _EXP_HORIZON)
    if lo >= hi:
        return head
    points = [p for p in (math.log(w), math.log(s)) if lo < p < hi]
    tail = _quad(integrand, lo, hi, points=points, epsabs=0.0, epsrel=1e-11)
    return min(head + tail / s, 1.0)


def phi_series(
    beta: float,
    sigma_si2: float,
    sigma_id2: float,
    alpha: float,
    ctl: SeriesControl,
) -> SeriesValue:
    """
    Evaluate Phi by its Maclaurin expansion in alpha / (sigma_id2 x).

    Term u of the series is (1/s) (-alpha/sigma_id2)^u / u! * Phi_u with
    Phi_u = int_beta^inf x^-u exp(-x/s) dx = beta^(1-u) E_u(beta/s).  In the
    finite-sum form of Phi_u the exponential integral enters as
    E1(+beta/s) with coefficient (-1)^(u-1) / ((u-1)! s^(u-1)).

    The series is declared divergent once |term| grows three times in a row;
    callers are expected to fall back to quad_tail_product then.
    """
    if beta < 0 or sigma_si2 <= 0 or sigma_id2 <= 0 or alpha < 0:
        raise DomainError(
            f"invalid series arguments beta={beta}, sigma_si2={sigma_si2}, "
            f"sigma_id2={sigma_id2}, alpha={alpha}"
        )

    z = beta / sigma_si2
    total = math.exp(-z)
    if alpha == 0:
        return SeriesValue(total, True, 1)
    if beta == 0:
        # Every Phi_u with u >= 1 diverges at the lower limit.
        return SeriesValue(math.nan, False, 1)

    ratio = alpha / (sigma_id2 * beta)
    coef = 1.0
    last = abs(total)
    rising = 0
    for u in range(1, ctl.max_terms):
        coef *= ratio / u
        magnitude = z * coef * exp_integral_En(u, z)
        total += -magnitude if u % 2 else magnitude

        if magnitude > last:
            rising += 1
            if rising >= 3:
                return SeriesValue(total, False, u + 1)
        else:
            rising = 0
        last = magnitude

        if magnitude <= ctl.rel_tol * abs(total):
            return SeriesValue(total, True, u + 1)

    return SeriesValue(total, False, ctl.max_terms)
