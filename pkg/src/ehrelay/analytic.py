# See LICENSE for details.

"""
Closed-form, quadrature and asymptotic outage probabilities of the
memoryless schemes, the diversity-order fit and the moments of the
correction variable used by the diversity argument.

Outage of a scheme is the product over relays of the per-relay outage, so
every route below computes a per-relay quantity and multiplies.  The EHB
schemes have no closed form; `outage` returns None for them.
"""

from __future__ import annotations

import enum
import math

from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np

from scipy import integrate

from .model import (
    SystemParams,
    db_to_linear,
    derive_thresholds,
    snr_threshold,
)
from .schemes import Scheme, SchemeKind
from .specfun import (
    EULER_GAMMA,
    SeriesControl,
    bessel_k1_deficit,
    exp_integral_E1,
    exp_integral_En,
    phi_series,
    quad_tail_complement,
)


# Seven points, 10 dB apart.  The exact outage carries a ln(gamma) factor
# per relay, so the finite-window slope only settles within 0.15 of N this
# far out.
DIVERSITY_WINDOW_DB: tuple[float, ...] = tuple(float(db) for db in range(100, 161, 10))


class Method(enum.Enum):
    SERIES = "series"
    QUADRATURE = "quadrature"
    BESSEL = "bessel_closed_form"
    ASYMPTOTIC = "asymptotic"


@dataclass(frozen=True)
class OutageValue:
    p_out: float
    method: Method
    converged: bool = True
    terms: int | None = None

    def __post_init__(self) -> None:
        if self.converged and not 0.0 <= self.p_out <= 1.0:
            raise ValueError(f"outage probability {self.p_out} is not in [0, 1]")


@dataclass(frozen=True)
class AppendixMoments:
    e_z: float
    e_z2: float

    @property
    def var_z(self) -> float:
        return self.e_z2 - self.e_z**2


class ConvergencePoint(NamedTuple):
    gamma_db: float
    rate: float
    eta: float
    converged: bool
    terms: int


def _per_relay_product(
    params: SystemParams, per_relay: Callable[[float, float], float]
) -> float:
    """
    Multiply *per_relay(sigma_si2, sigma_id2)* over the relays, evaluating
    each distinct pair of channel means once.
    """
    seen: dict[tuple[float, float], float] = {}
    values = []
    for pair in zip(params.sigma_si2, params.sigma_id2):
        if pair not in seen:
            seen[pair] = per_relay(*pair)
        values.append(seen[pair])
    return math.prod(values)


def _clip(p: float) -> float:
    return min(max(p, 0.0), 1.0)


def outage_tps_quadrature(params: SystemParams, rho: float) -> OutageValue:
    """
    Outage with every relay splitting at the fixed ratio *rho*.

    A relay carries the rate when (1 - rho) gamma g_si and rho gamma eta
    g_si g_id both reach 2^(2R) - 1, i.e. g_si >= beta_rho and
    g_si g_id >= alpha_rho.
    """
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"rho must lie in [0, 1], got {rho}")
    theta = snr_threshold(params.rate) / params.gamma
    if theta == 0:
        return OutageValue(0.0, Method.QUADRATURE)
    if rho in (0.0, 1.0):
        return OutageValue(1.0, Method.QUADRATURE)

    beta = theta / (1.0 - rho)
    alpha = theta / (rho * params.eta)
    p_out = _per_relay_product(
        params, lambda s, t: quad_tail_complement(beta, s, alpha / t)
    )
    return OutageValue(_clip(p_out), Method.QUADRATURE)


def outage_eps_quadrature(params: SystemParams) -> OutageValue:
    """
    EPS-RS outage by adaptive quadrature of each relay's success probability.
    """
    thresholds = derive_thresholds(params)
    if thresholds.beta == 0:
        return OutageValue(0.0, Method.QUADRATURE)
    p_out = _per_relay_product(
        params,
        lambda s, t: quad_tail_complement(thresholds.beta, s, thresholds.alpha / t),
    )
    return OutageValue(_clip(p_out), Method.QUADRATURE)


def outage_eps_series(
    params: SystemParams, ctl: SeriesControl = SeriesControl()
) -> OutageValue:
    """
    EPS-RS outage from the Maclaurin series of each relay's success
    probability.

    The result carries converged=False, and possibly a meaningless value,
    as soon as one relay's series fails to converge.
    """
    thresholds = derive_thresholds(params)
    converged = True
    terms = 0
    factors = []
    seen: dict[tuple[float, float], float] = {}
    for pair in zip(params.sigma_si2, params.sigma_id2):
        if pair not in seen:
            s, t = pair
            phi = phi_series(thresholds.beta, s, t, thresholds.alpha, ctl)
            converged = converged and phi.converged
            terms = max(terms, phi.terms)
            seen[pair] = 1.0 - phi.value
        factors.append(seen[pair])

    p_out = math.prod(factors)
    if converged:
        p_out = _clip(p_out)
    return OutageValue(p_out, Method.SERIES, converged=converged, terms=terms)


def outage_eps(
    params: SystemParams, ctl: SeriesControl = SeriesControl()
) -> OutageValue:
    """
    EPS-RS outage: the series when it converges, quadrature otherwise.
    """
    value = outage_eps_series(params, ctl)
    if value.converged:
        return value
    return outage_eps_quadrature(params)


def outage_ops_closed(params: SystemParams) -> OutageValue:
    """
    OPS-RS outage,

        prod_i [1 - x_i K1(x_i) exp(-delta eta / sigma_si2_i)],
        x_i = 2 sqrt(delta / (sigma_si2_i sigma_id2_i)).

    Each factor is evaluated as (1 - e^-c) + e^-c (1 - x K1(x)) so that
    outage levels far below machine epsilon keep their relative precision.
    """
    delta = derive_thresholds(params).delta
    if delta == 0:
        return OutageValue(0.0, Method.BESSEL)
    eta = params.eta

    def per_relay(s: float, t: float) -> float:
        c = delta * eta / s
        x = 2.0 * math.sqrt(delta / (s * t))
        return -math.expm1(-c) + math.exp(-c) * bessel_k1_deficit(x)

    return OutageValue(_clip(_per_relay_product(params, per_relay)), Method.BESSEL)


def outage_ops_quadrature(params: SystemParams) -> OutageValue:
    """
    OPS-RS outage by averaging Pr(g_si >= delta (eta + 1/g_id)) over g_id
    numerically.  An independent check on the Bessel closed form.
    """
    delta = derive_thresholds(params).delta
    if delta == 0:
        return OutageValue(0.0, Method.QUADRATURE)
    eta = params.eta

    def per_relay(s: float, t: float) -> float:
        def integrand(u: float) -> float:
            # Over log(g_id), so that the small-g_id cut-off stays resolved.
            y = math.exp(u)
            return math.exp(-y / t - delta * (eta + 1.0 / y) / s) * y / t

        lo = math.log(delta / s) - 40.0
        hi = math.log(t * 745.0)
        peak = 0.5 * math.log(delta * t / s)
        points = [p for p in (peak, math.log(t)) if lo < p < hi]
        value, _abserr = integrate.quad(
            integrand, lo, hi, points=points, limit=400, epsabs=1e-15, epsrel=1e-12
        )
        return 1.0 - value

    return OutageValue(_clip(_per_relay_product(params, per_relay)), Method.QUADRATURE)


def _log_correction(k: float) -> float:
    # k + e^-k - 1 - k (E1(k) + ln k + gamma_E), summed directly below 1
    # where the closed form cancels.
    if k < 1.0:
        total = 0.0
        power = -k
        fact = 1.0
        for n in range(2, 60):
            power *= -k
            fact *= n
            term = power / (fact * (n - 1))
            total -= term
            if abs(term) < 1e-17 * abs(total):
                break
        return total
    return (
        k
        + math.exp(-k)
        - 1.0
        - k * (exp_integral_E1(k) + math.log(k) + EULER_GAMMA)
    )


def outage_asymptotic(
    kind: SchemeKind | Scheme,
    params: SystemParams,
    log_corrected: bool = False,
) -> OutageValue:
    """
    High-SNR outage of EPS-RS or OPS-RS.

    The plain form keeps the leading power law only: prod_i c_i / gamma with
    c_i = 2 (2^(2R) - 1) / sigma_si2_i for EPS and half of that for OPS.
    With *log_corrected* the first-order logarithmic terms are kept too,
    which brings the approximation within a few percent of the exact value
    at 60 dB.
    """
    scheme = kind.scheme if isinstance(kind, SchemeKind) else kind
    if scheme not in (Scheme.EPS, Scheme.OPS):
        raise ValueError(f"no asymptotic form for {scheme.value}")

    thresholds = derive_thresholds(params)
    beta = thresholds.beta
    if beta == 0:
        return OutageValue(0.0, Method.ASYMPTOTIC)

    if not log_corrected:
        numerator = beta if scheme is Scheme.EPS else 0.5 * beta
        p_out = math.prod(numerator / s for s in params.sigma_si2)
        return OutageValue(_clip(p_out), Method.ASYMPTOTIC)

    if scheme is Scheme.OPS:
        delta = thresholds.delta

        def per_relay(s: float, t: float) -> float:
            c = delta * params.eta / s
            d = delta / (s * t)
            return -math.expm1(-c) + d * (math.log(1.0 / d) + 1.0 - 2.0 * EULER_GAMMA)

    else:
        alpha = thresholds.alpha

        def per_relay(s: float, t: float) -> float:
            b = beta / s
            w = alpha / t
            return (
                -math.expm1(-b)
                + (w / s) * exp_integral_E1(b)
                + b * _log_correction(w / beta)
            )

    return OutageValue(_clip(_per_relay_product(params, per_relay)), Method.ASYMPTOTIC)


def diversity_fit(outage_curve: Iterable[tuple[float, float]]) -> float:
    """
    Least-squares slope of log p_out against log gamma, negated.

    *outage_curve* holds (linear gamma, p_out) pairs.
    """
    points = list(outage_curve)
    if len(points) < 2:
        raise ValueError("a diversity fit needs at least two points")
    gammas = np.array([g for g, _ in points], dtype=float)
    p_out = np.array([p for _, p in points], dtype=float)
    if not (gammas > 0).all():
        raise ValueError("SNR values must be positive")
    if not (p_out > 0).all():
        raise ValueError("outage values must be positive to take logarithms")
    if len(np.unique(gammas)) != len(gammas):
        raise ValueError("SNR values must be distinct")
    slope, _intercept = np.polyfit(np.log(gammas), np.log(p_out), 1)
    return float(-slope)


def diversity_order(
    kind: SchemeKind | Scheme,
    params: SystemParams,
    window_db: Sequence[float] = DIVERSITY_WINDOW_DB,
) -> float:
    """
    Fit the diversity order of the exact EPS-RS or OPS-RS outage curve over
    *window_db*.
    """
    scheme = kind.scheme if isinstance(kind, SchemeKind) else kind
    if scheme is Scheme.EPS:
        exact: Callable[[SystemParams], OutageValue] = outage_eps_quadrature
    elif scheme is Scheme.OPS:
        exact = outage_ops_closed
    else:
        raise ValueError(f"no closed form for {scheme.value}")

    curve = []
    for db in window_db:
        gamma = db_to_linear(db)
        curve.append((gamma, exact(params.replace(gamma=gamma)).p_out))
    return diversity_fit(curve)


def appendix_moments(params: SystemParams, relay: int = 0) -> AppendixMoments:
    """
    First and second moments of z, the correction variable whose vanishing
    at high SNR carries the diversity argument:

        E(z)   = alpha / (sigma_si2 sigma_id2) E1(beta / sigma_si2)
        E(z^2) = alpha^2 / (sigma_si2 sigma_id2^2) E2(beta / sigma_si2) / beta
    """
    thresholds = derive_thresholds(params)
    if thresholds.beta == 0:
        raise ValueError("the moments are undefined at a zero rate")
    s = params.sigma_si2[relay]
    t = params.sigma_id2[relay]
    b = thresholds.beta / s
    alpha = thresholds.alpha
    e_z = alpha / (s * t) * exp_integral_E1(b)
    e_z2 = alpha * alpha / (s * t * t) * exp_integral_En(2, b) / thresholds.beta
    return AppendixMoments(e_z=e_z, e_z2=e_z2)


def series_convergence_map(
    gammas_db: Sequence[float],
    rates: Sequence[float],
    etas: Sequence[float],
    n_relays: int = 6,
    ctl: SeriesControl = SeriesControl(),
) -> list[ConvergencePoint]:
    """
    Where does the EPS-RS series converge?  One point per grid node, with
    unit channel means.
    """
    points = []
    for gamma_db in gammas_db:
        for rate in rates:
            for eta in etas:
                params = SystemParams.from_db(
                    gamma_db=gamma_db, eta=eta, rate=rate, n_relays=n_relays
                )
                value = outage_eps_series(params, ctl)
                points.append(
                    ConvergencePoint(
                        gamma_db, rate, eta, value.converged, value.terms or 0
                    )
                )
    return points


def outage(
    kind: SchemeKind, params: SystemParams, ctl: SeriesControl = SeriesControl()
) -> OutageValue | None:
    """
    The best available analytic outage of *kind*, None for the EHB schemes.
    """
    if kind.scheme is Scheme.EPS:
        return outage_eps(params, ctl)
    if kind.scheme is Scheme.TPS:
        assert kind.rho is not None
        return outage_tps_quadrature(params, kind.rho)
    if kind.scheme is Scheme.OPS:
        return outage_ops_closed(params)
    return None
