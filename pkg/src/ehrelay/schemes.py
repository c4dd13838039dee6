# See LICENSE for details.

"""
Power-splitting ratios, end-to-end capacities, relay selection and battery
dynamics of the five relay selection schemes.

Every computation is written against numpy arrays of shape (..., N) so the
Monte-Carlo engine can push whole batches of slots through it; the scalar
entry points (`select`, `battery_update_df`, ...) are one-row views of the
same code.
"""

from __future__ import annotations

import enum
import math

from dataclasses import dataclass
from typing import NamedTuple, Sequence, Union

import numpy as np

from .model import ChannelDraw, SystemParams


ArrayLike = Union[float, np.ndarray]

_HALF_OVER_LN2 = 0.5 / math.log(2.0)


class UnknownScheme(ValueError):
    """
    A scheme name did not match any known relay selection scheme.
    """


class Scheme(enum.Enum):
    EPS = "eps"
    TPS = "tps"
    OPS = "ops"
    EHB_DF = "ehb-df"
    EHB_AF = "ehb-af"

    @property
    def uses_battery(self) -> bool:
        return self in (Scheme.EHB_DF, Scheme.EHB_AF)


_ALIASES = {
    "eps": Scheme.EPS,
    "eps-rs": Scheme.EPS,
    "tps": Scheme.TPS,
    "tps-rs": Scheme.TPS,
    "ops": Scheme.OPS,
    "ops-rs": Scheme.OPS,
    "ehb-df": Scheme.EHB_DF,
    "ehb_df": Scheme.EHB_DF,
    "df": Scheme.EHB_DF,
    "ehb-af": Scheme.EHB_AF,
    "ehb_af": Scheme.EHB_AF,
    "af": Scheme.EHB_AF,
}


@dataclass(frozen=True)
class SchemeKind:
    """
    A relay selection scheme, with the fixed PSR when it is TPS.
    """

    scheme: Scheme
    rho: float | None = None

    def __post_init__(self) -> None:
        if self.scheme is Scheme.TPS:
            if self.rho is None or not 0.0 <= self.rho <= 1.0:
                raise ValueError(f"TPS needs a fixed rho in [0, 1], got {self.rho}")
        elif self.rho is not None:
            raise ValueError(f"{self.scheme.value} takes no fixed rho")

    @classmethod
    def parse(cls, text: str, rho: float | None = None) -> SchemeKind:
        """
        Parse a scheme name such as ``ops``, ``ehb-df`` or ``tps:0.3``.

        A bare ``tps`` takes its PSR from *rho*.
        """
        name, sep, value = text.strip().lower().partition(":")
        try:
            scheme = _ALIASES[name]
        except KeyError:
            raise UnknownScheme(f"Unknown scheme {text!r}") from None
        if sep:
            if scheme is not Scheme.TPS:
                raise ValueError(f"{scheme.value} takes no fixed rho")
            try:
                rho = float(value)
            except ValueError:
                raise ValueError(f"Invalid rho in {text!r}") from None
        if scheme is not Scheme.TPS:
            rho = None
        return cls(scheme, rho)

    @property
    def uses_battery(self) -> bool:
        return self.scheme.uses_battery

    @property
    def label(self) -> str:
        if self.scheme is Scheme.TPS:
            return f"tps:{self.rho:g}"
        return self.scheme.value

    def __str__(self) -> str:
        return self.label


EPS = SchemeKind(Scheme.EPS)
OPS = SchemeKind(Scheme.OPS)
EHB_DF = SchemeKind(Scheme.EHB_DF)
EHB_AF = SchemeKind(Scheme.EHB_AF)


def tps(rho: float) -> SchemeKind:
    return SchemeKind(Scheme.TPS, rho)


@dataclass(frozen=True, eq=False)
class RelayBatteryState:
    """
    Stored battery power of every relay, gamma_i^s = P_i^s / N0.
    """

    p_s: np.ndarray

    def __post_init__(self) -> None:
        if self.p_s.ndim != 1:
            raise ValueError("battery state is one value per relay")
        if (self.p_s < 0).any():
            raise ValueError("battery power is nonnegative")

    @classmethod
    def empty(cls, n_relays: int) -> RelayBatteryState:
        return cls(np.zeros(n_relays))

    @property
    def n_relays(self) -> int:
        return int(self.p_s.shape[0])


@dataclass(frozen=True)
class SelectionResult:
    index: int | None
    rho: float
    capacity: float
    per_relay_capacity: tuple[float, ...]


class BatchSelection(NamedTuple):
    """
    Selections for a batch of slots.

    The memoryless schemes always name the argmax relay, even when it
    carries no rate.  The battery schemes report -1 where no relay can carry
    any rate, so that every relay keeps harvesting; *rho* is then 1.
    """

    index: np.ndarray
    rho: np.ndarray
    capacity: np.ndarray
    per_relay_capacity: np.ndarray


class TimerOutcome(NamedTuple):
    winner: int | None
    collided: bool


def _capacity(snr: ArrayLike) -> np.ndarray:
    return np.log1p(snr) * _HALF_OVER_LN2


def _check_eta(eta: ArrayLike) -> None:
    if not np.all(np.asarray(eta) > 0):
        raise ValueError(f"eta must be positive, got {eta}")


def ops_metric(eta: float, g_si: ArrayLike, g_id: ArrayLike) -> np.ndarray:
    return np.asarray(g_si) * g_id / (1.0 + eta * np.asarray(g_id))


def rho_ops(eta: ArrayLike, g_id: ArrayLike) -> ArrayLike:
    """
    Optimal PSR without a battery, 1 / (1 + eta g_id).

    It balances the decoding and forwarding SNRs, 1 - rho = rho eta g_id.
    """
    _check_eta(eta)
    return 1.0 / (1.0 + eta * g_id)


def rho_df_ehb(
    gamma: float,
    gamma_s: ArrayLike,
    g_si: ArrayLike,
    g_id: ArrayLike,
    eta: ArrayLike,
) -> ArrayLike:
    gamma_s = np.asarray(gamma_s, dtype=float)
    g_si = np.asarray(g_si, dtype=float)
    g_id = np.asarray(g_id, dtype=float)
    drain = gamma_s * g_id
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(drain == 0, 0.0, drain / (gamma * g_si))
    rho = np.maximum(1.0 - ratio, 0.0) / (1.0 + eta * g_id)
    return rho if rho.ndim else float(rho)


def rho_af_ehb(eta: ArrayLike, a: ArrayLike, b: ArrayLike) -> ArrayLike:
    """
    PSR minimising f(rho) = 1/(rho eta + a) + b/(1 - rho), clamped at 0.

    With no stored power (a = 0) this is 1 / (1 + sqrt(eta) sqrt(b)).
    """
    _check_eta(eta)
    a = np.asarray(a, dtype=float)
    root_b = np.sqrt(np.asarray(b, dtype=float))
    root_eta = np.sqrt(eta)
    with np.errstate(invalid="ignore"):
        numerator = np.where(a == 0, 1.0, 1.0 - a * root_b / root_eta)
    rho = np.maximum(numerator, 0.0) / (1.0 + root_eta * root_b)
    return rho if rho.ndim else float(rho)


def af_objective(rho: ArrayLike, eta: float, a: ArrayLike, b: ArrayLike) -> ArrayLike:
    """
    f(rho), the reciprocal SNR factor of the AF relay.
    """
    return 1.0 / (rho * eta + np.asarray(a)) + np.asarray(b) / (1.0 - rho)


def capacity_df(
    rho: ArrayLike,
    gamma: float,
    gamma_s: ArrayLike,
    g_si: ArrayLike,
    g_id: ArrayLike,
    eta: float,
) -> ArrayLike:
    rho = np.asarray(rho, dtype=float)
    g_si = np.asarray(g_si, dtype=float)
    g_id = np.asarray(g_id, dtype=float)
    decode = (1.0 - rho) * gamma * g_si
    forward = rho * gamma * eta * g_si * g_id + np.asarray(gamma_s) * g_id
    capacity = _capacity(np.minimum(decode, forward))
    return capacity if capacity.ndim else float(capacity)


def capacity_af(
    rho: ArrayLike,
    gamma: float,
    p_s_over_p_gsi: ArrayLike,
    g_si: ArrayLike,
    g_id: ArrayLike,
    eta: float,
    exact_scaling: bool = False,
) -> ArrayLike:
    """
    Capacity of the AF hop at PSR *rho*.

    By default the scaling factor drops the receiver noise of the decoding
    branch, which makes the destination SNR g_si g_id gamma / f(rho).  With
    *exact_scaling* the noise term is kept.
    """
    rho = np.asarray(rho, dtype=float)
    a = np.asarray(p_s_over_p_gsi, dtype=float)
    g_si = np.asarray(g_si, dtype=float)
    g_id = np.asarray(g_id, dtype=float)
    signal = g_si * g_id * gamma

    with np.errstate(divide="ignore", invalid="ignore"):
        if exact_scaling:
            stored = np.where(a == 0, 0.0, a * gamma * g_si)
            gain2 = (rho * eta * gamma * g_si + stored) / (
                (1.0 - rho) * gamma * g_si + 1.0
            )
            snr = gain2 * signal * (1.0 - rho) / (gain2 * g_id + 1.0)
        else:
            harvest = rho * eta + a
            f = np.where(harvest > 0, 1.0 / harvest, np.inf) + np.where(
                rho < 1.0, g_id / (1.0 - rho), np.inf
            )
            snr = signal / f
        snr = np.where(np.isfinite(snr) & (rho < 1.0) & (snr > 0), snr, 0.0)

    capacity = _capacity(snr)
    return capacity if capacity.ndim else float(capacity)


def _stored_ratio(gamma: float, p_s: np.ndarray, g_si: np.ndarray) -> np.ndarray:
    # a = P_s / (|h_si|^2 P) in SNR units.
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(p_s == 0, 0.0, p_s / (gamma * g_si))


def relay_psr(
    kind: SchemeKind,
    params: SystemParams,
    g_si: np.ndarray,
    g_id: np.ndarray,
    p_s: np.ndarray,
) -> np.ndarray:
    """
    The PSR every relay would apply if it were selected.
    """
    scheme = kind.scheme
    if scheme is Scheme.EPS:
        return np.full_like(g_si, 0.5)
    if scheme is Scheme.TPS:
        assert kind.rho is not None
        return np.full_like(g_si, kind.rho)
    if scheme is Scheme.OPS:
        return np.asarray(rho_ops(params.eta, g_id))
    if scheme is Scheme.EHB_DF:
        return np.asarray(rho_df_ehb(params.gamma, p_s, g_si, g_id, params.eta))
    a = _stored_ratio(params.gamma, p_s, g_si)
    return np.asarray(rho_af_ehb(params.eta, a, g_id))


def relay_capacity(
    kind: SchemeKind,
    params: SystemParams,
    g_si: np.ndarray,
    g_id: np.ndarray,
    p_s: np.ndarray,
    rho: np.ndarray,
) -> np.ndarray:
    if kind.scheme is Scheme.EHB_AF:
        a = _stored_ratio(params.gamma, p_s, g_si)
        return np.asarray(capacity_af(rho, params.gamma, a, g_si, g_id, params.eta))
    if kind.scheme is Scheme.OPS:
        # The balanced closed form; monotone in the selection metric.
        snr = params.gamma * params.eta * ops_metric(params.eta, g_si, g_id)
        return _capacity(snr)
    gamma_s = p_s if kind.scheme is Scheme.EHB_DF else 0.0
    return np.asarray(
        capacity_df(rho, params.gamma, gamma_s, g_si, g_id, params.eta)
    )


def select_batch(
    kind: SchemeKind,
    params: SystemParams,
    g_si: np.ndarray,
    g_id: np.ndarray,
    p_s: np.ndarray | None = None,
) -> BatchSelection:
    """
    Pick the best relay in every row of (trials, N) channel arrays.

    Ties go to the lowest relay index.  OPS ranks relays by
    g_si g_id / (1 + eta g_id), the others by their end-to-end capacity.
    Batteries are only read by the EHB schemes.
    """
    g_si = np.atleast_2d(np.asarray(g_si, dtype=float))
    g_id = np.atleast_2d(np.asarray(g_id, dtype=float))
    if kind.uses_battery and p_s is not None:
        p_s = np.atleast_2d(np.asarray(p_s, dtype=float))
    else:
        p_s = np.zeros_like(g_si)

    rho = relay_psr(kind, params, g_si, g_id, p_s)
    per_relay = relay_capacity(kind, params, g_si, g_id, p_s, rho)

    if kind.scheme is Scheme.OPS:
        best = np.argmax(ops_metric(params.eta, g_si, g_id), axis=1)
    else:
        best = np.argmax(per_relay, axis=1)

    rows = np.arange(g_si.shape[0])
    capacity = per_relay[rows, best]
    served = capacity > 0 if kind.uses_battery else np.ones_like(best, dtype=bool)
    index = np.where(served, best, -1)
    chosen_rho = np.where(served, rho[rows, best], 1.0)
    return BatchSelection(
        index=index,
        rho=chosen_rho,
        capacity=np.where(served, capacity, 0.0),
        per_relay_capacity=per_relay,
    )


def select(
    kind: SchemeKind,
    params: SystemParams,
    draw: ChannelDraw,
    battery: RelayBatteryState | None = None,
) -> SelectionResult:
    p_s = battery.p_s if battery is not None else None
    batch = select_batch(kind, params, draw.g_si, draw.g_id, p_s)
    index = int(batch.index[0])
    return SelectionResult(
        index=index if index >= 0 else None,
        rho=float(batch.rho[0]),
        capacity=float(batch.capacity[0]),
        per_relay_capacity=tuple(float(c) for c in batch.per_relay_capacity[0]),
    )


def _harvest_all(
    params: SystemParams, p_s: np.ndarray, g_si: np.ndarray
) -> np.ndarray:
    # Relays that do not forward put everything into the battery (rho = 1).
    return np.minimum(p_s + params.eta * params.gamma * g_si, params.gamma_b_max)


def _df_remaining(
    params: SystemParams, p_s: np.ndarray, g_si: np.ndarray, g_id: np.ndarray
) -> np.ndarray:
    need = params.gamma * g_si
    with np.errstate(divide="ignore", invalid="ignore"):
        left = np.where(p_s * g_id > need, p_s - need / g_id, 0.0)
    return np.minimum(np.maximum(left, 0.0), params.gamma_b_max)


def battery_update_batch(
    kind: SchemeKind,
    params: SystemParams,
    p_s: np.ndarray,
    index: np.ndarray,
    g_si: np.ndarray,
    g_id: np.ndarray,
) -> np.ndarray:
    """
    Advance a (chains, N) battery array by one slot.

    *index* holds the selected relay per chain, -1 when nobody forwarded.
    """
    if not kind.uses_battery:
        raise ValueError(f"{kind.label} has no battery")
    updated = _harvest_all(params, p_s, g_si)
    rows = np.flatnonzero(index >= 0)
    cols = index[rows]
    if kind.scheme is Scheme.EHB_DF:
        updated[rows, cols] = _df_remaining(
            params, p_s[rows, cols], g_si[rows, cols], g_id[rows, cols]
        )
    else:
        updated[rows, cols] = 0.0
    return updated


def _update_one(
    kind: SchemeKind,
    state: RelayBatteryState,
    selected: int | None,
    params: SystemParams,
    draw: ChannelDraw,
) -> RelayBatteryState:
    index = np.array([-1 if selected is None else selected])
    p_s = battery_update_batch(
        kind,
        params,
        state.p_s[np.newaxis, :].astype(float),
        index,
        draw.g_si[np.newaxis, :],
        draw.g_id[np.newaxis, :],
    )
    return RelayBatteryState(p_s[0])


def battery_update_df(
    state: RelayBatteryState,
    selected: int | None,
    params: SystemParams,
    draw: ChannelDraw,
) -> RelayBatteryState:
    """
    The forwarding relay spends what it needs to match the decoding rate,
    gamma g_si / g_id, or everything it has; the others harvest.
    """
    return _update_one(EHB_DF, state, selected, params, draw)


def battery_update_af(
    state: RelayBatteryState,
    selected: int | None,
    params: SystemParams,
    draw: ChannelDraw,
) -> RelayBatteryState:
    """
    The forwarding relay empties its battery; the others harvest.
    """
    return _update_one(EHB_AF, state, selected, params, draw)


def timer_selection(
    metrics: Sequence[float] | np.ndarray,
    timer_constant: float,
    collision_window: float,
) -> TimerOutcome:
    """
    Distributed selection: relay i backs off for timer_constant / metric_i
    and the first timer to expire wins.

    When the two earliest timers are less than *collision_window* apart the
    transmissions collide and nobody wins.
    """
    if not timer_constant > 0:
        raise ValueError(f"timer_constant must be positive, got {timer_constant}")
    if not collision_window >= 0:
        raise ValueError(
            f"collision_window must be nonnegative, got {collision_window}"
        )
    values = np.asarray(metrics, dtype=float)
    if (values < 0).any():
        raise ValueError("timer metrics are nonnegative")
    if not (values > 0).any():
        return TimerOutcome(None, False)

    with np.errstate(divide="ignore"):
        timers = np.where(values > 0, timer_constant / values, np.inf)
    winner = int(np.argmin(timers))
    if values.size > 1 and collision_window > 0:
        first, second = np.partition(timers, 1)[:2]
        if second - first < collision_window:
            return TimerOutcome(None, True)
    return TimerOutcome(winner, False)
