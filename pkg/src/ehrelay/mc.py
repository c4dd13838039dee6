# See LICENSE for details.

"""
Monte-Carlo outage estimation.

Memoryless schemes (EPS, TPS, OPS) draw independent slots in fixed-size
batches; batch b always reads random stream b.  The battery schemes run
independent trajectories ("chains"); chain c always reads stream c and its
slots are drawn in fixed blocks.  Workers only change who computes a batch
or a chain, never which numbers it sees, and integer outage counts are
added up in index order, so an estimate is a function of the seed alone.
"""

from __future__ import annotations

import enum
import math

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator, NamedTuple, Sequence, TypeVar

import numpy as np

from scipy import stats

from .model import SystemParams, db_to_linear, draw_channel_batch, rng_for
from .schemes import (
    BatchSelection,
    Scheme,
    SchemeKind,
    battery_update_batch,
    ops_metric,
    select_batch,
)


BATCH_SIZE = 2**16
SLOT_BLOCK = 4096

_T = TypeVar("_T")


@dataclass(frozen=True)
class TrialConfig:
    trials: int
    warmup: int = 1000
    seed: int = 0
    chains: int = 8
    confidence: float = 0.99
    workers: int = 1

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError(f"trials must be at least 1, got {self.trials}")
        if self.warmup < 0:
            raise ValueError(f"warmup must be nonnegative, got {self.warmup}")
        if self.chains < 1:
            raise ValueError(f"chains must be at least 1, got {self.chains}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if not 0.0 < self.confidence < 1.0:
            raise ValueError(
                f"confidence must lie in (0, 1), got {self.confidence}"
            )
        if self.workers < 1:
            raise ValueError(f"workers must be at least 1, got {self.workers}")

    def with_seed(self, seed: int) -> TrialConfig:
        return TrialConfig(
            trials=self.trials,
            warmup=self.warmup,
            seed=seed,
            chains=self.chains,
            confidence=self.confidence,
            workers=self.workers,
        )


@dataclass(frozen=True)
class Proportion:
    """
    An estimated probability with a two-sided confidence interval.
    """

    p_hat: float
    ci_low: float
    ci_high: float
    trials_used: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.ci_low <= self.p_hat <= self.ci_high <= 1.0:
            raise ValueError(
                f"inconsistent interval {self.ci_low} <= {self.p_hat} "
                f"<= {self.ci_high}"
            )

    @property
    def std_error(self) -> float:
        return math.sqrt(self.p_hat * (1.0 - self.p_hat) / self.trials_used)

    def contains(self, p: float) -> bool:
        return self.ci_low <= p <= self.ci_high


@dataclass(frozen=True)
class OutageEstimate(Proportion):
    scheme: SchemeKind


def proportion_interval(
    count: int, n: int, confidence: float
) -> tuple[float, float, float]:
    """
    Return (p_hat, low, high) by the normal approximation.

    An estimate of exactly 0 or 1 has no spread; the open side then gets
    the exact one-sided binomial bound 1 - (1 - confidence)^(1/n).
    """
    if not 0 <= count <= n or n < 1:
        raise ValueError(f"invalid count {count} out of {n}")
    p_hat = count / n
    if count == 0:
        return 0.0, 0.0, -math.expm1(math.log1p(-confidence) / n)
    if count == n:
        return 1.0, math.exp(math.log1p(-confidence) / n), 1.0
    z = float(stats.norm.ppf(0.5 + 0.5 * confidence))
    half = z * math.sqrt(p_hat * (1.0 - p_hat) / n)
    return p_hat, max(p_hat - half, 0.0), min(p_hat + half, 1.0)


def _estimate(
    kind: SchemeKind, count: int, n: int, confidence: float
) -> OutageEstimate:
    p_hat, low, high = proportion_interval(count, n, confidence)
    return OutageEstimate(
        p_hat=p_hat, ci_low=low, ci_high=high, trials_used=n, scheme=kind
    )


def _parallel_map(
    func: Callable[..., _T], tasks: Sequence[tuple[object, ...]], workers: int
) -> list[_T]:
    if workers == 1 or len(tasks) <= 1:
        return [func(*task) for task in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
        return list(pool.map(func, *zip(*tasks)))


def _batch_sizes(trials: int) -> list[int]:
    full, rest = divmod(trials, BATCH_SIZE)
    return [BATCH_SIZE] * full + ([rest] if rest else [])


def _count_batch(
    kind: SchemeKind, params: SystemParams, seed: int, batch: int, size: int
) -> int:
    g_si, g_id = draw_channel_batch(params, rng_for(seed, batch), size)
    selection = select_batch(kind, params, g_si, g_id)
    return int(np.count_nonzero(selection.capacity < params.rate))


def _chain_steps(
    kind: SchemeKind,
    params: SystemParams,
    seed: int,
    chain_ids: Sequence[int],
    horizon: int,
) -> Iterator[tuple[int, BatchSelection, np.ndarray]]:
    """
    Step the chains in *chain_ids* side by side for *horizon* slots, all
    starting from empty batteries.

    Yields (slot, selection, batteries after the slot) with one row per
    chain.
    """
    rngs = [rng_for(seed, chain) for chain in chain_ids]
    p_s = np.zeros((len(chain_ids), params.n_relays))
    for start in range(0, horizon, SLOT_BLOCK):
        size = min(SLOT_BLOCK, horizon - start)
        draws = [draw_channel_batch(params, rng, size) for rng in rngs]
        g_si = np.stack([g for g, _ in draws])
        g_id = np.stack([g for _, g in draws])
        for j in range(size):
            slot_si = g_si[:, j]
            slot_id = g_id[:, j]
            selection = select_batch(kind, params, slot_si, slot_id, p_s)
            p_s = battery_update_batch(
                kind, params, p_s, selection.index, slot_si, slot_id
            )
            yield start + j, selection, p_s


def _count_chains(
    kind: SchemeKind,
    params: SystemParams,
    seed: int,
    chain_ids: tuple[int, ...],
    warmup: int,
    lengths: tuple[int, ...],
    horizon: int,
) -> int:
    stop = warmup + np.asarray(lengths)
    outages = 0
    for slot, selection, _p_s in _chain_steps(kind, params, seed, chain_ids, horizon):
        if slot < warmup:
            continue
        counted = (selection.capacity < params.rate) & (slot < stop)
        outages += int(np.count_nonzero(counted))
    return outages


def _chain_lengths(trials: int, chains: int) -> list[int]:
    share, extra = divmod(trials, chains)
    return [share + (1 if c < extra else 0) for c in range(chains)]


def _split(items: Sequence[int], parts: int) -> list[list[int]]:
    size = math.ceil(len(items) / parts)
    return [list(items[i : i + size]) for i in range(0, len(items), size)]


def estimate_outage(
    kind: SchemeKind, params: SystemParams, cfg: TrialConfig
) -> OutageEstimate:
    """
    Estimate Pr(end-to-end capacity < R) for *kind*.

    For the battery schemes the estimate is the time average over the
    post-warmup slots of cfg.chains trajectories, which share cfg.trials
    slots between them.
    """
    if not kind.uses_battery:
        tasks = [
            (kind, params, cfg.seed, batch, size)
            for batch, size in enumerate(_batch_sizes(cfg.trials))
        ]
        counts = _parallel_map(_count_batch, tasks, cfg.workers)
        return _estimate(kind, sum(counts), cfg.trials, cfg.confidence)

    chains = min(cfg.chains, cfg.trials)
    lengths = _chain_lengths(cfg.trials, chains)
    horizon = cfg.warmup + max(lengths)
    chain_tasks = []
    for group in _split(range(chains), cfg.workers):
        chain_tasks.append(
            (
                kind,
                params,
                cfg.seed,
                tuple(group),
                cfg.warmup,
                tuple(lengths[c] for c in group),
                horizon,
            )
        )
    counts = _parallel_map(_count_chains, chain_tasks, cfg.workers)
    return _estimate(kind, sum(counts), cfg.trials, cfg.confidence)


class Trajectory(NamedTuple):
    battery: np.ndarray
    selected: np.ndarray
    outage: np.ndarray


def battery_trajectory(
    kind: SchemeKind,
    params: SystemParams,
    slots: int,
    seed: int = 0,
    chain: int = 0,
) -> Trajectory:
    """
    Record one chain slot by slot: batteries after each slot (slots, N), the
    selected relay (-1 for none) and whether the slot was in outage.
    """
    if not kind.uses_battery:
        raise ValueError(f"{kind.label} has no battery")
    battery = np.empty((slots, params.n_relays))
    selected = np.empty(slots, dtype=np.int64)
    outage = np.empty(slots, dtype=bool)
    for slot, selection, p_s in _chain_steps(kind, params, seed, (chain,), slots):
        battery[slot] = p_s[0]
        selected[slot] = selection.index[0]
        outage[slot] = selection.capacity[0] < params.rate
    return Trajectory(battery, selected, outage)


class SweepAxis(enum.Enum):
    GAMMA_DB = "gamma_db"
    ETA = "eta"
    RATE = "rate"
    N_RELAYS = "n_relays"
    RHO_FIXED = "rho_fixed"


class SweepPoint(NamedTuple):
    value: float
    kind: SchemeKind
    params: SystemParams
    estimate: OutageEstimate


def sweep_point(
    kind: SchemeKind, params: SystemParams, axis: SweepAxis, value: float
) -> tuple[SchemeKind, SystemParams]:
    """
    Apply one axis value, raising ValueError when it is out of range.
    """
    if axis is SweepAxis.GAMMA_DB:
        return kind, params.replace(gamma=db_to_linear(value))
    if axis is SweepAxis.ETA:
        return kind, params.replace(eta=value)
    if axis is SweepAxis.RATE:
        return kind, params.replace(rate=value)
    if axis is SweepAxis.N_RELAYS:
        if value != int(value):
            raise ValueError(f"relay counts are integers, got {value}")
        return kind, params.with_relays(int(value))
    if kind.scheme is not Scheme.TPS:
        raise ValueError("a rho_fixed sweep needs the TPS scheme")
    return SchemeKind(Scheme.TPS, value), params


def point_seed(seed: int, index: int) -> int:
    """
    The seed of sweep point *index*, derived from the sweep seed.
    """
    state = np.random.SeedSequence([seed, index]).generate_state(1, np.uint64)
    return int(state[0])


class PlannedPoint(NamedTuple):
    value: float
    kind: SchemeKind
    params: SystemParams
    cfg: TrialConfig


def plan_sweep(
    kind: SchemeKind,
    params: SystemParams,
    axis: SweepAxis,
    values: Sequence[float],
    cfg: TrialConfig,
) -> list[PlannedPoint]:
    """
    Resolve every sweep point before anything runs.  Point i simulates with
    the seed derived from (cfg.seed, i), so every scheme swept with the same
    config sees the same channels at a point.
    """
    points = [sweep_point(kind, params, axis, value) for value in values]
    return [
        PlannedPoint(
            value, point_kind, point_params, cfg.with_seed(point_seed(cfg.seed, index))
        )
        for index, (value, (point_kind, point_params)) in enumerate(zip(values, points))
    ]


def sweep(
    kind: SchemeKind,
    params: SystemParams,
    axis: SweepAxis,
    values: Sequence[float],
    cfg: TrialConfig,
) -> list[SweepPoint]:
    return [
        SweepPoint(
            point.value,
            point.kind,
            point.params,
            estimate_outage(point.kind, point.params, point.cfg),
        )
        for point in plan_sweep(kind, params, axis, values, cfg)
    ]


def _count_collisions(
    params: SystemParams,
    seed: int,
    batch: int,
    size: int,
    timer_constant: float,
    collision_window: float,
) -> int:
    g_si, g_id = draw_channel_batch(params, rng_for(seed, batch), size)
    metrics = ops_metric(params.eta, g_si, g_id)
    with np.errstate(divide="ignore"):
        timers = np.where(metrics > 0, timer_constant / metrics, np.inf)
    earliest = np.partition(timers, 1, axis=1)[:, :2]
    collided = earliest[:, 1] - earliest[:, 0] < collision_window
    return int(np.count_nonzero(collided))


def timer_collision_rate(
    params: SystemParams,
    cfg: TrialConfig,
    timer_constant: float = 1.0,
    collision_window: float = 1e-3,
) -> Proportion:
    """
    How often the two earliest OPS-RS back-off timers expire less than
    *collision_window* apart.
    """
    if not timer_constant > 0:
        raise ValueError(f"timer_constant must be positive, got {timer_constant}")
    if not collision_window >= 0:
        raise ValueError(
            f"collision_window must be nonnegative, got {collision_window}"
        )
    if params.n_relays < 2:
        return Proportion(
            *proportion_interval(0, cfg.trials, cfg.confidence), cfg.trials
        )
    tasks = [
        (params, cfg.seed, batch, size, timer_constant, collision_window)
        for batch, size in enumerate(_batch_sizes(cfg.trials))
    ]
    counts = _parallel_map(_count_collisions, tasks, cfg.workers)
    p_hat, low, high = proportion_interval(sum(counts), cfg.trials, cfg.confidence)
    return Proportion(p_hat, low, high, cfg.trials)
