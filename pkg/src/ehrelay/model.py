# See LICENSE for details.

"""
System parameters, derived outage thresholds and the Rayleigh-fading
channel sampler.

All powers are carried in SNR-normalised units (divided by N0) and the slot
duration is fixed to 1, so harvested energy and transmit power coincide
numerically.
"""

from __future__ import annotations

import dataclasses
import math

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .specfun import DomainError


_UINT64_MAX = 2**64 - 1


def db_to_linear(db: float) -> float:
    return float(10.0 ** (db / 10.0))


def linear_to_db(x: float) -> float:
    if not x > 0:
        raise DomainError(f"cannot express {x} in dB")
    return 10.0 * math.log10(x)


def snr_threshold(rate: float) -> float:
    """
    The SNR a half-duplex link needs to carry *rate* bit/s/Hz, 2^(2R) - 1.
    """
    return float(2.0 ** (2.0 * rate) - 1.0)


@dataclass(frozen=True)
class SystemParams:
    """
    Network-wide constants.

    *gamma* and *gamma_b_max* are linear SNRs (P/N0 and P_b^max/N0).  The
    per-relay channel means are tuples of length *n_relays*.
    """

    gamma: float
    eta: float
    rate: float
    n_relays: int
    sigma_si2: tuple[float, ...]
    sigma_id2: tuple[float, ...]
    gamma_b_max: float = 1000.0
    slot_duration: float = 1.0

    def __post_init__(self) -> None:
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if not 0.0 < self.eta <= 1.0:
            raise ValueError(f"eta must lie in (0, 1], got {self.eta}")
        # A zero rate is allowed: it is the degenerate "never in outage" case.
        if not self.rate >= 0:
            raise ValueError(f"rate must be nonnegative, got {self.rate}")
        if self.n_relays < 1:
            raise ValueError(f"at least one relay is needed, got {self.n_relays}")
        for name in ("sigma_si2", "sigma_id2"):
            values = getattr(self, name)
            if len(values) != self.n_relays:
                raise ValueError(
                    f"{name} has {len(values)} entries for {self.n_relays} relays"
                )
            if any(not v > 0 for v in values):
                raise ValueError(f"{name} entries must be positive, got {values}")
        if not self.gamma_b_max >= 0:
            raise ValueError(
                f"gamma_b_max must be nonnegative, got {self.gamma_b_max}"
            )
        if self.slot_duration != 1.0:
            raise ValueError("the slot duration is normalised to 1")

    @classmethod
    def symmetric(
        cls,
        gamma: float,
        eta: float = 0.5,
        rate: float = 1.0,
        n_relays: int = 6,
        sigma2: float = 1.0,
        gamma_b_max: float = 1000.0,
    ) -> SystemParams:
        return cls(
            gamma=gamma,
            eta=eta,
            rate=rate,
            n_relays=n_relays,
            sigma_si2=(sigma2,) * n_relays,
            sigma_id2=(sigma2,) * n_relays,
            gamma_b_max=gamma_b_max,
        )

    @classmethod
    def from_db(
        cls,
        gamma_db: float = 15.0,
        eta: float = 0.5,
        rate: float = 1.0,
        n_relays: int = 6,
        sigma_si2: float | Sequence[float] = 1.0,
        sigma_id2: float | Sequence[float] = 1.0,
        gamma_b_max_db: float = 30.0,
    ) -> SystemParams:
        return cls(
            gamma=db_to_linear(gamma_db),
            eta=eta,
            rate=rate,
            n_relays=n_relays,
            sigma_si2=_per_relay(sigma_si2, n_relays),
            sigma_id2=_per_relay(sigma_id2, n_relays),
            gamma_b_max=db_to_linear(gamma_b_max_db),
        )

    @property
    def is_symmetric(self) -> bool:
        return len(set(self.sigma_si2)) == 1 and len(set(self.sigma_id2)) == 1

    def replace(self, **changes: object) -> SystemParams:
        return dataclasses.replace(self, **changes)  # type: ignore[arg-type]

    def with_relays(self, n_relays: int) -> SystemParams:
        """
        Resize a symmetric network to *n_relays* relays.
        """
        if not self.is_symmetric:
            raise ValueError("only networks with identical relays can be resized")
        return dataclasses.replace(
            self,
            n_relays=n_relays,
            sigma_si2=(self.sigma_si2[0],) * n_relays,
            sigma_id2=(self.sigma_id2[0],) * n_relays,
        )


def _per_relay(value: float | Sequence[float], n_relays: int) -> tuple[float, ...]:
    if isinstance(value, (int, float)):
        return (float(value),) * n_relays
    return tuple(float(v) for v in value)


@dataclass(frozen=True)
class DerivedThresholds:
    alpha: float
    beta: float
    delta: float


def derive_thresholds(params: SystemParams) -> DerivedThresholds:
    theta = snr_threshold(params.rate)
    return DerivedThresholds(
        alpha=2.0 * theta / (params.gamma * params.eta),
        beta=2.0 * theta / params.gamma,
        delta=theta / (params.gamma * params.eta),
    )


@dataclass(frozen=True)
class RngContract:
    """
    A (seed, stream) pair naming one reproducible random stream.

    Streams are derived through numpy's SeedSequence spawn keys and fed to a
    PCG64 generator, which is stable across platforms and numpy releases.
    """

    seed: int
    stream_id: int = 0

    def __post_init__(self) -> None:
        for name in ("seed", "stream_id"):
            value = getattr(self, name)
            if not 0 <= value <= _UINT64_MAX:
                raise ValueError(f"{name} must be a 64-bit unsigned integer")

    def generator(self) -> np.random.Generator:
        sequence = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.PCG64(sequence))


def rng_for(seed: int, stream_id: int = 0) -> np.random.Generator:
    return RngContract(seed, stream_id).generator()


@dataclass(frozen=True, eq=False)
class ChannelDraw:
    """
    One slot's realised channel power gains |h_si|^2 and |h_id|^2.
    """

    g_si: np.ndarray
    g_id: np.ndarray

    def __post_init__(self) -> None:
        if self.g_si.shape != self.g_id.shape or self.g_si.ndim != 1:
            raise ValueError("g_si and g_id must be vectors of equal length")
        if (self.g_si < 0).any() or (self.g_id < 0).any():
            raise ValueError("channel gains are nonnegative")

    @property
    def n_relays(self) -> int:
        return int(self.g_si.shape[0])


def draw_channel_batch(
    params: SystemParams, rng: np.random.Generator, size: int
) -> tuple[np.ndarray, np.ndarray]:
    """
    Draw *size* slots of channel gains, each an array of shape (size, N).

    Exponential variates come from the inverse CDF, -sigma^2 log(1 - U), so
    the draws are a fixed function of the uniform stream.
    """
    uniforms = rng.random((2, size, params.n_relays))
    g_si = -np.asarray(params.sigma_si2) * np.log1p(-uniforms[0])
    g_id = -np.asarray(params.sigma_id2) * np.log1p(-uniforms[1])
    return g_si, g_id


def draw_channels(params: SystemParams, rng: np.random.Generator) -> ChannelDraw:
    g_si, g_id = draw_channel_batch(params, rng, 1)
    return ChannelDraw(g_si=g_si[0], g_id=g_id[0])
