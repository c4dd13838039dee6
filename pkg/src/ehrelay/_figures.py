# See LICENSE for details.

"""
The figure campaigns.  Each one is a fixed list of curves over the base
parameters; only the swept axis and the curve parameters are hard-coded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from ._runner import ResultRow, curve
from .mc import SweepAxis, TrialConfig
from .model import SystemParams
from .schemes import EHB_AF, EHB_DF, EPS, OPS, SchemeKind, tps
from .specfun import SeriesControl


GAMMA_GRID_DB = tuple(float(db) for db in range(0, 21, 2))
RHO_GRID = tuple(round(0.05 * i, 2) for i in range(1, 20))
ETA_GRID = tuple(round(0.1 * i, 1) for i in range(1, 11))


@dataclass(frozen=True)
class Curve:
    kind: SchemeKind
    axis: SweepAxis
    values: tuple[float, ...]
    changes: dict[str, object] = field(default_factory=dict)


@dataclass(frozen=True)
class Campaign:
    number: int
    title: str
    curves: Callable[[], list[Curve]]


def _pairs(
    kinds: tuple[SchemeKind, ...],
    axis: SweepAxis,
    values: tuple[float, ...],
    key: str | None = None,
    settings: tuple[float, ...] = (),
) -> list[Curve]:
    if key is None:
        return [Curve(kind, axis, values) for kind in kinds]
    return [
        Curve(kind, axis, values, {key: setting})
        for setting in settings
        for kind in kinds
    ]


_BASIC = (EPS, OPS)
_ALL = (EPS, OPS, EHB_DF, EHB_AF)

CAMPAIGNS = {
    3: Campaign(
        3,
        "TPS-RS outage against the fixed PSR, with OPS-RS for reference",
        lambda: [
            Curve(tps(0.5), SweepAxis.RHO_FIXED, RHO_GRID),
            Curve(OPS, SweepAxis.GAMMA_DB, ()),
        ],
    ),
    4: Campaign(
        4,
        "EPS-RS and OPS-RS outage against the conversion efficiency",
        lambda: _pairs(_BASIC, SweepAxis.ETA, ETA_GRID, "rate", (0.5, 1.0)),
    ),
    5: Campaign(
        5,
        "EPS-RS and OPS-RS outage against SNR for two data rates",
        lambda: _pairs(_BASIC, SweepAxis.GAMMA_DB, GAMMA_GRID_DB, "rate", (0.5, 1.0)),
    ),
    6: Campaign(
        6,
        "EPS-RS and OPS-RS outage against SNR for two conversion efficiencies",
        lambda: _pairs(_BASIC, SweepAxis.GAMMA_DB, GAMMA_GRID_DB, "eta", (0.4, 0.8)),
    ),
    7: Campaign(
        7,
        "EPS-RS and OPS-RS outage against SNR for four and eight relays",
        lambda: _pairs(_BASIC, SweepAxis.GAMMA_DB, GAMMA_GRID_DB, "n_relays", (4, 8)),
    ),
    8: Campaign(
        8,
        "EPS-RS and OPS-RS outage against the number of relays",
        lambda: _pairs(
            _BASIC,
            SweepAxis.N_RELAYS,
            tuple(float(n) for n in range(1, 11)),
            "rate",
            (0.5, 1.0),
        ),
    ),
    9: Campaign(
        9,
        "Outage of all schemes against SNR",
        lambda: _pairs(_ALL, SweepAxis.GAMMA_DB, GAMMA_GRID_DB),
    ),
    10: Campaign(
        10,
        "Outage of all schemes against the number of relays",
        lambda: _pairs(_ALL, SweepAxis.N_RELAYS, tuple(float(n) for n in range(2, 9))),
    ),
}


def _apply(params: SystemParams, changes: dict[str, object]) -> SystemParams:
    for key, value in changes.items():
        if key == "n_relays":
            assert isinstance(value, int)
            params = params.with_relays(value)
        else:
            params = params.replace(**{key: value})
    return params


def run_campaign(
    number: int,
    params: SystemParams,
    gamma_db: float,
    mode: str,
    cfg: TrialConfig,
    ctl: SeriesControl,
) -> list[ResultRow]:
    campaign = CAMPAIGNS[number]
    rows: list[ResultRow] = []
    for line in campaign.curves():
        # A curve without values is a single point at the base SNR.
        values = line.values or (gamma_db,)
        rows.extend(
            curve(
                line.kind,
                _apply(params, line.changes),
                gamma_db,
                line.axis,
                values,
                mode,
                cfg,
                ctl,
            )
        )
    return rows
