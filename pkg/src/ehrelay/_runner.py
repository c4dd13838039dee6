# See LICENSE for details.

"""
Turn (scheme, parameters) points into result rows.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Any, Sequence

from .analytic import outage
from .mc import SweepAxis, TrialConfig, estimate_outage, plan_sweep
from .model import SystemParams
from .schemes import Scheme, SchemeKind
from .specfun import SeriesControl


COLUMNS = (
    "scheme",
    "gamma_db",
    "eta",
    "rate",
    "n_relays",
    "rho_fixed",
    "p_out_analytic",
    "p_out_mc",
    "ci_low",
    "ci_high",
    "trials",
    "seed",
    "method",
)

MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class ResultRow:
    scheme: str
    gamma_db: float
    eta: float
    rate: float
    n_relays: int
    rho_fixed: float | None = None
    p_out_analytic: float | None = None
    p_out_mc: float | None = None
    ci_low: float | None = None
    ci_high: float | None = None
    trials: int | None = None
    seed: int | None = None
    method: str | None = None

    def as_record(self) -> dict[str, Any]:
        return asdict(self)


def evaluate(
    kind: SchemeKind,
    params: SystemParams,
    gamma_db: float,
    mode: str,
    cfg: TrialConfig,
    ctl: SeriesControl,
) -> ResultRow:
    """
    Evaluate one point.  *mode* is ``analytic``, ``simulate`` or ``both``;
    cfg.seed is used as is.
    """
    analytic = outage(kind, params, ctl) if mode != "simulate" else None
    estimate = estimate_outage(kind, params, cfg) if mode != "analytic" else None

    if analytic is not None:
        method: str | None = analytic.method.value
    elif estimate is not None:
        method = MONTE_CARLO
    else:
        method = None

    return ResultRow(
        scheme=kind.scheme.value,
        gamma_db=gamma_db,
        eta=params.eta,
        rate=params.rate,
        n_relays=params.n_relays,
        rho_fixed=kind.rho if kind.scheme is Scheme.TPS else None,
        p_out_analytic=analytic.p_out if analytic is not None else None,
        p_out_mc=estimate.p_hat if estimate is not None else None,
        ci_low=estimate.ci_low if estimate is not None else None,
        ci_high=estimate.ci_high if estimate is not None else None,
        trials=estimate.trials_used if estimate is not None else None,
        seed=cfg.seed if estimate is not None else None,
        method=method,
    )


def curve(
    kind: SchemeKind,
    params: SystemParams,
    gamma_db: float,
    axis: SweepAxis,
    values: Sequence[float],
    mode: str,
    cfg: TrialConfig,
    ctl: SeriesControl,
) -> list[ResultRow]:
    """
    Evaluate *kind* along *axis*, seeded point by point as `plan_sweep` does.
    """
    return [
        evaluate(
            point.kind,
            point.params,
            point.value if axis is SweepAxis.GAMMA_DB else gamma_db,
            mode,
            point.cfg,
            ctl,
        )
        for point in plan_sweep(kind, params, axis, values, cfg)
    ]
