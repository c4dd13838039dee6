# See LICENSE for details.

"""
ehrelay, outage analysis of energy harvesting relay selection.
"""

from __future__ import annotations

from .analytic import outage, outage_asymptotic
from .mc import TrialConfig, estimate_outage
from .model import SystemParams
from .schemes import EHB_AF, EHB_DF, EPS, OPS, Scheme, SchemeKind, tps


__all__ = [
    "EHB_AF",
    "EHB_DF",
    "EPS",
    "OPS",
    "Scheme",
    "SchemeKind",
    "SystemParams",
    "TrialConfig",
    "estimate_outage",
    "outage",
    "outage_asymptotic",
    "tps",
]
