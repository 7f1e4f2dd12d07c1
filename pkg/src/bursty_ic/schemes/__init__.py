"""Achievability schemes over the deterministic channel."""

from .audit import AuditReport, causality_audit
from .engine import Messages, run_engine
from .mds import MdsError, mds_combine, mds_recover
from .plan import LanePlan, SchemePlan, plan_levels
from .runners import (
    run_bursty_relay,
    run_corner,
    run_multicarrier,
    run_single_strong,
    run_single_weak,
)

__all__ = [
    "AuditReport", "causality_audit", "Messages", "run_engine", "MdsError",
    "mds_combine", "mds_recover", "LanePlan", "SchemePlan", "plan_levels",
    "run_bursty_relay", "run_corner", "run_multicarrier", "run_single_strong",
    "run_single_weak",
]
