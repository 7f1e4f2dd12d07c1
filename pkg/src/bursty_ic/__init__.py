"""Simulation and analysis of two-user parallel bursty interference channels
with output feedback."""

from .capacity_ld import RateRegion, corner_points, delta, region, sym_capacity
from .gn_analysis import gdof, gn_region, separability
from .ld_channel import ChannelSession, ConfigError, SubcarrierConfig, make_configs
from .results import DecodeFailure, SimResult
from .state_process import (
    JointStateDistribution,
    fractional_partition,
    make_identical,
    make_iid,
)

__all__ = [
    "RateRegion", "corner_points", "delta", "region", "sym_capacity",
    "gdof", "gn_region", "separability",
    "ChannelSession", "ConfigError", "SubcarrierConfig", "make_configs",
    "DecodeFailure", "SimResult",
    "JointStateDistribution", "fractional_partition", "make_identical", "make_iid",
]
