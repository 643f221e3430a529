"""Decibel <-> linear unit conversions.

All model code works in linear units (watts, meters); dBm and dB appear
only at the configuration boundary.
"""

import math


def dbm_to_watts(p_dbm: float) -> float:
    """Convert a power level in dBm to watts."""
    return 10.0 ** ((p_dbm - 30.0) / 10.0)


def watts_to_dbm(p_w: float) -> float:
    """Convert a power in watts to dBm. Requires p_w > 0."""
    if p_w <= 0.0:
        raise ValueError("watts_to_dbm requires a strictly positive power")
    return 30.0 + 10.0 * math.log10(p_w)


def db_to_linear(x_db: float) -> float:
    """Convert a dB ratio to a linear ratio."""
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    """Convert a linear ratio to dB. Requires x > 0."""
    if x <= 0.0:
        raise ValueError("linear_to_db requires a strictly positive ratio")
    return 10.0 * math.log10(x)
