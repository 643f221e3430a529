"""Brute-force reference search over relay positions and power splits.

Positions are drawn from a uniform rectangular lattice over the bounding
box of the upper semicircle spanning source and destination (points
outside the semicircle are discarded, and the pitch is shrunk until at
least the requested number survive).  Power splits are a uniform grid on
the full-budget split ratio.  The argmin is deterministic: ties break
toward the lower position index, then the lower split index.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .model import RadioParams, RelayState, Position, outage_exact_grid

# Split-ratio floor for the search grid; both endpoints drive the outage
# to certainty and carry no information.
RHO_FLOOR = 1e-3


class SearchRegion(Enum):
    SEMICIRCLE_UPPER = "semicircle-upper"


@dataclass(frozen=True)
class GridSpec:
    """Resolution of the brute-force grid."""

    n_power: int = 800
    n_positions: int = 3000
    region: SearchRegion = SearchRegion.SEMICIRCLE_UPPER

    def __post_init__(self):
        if self.n_power < 2:
            raise ValueError("n_power must be >= 2")
        if self.n_positions < 4:
            raise ValueError("n_positions must be >= 4")


def semicircle_lattice(separation_m: float, n_target: int) -> tuple[np.ndarray, np.ndarray]:
    """Rectangular lattice restricted to the upper semicircle of diameter L.

    Deterministic: the pitch starts at the equal-area estimate and shrinks
    by 3% until at least ``n_target`` lattice points fall inside.  Points
    are ordered row-major by (y, x).
    """
    radius = separation_m / 2.0
    area = np.pi * radius * radius / 2.0
    pitch = np.sqrt(area / n_target) * 1.05
    while True:
        xs = np.arange(0.0, separation_m + pitch / 2.0, pitch)
        ys = np.arange(0.0, radius + pitch / 2.0, pitch)
        gy, gx = np.meshgrid(ys, xs, indexing="ij")
        # semicircle centered at (L/2, 0)
        inside = (gx - separation_m / 2.0) ** 2 + gy ** 2 <= radius ** 2
        if int(inside.sum()) >= n_target:
            return gx[inside], gy[inside]
        pitch *= 0.97


def brute_force_min(
    params: RadioParams,
    spec: GridSpec,
    separation_m: float | None = None,
) -> tuple[RelayState, float]:
    """Exhaustive outage minimization over the position x split grid."""
    sep = params.separation_m if separation_m is None else separation_m
    xs, ys = semicircle_lattice(sep, spec.n_positions)
    rho = np.linspace(RHO_FLOOR, 1.0 - RHO_FLOOR, spec.n_power)
    p_i = rho * params.p_max_w
    p_r = params.p_max_w - p_i
    p_out = outage_exact_grid(
        xs[:, None], ys[:, None], p_i[None, :], p_r[None, :], sep, params
    )
    flat = int(np.argmin(p_out))
    i_pos, i_rho = divmod(flat, spec.n_power)
    best = RelayState(
        Position(float(xs[i_pos]), float(ys[i_pos])),
        float(p_i[i_rho]),
        float(p_r[i_rho]),
    )
    return best, float(p_out[i_pos, i_rho])


def min_outage_vs_separation(
    params: RadioParams,
    spec: GridSpec,
    separations_m: list,
) -> list:
    """Brute-force minimum outage for each endpoint separation."""
    if not separations_m:
        raise ValueError("separations_m must be non-empty")
    if any(l <= 0.0 for l in separations_m):
        raise ValueError("separations must be positive")
    if any(b <= a for a, b in zip(separations_m, separations_m[1:])):
        raise ValueError("separations must be strictly ascending")
    out = []
    for sep in separations_m:
        _, p_min = brute_force_min(params, spec, sep)
        out.append((sep, p_min))
    return out


def power_sweep(
    params: RadioParams,
    pos: Position,
    n_points: int,
    rho_floor: float,
    separation_m: float | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Outage versus relay transmit power at a fixed position.

    The relay power runs over a uniform grid between the floor fraction
    and its complement of the budget; the source takes the remainder.
    Returns (p_relay_w, p_out) arrays in ascending relay power.
    """
    if n_points < 2:
        raise ValueError("n_points must be >= 2")
    if not (0.0 < rho_floor < 0.5):
        raise ValueError("rho_floor must be in (0, 0.5)")
    sep = params.separation_m if separation_m is None else separation_m
    p_r = np.linspace(rho_floor, 1.0 - rho_floor, n_points) * params.p_max_w
    p_i = params.p_max_w - p_r
    p_out = outage_exact_grid(pos.x_m, pos.y_m, p_i, p_r, sep, params)
    return p_r, p_out
