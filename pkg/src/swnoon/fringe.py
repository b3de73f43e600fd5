"""Interference fringes and displacement estimation.

Drives the full generate / displace / readout pipeline to produce the
order-``l`` superresolution fringe

    p(x) = sin^2( l * (dk . direction) * x / 2 ),

simulates ionization counts, and recovers an unknown displacement
offset by least-squares fitting of the same model.  The fringe period
along a scan direction is 2 pi / (l |dk . direction|); estimates are
only ever defined modulo that period.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import curve_fit

from .collective import CollectiveState
from .protocol import (
    BeamGeometry,
    Displace,
    build_generation_sequence,
    build_readout_sequence,
    run,
)

__all__ = [
    "FringeResult",
    "DisplacementEstimate",
    "EstimationError",
    "fringe_period",
    "expected_fringe_probability",
    "run_interferometer",
    "fringe_scan",
    "simulate_counts",
    "estimate_displacement",
]

COARSE_GRID_POINTS = 256


class EstimationError(RuntimeError):
    """Raised when the displacement fit cannot produce an answer."""


@dataclass(frozen=True)
class FringeResult:
    """Readout probability at one displacement along the scan axis."""

    displacement_um: float
    probability: float


@dataclass(frozen=True)
class DisplacementEstimate:
    """Fitted displacement offset, defined modulo the fringe period.

    ``ambiguous`` flags a fit whose settings span one fringe period or
    more, where aliasing makes the mod-period answer unreliable.
    """

    estimate_um: float
    stderr_um: float
    period_um: float
    ambiguous: bool


def fringe_period(order: int, delta_k_projection: float) -> float:
    """Displacement interval of one full sin^2 oscillation, um."""
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    if delta_k_projection == 0.0 or not math.isfinite(delta_k_projection):
        raise ValueError(
            f"fringe wave-vector projection must be finite and nonzero, "
            f"got {delta_k_projection}"
        )
    return 2.0 * math.pi / (order * abs(delta_k_projection))


def expected_fringe_probability(
    order: int, delta_k_projection: float, displacement_um: float
) -> float:
    """Ideal readout probability sin^2(order * dk * x / 2)."""
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    return math.sin(0.5 * order * delta_k_projection * displacement_um) ** 2


def run_interferometer(
    order: int,
    displacement_um: Sequence[float],
    geometry: Optional[BeamGeometry] = None,
) -> float:
    """Full generate / displace / readout run; Rydberg detection probability."""
    if geometry is None:
        geometry = BeamGeometry.default()
    events = [
        *build_generation_sequence(order),
        Displace(tuple(float(c) for c in displacement_um)),
        *build_readout_sequence(order),
    ]
    result = run(events, CollectiveState.vacuum(), geometry)
    assert result.detection_probability is not None
    return result.detection_probability


def _unit_direction(direction: Sequence[float]) -> np.ndarray:
    vec = np.asarray(direction, dtype=float)
    if vec.shape != (3,):
        raise ValueError(f"direction must be a 3-vector, got shape {vec.shape}")
    norm = float(np.linalg.norm(vec))
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"direction must be a unit vector, |v| = {norm!r}")
    return vec


def fringe_scan(
    order: int,
    direction: Sequence[float],
    displacements_um: Sequence[float],
    geometry: Optional[BeamGeometry] = None,
) -> List[FringeResult]:
    """Readout probability at each scalar displacement along a unit axis."""
    axis = _unit_direction(direction)
    out = []
    for x in displacements_um:
        p = run_interferometer(order, tuple(float(x) * axis), geometry)
        out.append(FringeResult(displacement_um=float(x), probability=p))
    return out


def simulate_counts(probability: float, shots: int, seed: int) -> int:
    """Binomial ionization-count draw, reproducible for a fixed seed."""
    if not 0.0 <= probability <= 1.0:
        raise ValueError(f"probability must be in [0, 1], got {probability}")
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    rng = np.random.default_rng(seed)
    return int(rng.binomial(shots, probability))


def estimate_displacement(
    samples: Sequence[Tuple[float, int, int]],
    order: int,
    delta_k_projection: float,
) -> DisplacementEstimate:
    """Least-squares fit of the fringe offset from (setting, shots, count).

    Fits p(x) = sin^2(order * dk * (x - x0) / 2) for the offset x0 and
    returns it reduced into [0, period).  A coarse scan over one period
    seeds the fit so the optimizer cannot be trapped half a fringe away.
    Raises EstimationError on fewer than 3 distinct settings, degenerate
    counts, or non-convergence.
    """
    period = fringe_period(order, delta_k_projection)
    xs, ps = [], []
    for i, (setting, shots, count) in enumerate(samples):
        if shots < 1:
            raise EstimationError(f"sample {i}: shots must be >= 1, got {shots}")
        if not 0 <= count <= shots:
            raise EstimationError(
                f"sample {i}: count {count} outside [0, {shots}]"
            )
        xs.append(float(setting))
        ps.append(count / shots)
    if len(set(xs)) < 3:
        raise EstimationError(
            f"need at least 3 distinct displacement settings, got {len(set(xs))}"
        )
    x = np.asarray(xs)
    p = np.asarray(ps)
    ambiguous = (x.max() - x.min()) >= period

    half_rate = 0.5 * order * delta_k_projection

    def model(xv: np.ndarray, x0: float) -> np.ndarray:
        return np.sin(half_rate * (xv - x0)) ** 2

    offsets = np.linspace(0.0, period, COARSE_GRID_POINTS, endpoint=False)
    sse = ((model(x[None, :], offsets[:, None]) - p[None, :]) ** 2).sum(axis=1)
    x0_seed = float(offsets[int(np.argmin(sse))])

    try:
        popt, pcov = curve_fit(
            model, x, p, p0=[x0_seed], xtol=1e-12, ftol=1e-12, maxfev=10000
        )
    except RuntimeError as exc:
        raise EstimationError(f"fringe fit did not converge: {exc}") from exc
    variance = float(pcov[0, 0])
    if not math.isfinite(variance) or variance < 0.0:
        raise EstimationError(
            "fringe fit covariance is singular; settings do not constrain "
            "the offset"
        )
    estimate = float(popt[0]) % period
    return DisplacementEstimate(
        estimate_um=estimate,
        stderr_um=math.sqrt(variance),
        period_um=period,
        ambiguous=bool(ambiguous),
    )
