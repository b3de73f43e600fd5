"""Experimental feasibility estimates for a blockaded ensemble.

Maps lab-side knobs (principal quantum number, cloud radius, density)
onto the quantities the protocol cares about: the worst-case pairwise
level shift across the cloud, the enclosed atom number, and the
resulting error budget and fidelity at a requested interferometer
order.

The pair interaction uses the standard alkali van der Waals form
``C6(n) / r^6`` with a polynomial fit of the ``C6`` coefficient in the
principal quantum number (rubidium ns-state values by default); the fit
is trusted for n roughly between 30 and 150 and a warning is attached
outside that range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .budget import (
    DEFAULT_BRACKET,
    MHZ_TO_ANGULAR,
    atom_number_error,
    fidelity_from_errors,
    lifetime_to_decay_rate,
    success_probability,
)

__all__ = [
    "BOHR_PER_UM",
    "MHZ_PER_HARTREE",
    "VdwCoefficients",
    "EnsembleSpec",
    "FeasibilityReport",
    "energy_shift",
    "min_pair_shift",
    "atom_number",
    "feasibility_report",
]

#: Bohr radii per micrometre.
BOHR_PER_UM = 1.8897e4

#: MHz per Hartree (atomic unit of energy over h).
MHZ_PER_HARTREE = 6.5797e9

#: Principal-quantum-number window where the C6 fit is trusted.
FIT_RANGE = (30, 150)

#: Accepted shortfall of the achieved shift against its target; the
#: budget degrades only quadratically this close to the design point.
SHIFT_SLACK = 0.10


@dataclass(frozen=True)
class VdwCoefficients:
    """Polynomial fit C6 = n^11 (c0 + c1 n + c2 n^2) in atomic units.

    Defaults describe rubidium ns Rydberg pair states; the overall sign
    is attractive (energy lowered), carried separately so the magnitude
    stays positive.
    """

    c0: float = 13.0
    c1: float = -0.85
    c2: float = 0.0034

    def c6_au(self, principal_n: int) -> float:
        n = float(principal_n)
        return n**11 * (self.c0 + self.c1 * n + self.c2 * n * n)


@dataclass(frozen=True)
class EnsembleSpec:
    """A spherical cloud inside the blockade radius."""

    principal_n: int = 100
    radius_um: float = 3.8
    density_per_cm3: float = 1.7e12

    def __post_init__(self) -> None:
        if self.principal_n < 1:
            raise ValueError(f"principal_n must be >= 1, got {self.principal_n}")
        if not self.radius_um > 0.0:
            raise ValueError(f"radius must be positive, got {self.radius_um}")
        if not self.density_per_cm3 > 0.0:
            raise ValueError(
                f"density must be positive, got {self.density_per_cm3}"
            )


@dataclass(frozen=True)
class FeasibilityReport:
    """Summary verdict for one ensemble and interferometer order."""

    ensemble: EnsembleSpec
    order: int
    lifetime_us: float
    shift_mhz: float
    shift_sign: int
    target_shift_mhz: float
    shift_ok: bool
    n_atoms: float
    p_success: float
    e_protocol: float
    target_error: float
    error_ok: bool
    e_atom_number: float
    fidelity: float
    warnings: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def feasible(self) -> bool:
        return self.shift_ok and self.error_ok


def energy_shift(
    principal_n: int,
    separation_um: float,
    coefficients: VdwCoefficients = VdwCoefficients(),
) -> Tuple[float, int]:
    """Pairwise van der Waals shift magnitude (MHz) and its sign.

    The sign is -1 for an attractive pair interaction (the usual case
    for the default coefficients); the blockade only needs the
    magnitude.
    """
    if principal_n < 1:
        raise ValueError(f"principal_n must be >= 1, got {principal_n}")
    if not separation_um > 0.0:
        raise ValueError(f"separation must be positive, got {separation_um}")
    c6 = coefficients.c6_au(principal_n)
    r_bohr = separation_um * BOHR_PER_UM
    shift_au = c6 / r_bohr**6
    shift_mhz = shift_au * MHZ_PER_HARTREE
    sign = -1 if shift_mhz < 0.0 else 1
    return abs(shift_mhz), sign


def fit_range_warning(principal_n: int) -> Optional[str]:
    lo, hi = FIT_RANGE
    if lo <= principal_n <= hi:
        return None
    return (
        f"C6 fit extrapolated: principal_n={principal_n} outside "
        f"trusted range [{lo}, {hi}]"
    )


def min_pair_shift(
    spec: EnsembleSpec,
    coefficients: VdwCoefficients = VdwCoefficients(),
) -> Tuple[float, int]:
    """Worst-case (smallest) pair shift in the cloud, at separation 2R."""
    return energy_shift(spec.principal_n, 2.0 * spec.radius_um, coefficients)


def atom_number(density_per_cm3: float, radius_um: float) -> float:
    """Expected atom count of a uniform sphere."""
    if not density_per_cm3 > 0.0:
        raise ValueError(f"density must be positive, got {density_per_cm3}")
    if not radius_um > 0.0:
        raise ValueError(f"radius must be positive, got {radius_um}")
    volume_cm3 = (4.0 / 3.0) * math.pi * radius_um**3 * 1e-12
    return density_per_cm3 * volume_cm3


def feasibility_report(
    spec: EnsembleSpec = EnsembleSpec(),
    order: int = 20,
    lifetime_us: float = 300.0,
    target_shift_mhz: float = 300.0,
    target_error: float = 0.05,
    coefficients: VdwCoefficients = VdwCoefficients(),
    bracket: Tuple[float, float] = DEFAULT_BRACKET,
) -> FeasibilityReport:
    """Assess one ensemble against shift and protocol-error targets.

    The achieved worst-case shift may undershoot the target by up to
    ``SHIFT_SLACK`` (10%) and still pass, since the error budget is
    evaluated at the achieved shift anyway; the error target is applied
    to that budget with no slack.
    """
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    if not target_shift_mhz > 0.0:
        raise ValueError(
            f"target shift must be positive, got {target_shift_mhz}"
        )
    if not 0.0 < target_error < 1.0:
        raise ValueError(f"target error must be in (0, 1), got {target_error}")
    warnings: List[str] = []
    fit_warn = fit_range_warning(spec.principal_n)
    if fit_warn is not None:
        warnings.append(fit_warn)

    shift_mhz, sign = min_pair_shift(spec, coefficients)
    shift_ok = shift_mhz >= (1.0 - SHIFT_SLACK) * target_shift_mhz
    n_atoms = atom_number(spec.density_per_cm3, spec.radius_um)
    if n_atoms < 1.0:
        raise ValueError(
            f"ensemble holds {n_atoms:.3g} atoms on average; need >= 1"
        )
    if n_atoms < 4.0 * order:
        warnings.append(
            f"atom number {n_atoms:.0f} is small for order {order}; "
            "ensemble-size dispersion dominates the budget"
        )

    budget = success_probability(
        order,
        n_atoms,
        MHZ_TO_ANGULAR * shift_mhz,
        lifetime_to_decay_rate(lifetime_us),
        bracket,
    )
    e_atoms = atom_number_error(order, n_atoms)
    return FeasibilityReport(
        ensemble=spec,
        order=order,
        lifetime_us=lifetime_us,
        shift_mhz=shift_mhz,
        shift_sign=sign,
        target_shift_mhz=target_shift_mhz,
        shift_ok=shift_ok,
        n_atoms=n_atoms,
        p_success=budget.p_success,
        e_protocol=budget.e_protocol,
        target_error=target_error,
        error_ok=budget.e_protocol <= target_error,
        e_atom_number=e_atoms,
        fidelity=fidelity_from_errors(budget.e_protocol, e_atoms),
        warnings=tuple(warnings),
    )
