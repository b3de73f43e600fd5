"""Pulse protocol engine: NOON-state generation, displacement, readout.

Pulses act on :class:`~swnoon.collective.CollectiveState` as exact
two-level rotations.  A pulse of area ``theta`` and laser phase ``phi``
maps each coupled pair (lower, upper) as::

    |lower> -> cos(theta/2) |lower> - i e^{+i phi} sin(theta/2) |upper>
    |upper> -> cos(theta/2) |upper> - i e^{-i phi} sin(theta/2) |lower>

Collective pulses (ground to Rydberg) pair a branch with the branch
holding one additional Rydberg excitation carrying the beam's wave
vector; branches holding the other mode's Rydberg excitation are
blockade-frozen, and a stored Rydberg excitation whose momentum does not
match the beam is phase-mismatched and left alone.  Transfer pulses
(Rydberg to storage) move one excitation between the paired modes,
handing the momentum difference to the drive beam.

The generation sequence assembles the order-``l`` superposition

    (|l>_sa + |l>_sb) / sqrt(2)

with ``4 l + 2`` pulses.  Readout runs the inverse pulses in reverse
order, omits the inverse of the opening collective pulse, and shifts the
laser phase of the closing half-area pulse by pi so that the undisplaced
interferometer sits on its dark fringe; the ionization signal then
measures the displacement-induced phase between the two spin-wave
branches.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .collective import (
    ZERO_K,
    BasisConfig,
    Beam,
    CollectiveState,
    KCoeffs,
    Mode,
    StateError,
    _k_add,
    _k_scale,
    _k_sub,
)

__all__ = [
    "Transition",
    "PulseSpec",
    "Displace",
    "IonizeMeasure",
    "ProtocolEvent",
    "BeamGeometry",
    "ProtocolError",
    "RunResult",
    "apply_pulse",
    "displace",
    "rydberg_presence",
    "run",
    "build_generation_sequence",
    "build_readout_sequence",
    "inverse_sequence",
    "generate_noon",
    "noon_state",
    "noon_branch_configs",
]

PI = math.pi


class ProtocolError(ValueError):
    """Raised for malformed pulse sequences or event streams."""


class Transition(Enum):
    """The four driven transitions, one beam each."""

    G_RA = "g_ra"
    G_RB = "g_rb"
    RA_SA = "ra_sa"
    RB_SB = "rb_sb"

    @property
    def beam(self) -> Beam:
        return _BEAM_OF[self]

    @property
    def is_collective(self) -> bool:
        """True for ground-to-Rydberg pulses (collectively enhanced)."""
        return self in (Transition.G_RA, Transition.G_RB)

    @property
    def rydberg_mode(self) -> Mode:
        return Mode.RA if self in (Transition.G_RA, Transition.RA_SA) else Mode.RB

    @property
    def storage_mode(self) -> Mode:
        if self.is_collective:
            raise ProtocolError(f"{self} has no storage mode")
        return Mode.SA if self is Transition.RA_SA else Mode.SB


_BEAM_OF = {
    Transition.G_RA: Beam.GRA,
    Transition.RA_SA: Beam.RAS,
    Transition.G_RB: Beam.GRB,
    Transition.RB_SB: Beam.RBS,
}

_OTHER_RYDBERG = {Mode.RA: Mode.RB, Mode.RB: Mode.RA}


def _beam_unit(beam: Beam) -> KCoeffs:
    k = [0, 0, 0, 0]
    k[beam] = 1
    return tuple(k)  # type: ignore[return-value]


@dataclass(frozen=True)
class PulseSpec:
    """One resonant pulse: transition, rotation area (rad), laser phase (rad)."""

    transition: Transition
    area: float
    phase: float = 0.0

    def inverse(self) -> "PulseSpec":
        """Pulse undoing this one exactly (negated area, same phase)."""
        return replace(self, area=-self.area)


@dataclass(frozen=True)
class Displace:
    """Rigid ensemble displacement in micrometers."""

    displacement_um: Tuple[float, float, float]


@dataclass(frozen=True)
class IonizeMeasure:
    """Field-ionization detection of any Rydberg excitation."""


ProtocolEvent = Union[PulseSpec, Displace, IonizeMeasure]


@dataclass(frozen=True)
class BeamGeometry:
    """Numeric wave vectors of the four drive beams, rad/um."""

    k_gra: Tuple[float, float, float]
    k_ras: Tuple[float, float, float]
    k_grb: Tuple[float, float, float]
    k_rbs: Tuple[float, float, float]

    @classmethod
    def default(cls) -> "BeamGeometry":
        """Counter-propagating mode pair along x."""
        return cls(
            k_gra=(8.0, 0.0, 0.0),
            k_ras=(-7.9, 0.0, 0.0),
            k_grb=(-8.0, 0.0, 0.0),
            k_rbs=(7.9, 0.0, 0.0),
        )

    def beam_matrix(self) -> np.ndarray:
        """Rows are the beam wave vectors in :class:`Beam` order, (4, 3)."""
        return np.array([self.k_gra, self.k_ras, self.k_grb, self.k_rbs], float)

    def storage_k(self, mode: Mode) -> np.ndarray:
        """Momentum carried per stored excitation of s_a or s_b."""
        m = self.beam_matrix()
        if mode is Mode.SA:
            return m[Beam.GRA] - m[Beam.RAS]
        if mode is Mode.SB:
            return m[Beam.GRB] - m[Beam.RBS]
        raise ProtocolError(f"{mode} is not a storage mode")

    def fringe_k(self) -> np.ndarray:
        """Interferometric wave vector: difference of the stored momenta.

        The displacement phase between the two spin-wave branches of an
        order-``l`` superposition is ``l * fringe_k . dx``.
        """
        return self.storage_k(Mode.SA) - self.storage_k(Mode.SB)


def apply_pulse(state: CollectiveState, pulse: PulseSpec) -> CollectiveState:
    """Apply one exact two-level rotation to every coupled branch pair."""
    cos = math.cos(pulse.area / 2.0)
    sin = math.sin(pulse.area / 2.0)
    up = -1j * cmath.exp(1j * pulse.phase) * sin
    down = -1j * cmath.exp(-1j * pulse.phase) * sin
    beam_k = _beam_unit(pulse.transition.beam)
    rm = pulse.transition.rydberg_mode
    ro = _OTHER_RYDBERG[rm]

    out: dict = {}

    def add(cfg: BasisConfig, amp: complex) -> None:
        out[cfg] = out.get(cfg, 0.0 + 0.0j) + amp

    if pulse.transition.is_collective:
        for cfg, amp in state.items():
            if cfg.occupation[ro] >= 1:
                add(cfg, amp)  # blockade-frozen
                continue
            if cfg.occupation[rm] == 0:
                upper = cfg.with_mode(rm, 1, beam_k)
                add(cfg, cos * amp)
                add(upper, up * amp)
            elif cfg.k_coeffs[rm] == beam_k:
                lower = cfg.with_mode(rm, 0, ZERO_K)
                add(lower, down * amp)
                add(cfg, cos * amp)
            else:
                add(cfg, amp)  # phase-mismatched stored excitation
    else:
        sm = pulse.transition.storage_mode
        for cfg, amp in state.items():
            qr = cfg.occupation[rm]
            qs = cfg.occupation[sm]
            if qr == 1:
                # Upper member: the Rydberg excitation can drop into storage.
                gain = _k_sub(cfg.k_coeffs[rm], beam_k)
                if qs > 0 and cfg.k_coeffs[sm] != _k_scale(gain, qs):
                    raise StateError(
                        "transfer would make storage momenta non-uniform; "
                        f"cannot pair {cfg}"
                    )
                lower = cfg.with_mode(rm, 0, ZERO_K).with_mode(
                    sm, qs + 1, _k_add(cfg.k_coeffs[sm], gain)
                )
                add(lower, down * amp)
                add(cfg, cos * amp)
            elif qs >= 1:
                if cfg.occupation[ro] >= 1:
                    add(cfg, amp)  # promotion blockade-frozen
                    continue
                per = cfg.per_excitation_k(sm)
                upper = cfg.with_mode(
                    sm, qs - 1, _k_sub(cfg.k_coeffs[sm], per)
                ).with_mode(rm, 1, _k_add(per, beam_k))
                add(cfg, cos * amp)
                add(upper, up * amp)
            else:
                add(cfg, amp)  # both levels empty
    return CollectiveState(out)


def displace(
    state: CollectiveState,
    displacement_um: Sequence[float],
    geometry: BeamGeometry,
) -> CollectiveState:
    """Imprint the displacement phase exp(i K . dx) on every branch.

    K is the branch's total stored wave vector; configurations are
    untouched, so branch structure and mergers are unaffected.
    """
    dx = np.asarray(displacement_um, float)
    if dx.shape != (3,):
        raise ProtocolError("displacement must be a 3-vector (micrometers)")
    kdotdx = geometry.beam_matrix() @ dx  # phase per unit beam coefficient
    out = {}
    for cfg, amp in state.items():
        total = cfg.total_k()
        phase = (
            total[0] * kdotdx[0]
            + total[1] * kdotdx[1]
            + total[2] * kdotdx[2]
            + total[3] * kdotdx[3]
        )
        out[cfg] = amp * cmath.exp(1j * phase)
    return CollectiveState(out)


def rydberg_presence(state: CollectiveState) -> float:
    """Probability that ionization fires: any Rydberg excitation present."""
    return sum(
        abs(amp) ** 2
        for cfg, amp in state.items()
        if cfg.occupation[Mode.RA] + cfg.occupation[Mode.RB] >= 1
    )


@dataclass(frozen=True)
class RunResult:
    """Final state and, if the stream measured, the detection probability."""

    state: CollectiveState
    detection_probability: Optional[float]


def run(
    events: Sequence[ProtocolEvent],
    initial: Optional[CollectiveState] = None,
    geometry: Optional[BeamGeometry] = None,
) -> RunResult:
    """Fold an event stream over an initial state (vacuum by default)."""
    state = CollectiveState.vacuum() if initial is None else initial
    detection: Optional[float] = None
    for event in events:
        if detection is not None:
            raise ProtocolError("events after ionization measurement")
        if isinstance(event, PulseSpec):
            state = apply_pulse(state, event)
        elif isinstance(event, Displace):
            if geometry is None:
                raise ProtocolError("displacement event needs a beam geometry")
            state = displace(state, event.displacement_um, geometry)
        elif isinstance(event, IonizeMeasure):
            detection = rydberg_presence(state)
        else:
            raise ProtocolError(f"unknown event {event!r}")
    return RunResult(state, detection)


def build_generation_sequence(order: int) -> List[PulseSpec]:
    """Pulse list preparing the order-``order`` two-branch superposition.

    The opening block seeds one stored excitation in mode a superposed
    with a Rydberg excitation in mode b; each growth cycle raises both
    branch orders by one; the closing transfer parks the final mode-b
    Rydberg excitation in storage.  Total count: ``4 * order + 2``.
    """
    if order < 1:
        raise ProtocolError(f"order must be >= 1, got {order}")
    pi_a = PulseSpec(Transition.G_RA, PI)
    pi_b = PulseSpec(Transition.G_RB, PI)
    half_ta = PulseSpec(Transition.RA_SA, PI / 2.0)
    pi_ta = PulseSpec(Transition.RA_SA, PI)
    pi_tb = PulseSpec(Transition.RB_SB, PI)
    seq = [pi_a, half_ta, pi_b, pi_a, pi_b]
    for _ in range(order - 1):
        seq += [pi_a, pi_tb, pi_b, pi_ta]
    seq.append(pi_tb)
    return seq


def inverse_sequence(pulses: Sequence[PulseSpec]) -> List[PulseSpec]:
    """Exact inverse: reversed order, each pulse inverted."""
    return [p.inverse() for p in reversed(pulses)]


def build_readout_sequence(order: int) -> List[ProtocolEvent]:
    """Readout events: reversed inverse pulses, dark-fringe calibrated.

    The inverse of the opening collective pulse is omitted, leaving the
    interferometer output in the pair {one stored excitation, one
    Rydberg excitation} of mode a.  The closing half-area pulse carries
    an extra pi of laser phase, which parks the undisplaced output on
    the dark fringe of the Rydberg port.  Ends with ionization.
    """
    gen = build_generation_sequence(order)
    pulses = inverse_sequence(gen[1:])
    closing = pulses[-1]
    pulses[-1] = replace(closing, phase=closing.phase + PI)
    return [*pulses, IonizeMeasure()]


def generate_noon(order: int) -> CollectiveState:
    """Run the generation sequence on vacuum."""
    return run(build_generation_sequence(order)).state


def noon_branch_configs(order: int) -> Tuple[BasisConfig, BasisConfig]:
    """The two target configurations of the order-``order`` superposition."""
    if order < 1:
        raise ProtocolError(f"order must be >= 1, got {order}")
    branch_a = BasisConfig.make(
        (order, 0, 0, 0),
        ((order, -order, 0, 0), ZERO_K, ZERO_K, ZERO_K),
    )
    branch_b = BasisConfig.make(
        (0, order, 0, 0),
        (ZERO_K, (0, 0, order, -order), ZERO_K, ZERO_K),
    )
    return branch_a, branch_b


def noon_state(order: int) -> CollectiveState:
    """Reference equal-phase two-branch superposition of given order."""
    branch_a, branch_b = noon_branch_configs(order)
    amp = 1.0 / math.sqrt(2.0)
    return CollectiveState({branch_a: amp, branch_b: amp})
