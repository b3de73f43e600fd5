"""Collective-excitation state space for a blockaded four-mode ensemble.

An ensemble of N ground-state atoms shares its excitations among four
collective modes: two metastable storage modes ``s_a``, ``s_b`` and two
Rydberg modes ``r_a``, ``r_b``.  A state is a superposition of basis
configurations, each recording how many excitations sit in every mode
together with the spin-wave momentum those excitations carry.

Momentum bookkeeping is exact: every drive beam contributes its wave
vector an integer number of times, so a mode's accumulated wave vector is
stored as a 4-vector of signed integer coefficients over the four beam
wave vectors.  Two branches merge if and only if their occupations and
integer coefficients agree; floating-point wave-vector values never enter
a comparison.  Numeric wave vectors are materialized only when a
displacement phase is evaluated (see :mod:`swnoon.protocol`).

The perfect-blockade regime is built in structurally: a configuration
with more than one total Rydberg excitation cannot be constructed.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Dict, Iterator, Tuple

__all__ = [
    "Mode",
    "Beam",
    "KCoeffs",
    "BasisConfig",
    "CollectiveState",
    "StateError",
    "PRUNE_WEIGHT",
    "ZERO_K",
]

#: Branches with squared amplitude below this weight are dropped after
#: each engine operation; well below any physical interference scale.
PRUNE_WEIGHT = 1e-24


class StateError(ValueError):
    """Raised for configurations or states the engine cannot represent."""


class Mode(IntEnum):
    """The four collective modes."""

    SA = 0
    SB = 1
    RA = 2
    RB = 3

    @property
    def is_rydberg(self) -> bool:
        return self in (Mode.RA, Mode.RB)


class Beam(IntEnum):
    """The four drive beams whose wave vectors span all stored momenta.

    ``GRA``/``GRB`` drive the ground to Rydberg transitions of modes a/b;
    ``RAS``/``RBS`` drive the Rydberg to storage transfers.
    """

    GRA = 0
    RAS = 1
    GRB = 2
    RBS = 3


#: Integer beam coefficients of an accumulated wave vector.
KCoeffs = Tuple[int, int, int, int]

ZERO_K: KCoeffs = (0, 0, 0, 0)


def _k_add(a: KCoeffs, b: KCoeffs) -> KCoeffs:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3])


def _k_sub(a: KCoeffs, b: KCoeffs) -> KCoeffs:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3])


def _k_scale(a: KCoeffs, n: int) -> KCoeffs:
    return (a[0] * n, a[1] * n, a[2] * n, a[3] * n)


@dataclass(frozen=True)
class BasisConfig:
    """One basis configuration: occupations plus accumulated momenta.

    Parameters
    ----------
    occupation:
        Number of excitations in (s_a, s_b, r_a, r_b).
    k_coeffs:
        Per-mode accumulated wave vector as integer beam coefficients.

    Notes
    -----
    Construction enforces the engine invariants: non-negative
    occupations, at most one total Rydberg excitation (perfect
    blockade), and a zero accumulated wave vector on every empty mode.
    Use :meth:`make` to build a configuration with the empty-mode
    momenta canonicalized instead of rejected.
    """

    occupation: Tuple[int, int, int, int]
    k_coeffs: Tuple[KCoeffs, KCoeffs, KCoeffs, KCoeffs]

    def __post_init__(self) -> None:
        if len(self.occupation) != 4 or len(self.k_coeffs) != 4:
            raise StateError("configuration needs exactly four modes")
        if any(n < 0 for n in self.occupation):
            raise StateError(f"negative occupation: {self.occupation}")
        if self.occupation[Mode.RA] + self.occupation[Mode.RB] > 1:
            raise StateError(
                "blockade violation: more than one Rydberg excitation "
                f"in {self.occupation}"
            )
        for mode in Mode:
            if self.occupation[mode] == 0 and self.k_coeffs[mode] != ZERO_K:
                raise StateError(
                    f"empty mode {mode.name} carries momentum {self.k_coeffs[mode]}"
                )

    @classmethod
    def make(
        cls,
        occupation: Tuple[int, int, int, int],
        k_coeffs: Tuple[KCoeffs, KCoeffs, KCoeffs, KCoeffs],
    ) -> "BasisConfig":
        """Build a configuration, zeroing the momentum of empty modes."""
        canon = tuple(
            tuple(k_coeffs[m]) if occupation[m] > 0 else ZERO_K for m in range(4)
        )
        return cls(tuple(occupation), canon)  # type: ignore[arg-type]

    @classmethod
    def vacuum(cls) -> "BasisConfig":
        return cls((0, 0, 0, 0), (ZERO_K, ZERO_K, ZERO_K, ZERO_K))

    def total_k(self) -> KCoeffs:
        """Summed beam coefficients over all modes."""
        total = ZERO_K
        for k in self.k_coeffs:
            total = _k_add(total, k)
        return total

    def with_mode(self, mode: Mode, count: int, k: KCoeffs) -> "BasisConfig":
        """Copy of this configuration with one mode replaced."""
        occ = list(self.occupation)
        kc = list(self.k_coeffs)
        occ[mode] = count
        kc[mode] = k if count > 0 else ZERO_K
        return BasisConfig(tuple(occ), tuple(kc))  # type: ignore[arg-type]

    def per_excitation_k(self, mode: Mode) -> KCoeffs:
        """Wave vector carried by each excitation of a uniformly filled mode.

        Raises
        ------
        StateError
            If the mode is empty or its accumulated coefficients are not
            an integer multiple of the occupation (non-uniform filling,
            which the bookkeeping cannot split).
        """
        n = self.occupation[mode]
        if n == 0:
            raise StateError(f"mode {mode.name} is empty")
        k = self.k_coeffs[mode]
        if any(c % n for c in k):
            raise StateError(
                f"mode {mode.name} holds non-uniform momenta {k} over {n} excitations"
            )
        return (k[0] // n, k[1] // n, k[2] // n, k[3] // n)


class CollectiveState:
    """Superposition of :class:`BasisConfig` branches.

    The branch map is copied on construction and never mutated afterwards;
    engine operations return new states.  Branches below
    :data:`PRUNE_WEIGHT` are dropped on construction.
    """

    __slots__ = ("_branches",)

    def __init__(self, branches: Dict[BasisConfig, complex]):
        self._branches = {
            cfg: complex(amp)
            for cfg, amp in branches.items()
            if (amp.real * amp.real + amp.imag * amp.imag) >= PRUNE_WEIGHT
        }

    @classmethod
    def vacuum(cls) -> "CollectiveState":
        return cls({BasisConfig.vacuum(): 1.0 + 0.0j})

    def items(self) -> Iterator[Tuple[BasisConfig, complex]]:
        return iter(self._branches.items())

    def __len__(self) -> int:
        return len(self._branches)

    def amplitude(self, cfg: BasisConfig) -> complex:
        return self._branches.get(cfg, 0.0 + 0.0j)

    def norm(self) -> float:
        """Total probability, sum of squared branch amplitudes."""
        return sum(abs(a) ** 2 for a in self._branches.values())

    def overlap(self, other: "CollectiveState") -> complex:
        """Inner product <self|other> over matching configurations."""
        if len(other) < len(self._branches):
            return other.overlap(self).conjugate()
        return sum(
            amp.conjugate() * other.amplitude(cfg)
            for cfg, amp in self._branches.items()
        )

    def mode_population(self, mode: Mode, presence: bool = False) -> float:
        """Occupation-weighted population of one mode.

        With ``presence=True`` returns instead the total probability of
        branches holding at least one excitation in the mode, which is
        what an ionization detector of that mode registers.
        """
        if presence:
            return sum(
                abs(amp) ** 2
                for cfg, amp in self._branches.items()
                if cfg.occupation[mode] >= 1
            )
        return sum(
            abs(amp) ** 2 * cfg.occupation[mode]
            for cfg, amp in self._branches.items()
        )
