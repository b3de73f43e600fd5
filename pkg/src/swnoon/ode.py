"""Error-channel amplitude equations for blockaded collective pulses.

Perfect blockade makes every protocol pulse an exact two-level rotation;
the residual error channels live in small linear systems of collective
amplitudes driven at the blockade-shifted double-excitation level.  All
systems here are resonant square pulses, so the amplitude vector obeys

    dy/dt = M y,    M = -i H,    H time-independent,

with the non-Hermitian parts of ``H`` carrying spontaneous decay.

Three channels matter:

* same-mode double excitation during a collective pi pulse
  (:func:`integrate_same_mode`),
* cross-mode leakage while a stored Rydberg excitation must block the
  other mode's collective pulse (:func:`integrate_cross_mode`),
* double promotion during a storage transfer pulse on a branch already
  holding stored excitations (:func:`integrate_transfer`).

Plain exponential survival of a parked Rydberg excitation is
:func:`decay_survival`.

Units: Rabi frequencies and energy shifts are angular (rad/us), decay
rates are 1/us, durations are us.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

__all__ = [
    "IntegrationError",
    "OdeParams",
    "DEFAULT_TOLERANCE",
    "MAX_STEPS",
    "integrate_general",
    "integrate_trajectory",
    "same_mode_hamiltonian",
    "cross_mode_hamiltonian",
    "transfer_hamiltonian",
    "excitation_pulse_duration",
    "transfer_pulse_duration",
    "integrate_same_mode",
    "integrate_cross_mode",
    "integrate_transfer",
    "decay_survival",
]

DEFAULT_TOLERANCE = 1e-12
MAX_STEPS = 10_000_000


class IntegrationError(RuntimeError):
    """Raised when the adaptive integrator cannot meet its contract."""


@dataclass(frozen=True)
class OdeParams:
    """Parameters of one driven channel.

    ``rabi`` is the single-atom Rabi frequency of the drive: the
    collective excitation channels enhance it by sqrt(n_atoms), the
    transfer channel by sqrt(step_order) (and sqrt(2 (step_order - 1))
    on the doubly promoted rung).  ``blockade_shift`` detunes the
    double-excitation level; ``decay_rate`` is the Rydberg decay rate.
    """

    rabi: float
    blockade_shift: float
    decay_rate: float
    n_atoms: float = 1.0
    step_order: int = 1

    def __post_init__(self) -> None:
        if not self.rabi > 0.0:
            raise ValueError(f"rabi must be positive, got {self.rabi}")
        if self.blockade_shift < 0.0:
            raise ValueError(f"blockade_shift must be >= 0, got {self.blockade_shift}")
        if self.decay_rate < 0.0:
            raise ValueError(f"decay_rate must be >= 0, got {self.decay_rate}")
        if not self.n_atoms >= 1.0:
            raise ValueError(f"n_atoms must be >= 1, got {self.n_atoms}")
        if self.step_order < 1:
            raise ValueError(f"step_order must be >= 1, got {self.step_order}")


# Dormand-Prince 5(4) tableau.  The advanced solution is 5th order; the
# embedded 4th-order difference drives the step controller.
_DP_A = np.array(
    [
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [
            19372.0 / 6561.0,
            -25360.0 / 2187.0,
            64448.0 / 6561.0,
            -212.0 / 729.0,
            0.0,
            0.0,
        ],
        [
            9017.0 / 3168.0,
            -355.0 / 33.0,
            46732.0 / 5247.0,
            49.0 / 176.0,
            -5103.0 / 18656.0,
            0.0,
        ],
        [
            35.0 / 384.0,
            0.0,
            500.0 / 1113.0,
            125.0 / 192.0,
            -2187.0 / 6784.0,
            11.0 / 84.0,
        ],
    ]
)
_DP_ERR = np.array(
    [
        35.0 / 384.0 - 5179.0 / 57600.0,
        0.0,
        500.0 / 1113.0 - 7571.0 / 16695.0,
        125.0 / 192.0 - 393.0 / 640.0,
        -2187.0 / 6784.0 + 92097.0 / 339200.0,
        11.0 / 84.0 - 187.0 / 2100.0,
        -1.0 / 40.0,
    ]
)

_OK, _UNDERFLOW, _EXHAUSTED = 0, 1, 2


@njit(cache=True)
def _dp45(gen, y0, t_end, tol, max_steps, a, ew):  # pragma: no cover - jitted
    n = y0.shape[0]
    y = y0.copy()
    k = np.empty((7, n), np.complex128)
    work = np.empty(n, np.complex128)
    for i in range(n):
        acc = 0.0 + 0.0j
        for j in range(n):
            acc += gen[i, j] * y[j]
        k[0, i] = acc

    scale = 0.0
    for i in range(n):
        for j in range(n):
            m = abs(gen[i, j])
            if m > scale:
                scale = m
    h = t_end if scale == 0.0 else min(t_end, 0.01 / scale)
    hmin = t_end * 1e-15

    t = 0.0
    steps = 0
    while t < t_end:
        if steps >= max_steps:
            return y, _EXHAUSTED, steps
        steps += 1
        if h > t_end - t:
            h = t_end - t

        for s in range(1, 6):
            for i in range(n):
                acc = 0.0 + 0.0j
                for j in range(s):
                    acc += a[s, j] * k[j, i]
                work[i] = y[i] + h * acc
            for i in range(n):
                acc = 0.0 + 0.0j
                for j in range(n):
                    acc += gen[i, j] * work[j]
                k[s, i] = acc
        # Stage 7 argument doubles as the 5th-order solution (FSAL).
        for i in range(n):
            acc = 0.0 + 0.0j
            for j in range(6):
                acc += a[6, j] * k[j, i]
            work[i] = y[i] + h * acc
        for i in range(n):
            acc = 0.0 + 0.0j
            for j in range(n):
                acc += gen[i, j] * work[j]
            k[6, i] = acc

        err = 0.0
        for i in range(n):
            acc = 0.0 + 0.0j
            for j in range(7):
                acc += ew[j] * k[j, i]
            m = abs(h * acc)
            if m > err:
                err = m

        if err <= tol:
            t += h
            for i in range(n):
                y[i] = work[i]
                k[0, i] = k[6, i]
            if err == 0.0:
                h *= 5.0
            else:
                fac = 0.9 * (tol / err) ** 0.2
                if fac > 5.0:
                    fac = 5.0
                elif fac < 0.2:
                    fac = 0.2
                h *= fac
        else:
            fac = 0.9 * (tol / err) ** 0.2
            if fac < 0.2:
                fac = 0.2
            h *= fac
            if h < hmin:
                return y, _UNDERFLOW, steps
    return y, _OK, steps


def integrate_general(
    generator: np.ndarray,
    initial: np.ndarray,
    duration: float,
    tolerance: float = DEFAULT_TOLERANCE,
    max_steps: int = MAX_STEPS,
) -> np.ndarray:
    """Integrate dy/dt = generator @ y over [0, duration].

    Adaptive embedded Runge-Kutta 5(4) with the local error of each
    step bounded by ``tolerance`` in the max norm.

    Parameters
    ----------
    generator:
        Square complex matrix, time independent.
    initial:
        Complex amplitude vector at t = 0.
    duration:
        Integration time, >= 0.
    tolerance:
        Absolute per-step local error bound.

    Returns
    -------
    numpy.ndarray
        Amplitude vector at t = duration.
    """
    gen = np.ascontiguousarray(generator, np.complex128)
    y0 = np.ascontiguousarray(initial, np.complex128)
    if gen.ndim != 2 or gen.shape[0] != gen.shape[1]:
        raise ValueError(f"generator must be square, got shape {gen.shape}")
    if y0.shape != (gen.shape[0],):
        raise ValueError(
            f"initial shape {y0.shape} does not match generator {gen.shape}"
        )
    if not np.all(np.isfinite(gen.view(np.float64))) or not np.all(
        np.isfinite(y0.view(np.float64))
    ):
        raise ValueError("generator and initial state must be finite")
    if not tolerance > 0.0:
        raise ValueError(f"tolerance must be positive, got {tolerance}")
    if duration < 0.0:
        raise ValueError(f"duration must be >= 0, got {duration}")
    if duration == 0.0:
        return y0.copy()
    y, status, steps = _dp45(
        gen, y0, float(duration), float(tolerance), int(max_steps), _DP_A, _DP_ERR
    )
    if status == _UNDERFLOW:
        raise IntegrationError(
            f"step size underflow after {steps} steps "
            f"(duration={duration}, tolerance={tolerance})"
        )
    if status == _EXHAUSTED:
        raise IntegrationError(
            f"step budget exhausted ({steps} steps, duration={duration}, "
            f"tolerance={tolerance})"
        )
    return y


def integrate_trajectory(
    generator: np.ndarray,
    initial: np.ndarray,
    times: np.ndarray,
    tolerance: float = DEFAULT_TOLERANCE,
    max_steps: int = MAX_STEPS,
) -> np.ndarray:
    """Amplitude vectors at the given ascending sample times."""
    times = np.asarray(times, float)
    if times.ndim != 1 or len(times) == 0:
        raise ValueError("times must be a non-empty 1-d array")
    if times[0] < 0.0 or np.any(np.diff(times) < 0.0):
        raise ValueError("times must be ascending and non-negative")
    out = np.empty((len(times), len(initial)), np.complex128)
    y = np.asarray(initial, np.complex128)
    t_prev = 0.0
    for i, t in enumerate(times):
        y = integrate_general(generator, y, t - t_prev, tolerance, max_steps)
        out[i] = y
        t_prev = t
    return out


def same_mode_hamiltonian(params: OdeParams) -> np.ndarray:
    """Three-level system for double excitation of the driven mode.

    Levels: (no excitation, one collective excitation, blockade-shifted
    double excitation), couplings sqrt(N) Omega and sqrt(2 N) Omega.
    """
    oc = math.sqrt(params.n_atoms) * params.rabi
    o2 = math.sqrt(2.0 * params.n_atoms) * params.rabi
    g = params.decay_rate
    return np.array(
        [
            [0.0, -oc / 2.0, 0.0],
            [-oc / 2.0, -0.5j * g, -o2 / 2.0],
            [0.0, -o2 / 2.0, params.blockade_shift - 1.0j * g],
        ],
        np.complex128,
    )


def cross_mode_hamiltonian(params: OdeParams) -> np.ndarray:
    """Two-level system for a collective pulse hitting a blocked branch.

    Levels: (stored single Rydberg excitation, shifted cross-mode double
    excitation); the branch should stay put for the full pulse.
    """
    oc = math.sqrt(params.n_atoms) * params.rabi
    return np.array(
        [
            [0.0, -oc / 2.0],
            [-oc / 2.0, params.blockade_shift - 0.5j * params.decay_rate],
        ],
        np.complex128,
    )


def transfer_hamiltonian(params: OdeParams) -> np.ndarray:
    """Three-level system for a storage transfer at step ``step_order``.

    Levels: (all excitations stored, one Rydberg excitation retained,
    blockade-shifted double Rydberg), couplings sqrt(q) and
    sqrt(2 (q - 1)) times the transfer Rabi frequency.
    """
    q = params.step_order
    o1 = math.sqrt(q) * params.rabi
    o2 = math.sqrt(2.0 * (q - 1)) * params.rabi
    g = params.decay_rate
    return np.array(
        [
            [0.0, -o1 / 2.0, 0.0],
            [-o1 / 2.0, -0.5j * g, -o2 / 2.0],
            [0.0, -o2 / 2.0, params.blockade_shift - 1.0j * g],
        ],
        np.complex128,
    )


def excitation_pulse_duration(params: OdeParams) -> float:
    """Pi-pulse duration of the collective excitation drive."""
    return math.pi / (math.sqrt(params.n_atoms) * params.rabi)


def transfer_pulse_duration(params: OdeParams) -> float:
    """Pi-pulse duration of the storage transfer at step ``step_order``."""
    return math.pi / (math.sqrt(params.step_order) * params.rabi)


def integrate_same_mode(
    params: OdeParams,
    tolerance: float = DEFAULT_TOLERANCE,
    max_steps: int = MAX_STEPS,
) -> float:
    """Success probability of one collective excitation pi pulse.

    Probability that the pulse deposits exactly one collective Rydberg
    excitation, given decay and leakage into the blockade-shifted
    double-excitation level.
    """
    y = integrate_general(
        -1j * same_mode_hamiltonian(params),
        np.array([1.0, 0.0, 0.0], np.complex128),
        excitation_pulse_duration(params),
        tolerance,
        max_steps,
    )
    return float(abs(y[1]) ** 2)


def integrate_cross_mode(
    params: OdeParams,
    tolerance: float = DEFAULT_TOLERANCE,
    max_steps: int = MAX_STEPS,
) -> float:
    """Hold probability of a blocked branch during the other mode's pulse."""
    y = integrate_general(
        -1j * cross_mode_hamiltonian(params),
        np.array([1.0, 0.0], np.complex128),
        excitation_pulse_duration(params),
        tolerance,
        max_steps,
    )
    return float(abs(y[0]) ** 2)


def integrate_transfer(
    params: OdeParams,
    tolerance: float = DEFAULT_TOLERANCE,
    max_steps: int = MAX_STEPS,
) -> float:
    """Success probability of one storage transfer pi pulse.

    Probability that the retained Rydberg excitation joins the stored
    ones, given decay and double-promotion leakage.
    """
    y = integrate_general(
        -1j * transfer_hamiltonian(params),
        np.array([0.0, 1.0, 0.0], np.complex128),
        transfer_pulse_duration(params),
        tolerance,
        max_steps,
    )
    return float(abs(y[0]) ** 2)


def decay_survival(decay_rate: float, duration: float) -> float:
    """Survival probability of a parked excitation, exp(-rate * time)."""
    if decay_rate < 0.0:
        raise ValueError(f"decay_rate must be >= 0, got {decay_rate}")
    if duration < 0.0:
        raise ValueError(f"duration must be >= 0, got {duration}")
    return math.exp(-decay_rate * duration)
