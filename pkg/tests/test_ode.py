import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import expm_propagate, rk4_power_propagate, two_level_amplitudes
from swnoon.ode import (
    IntegrationError,
    OdeParams,
    cross_mode_hamiltonian,
    decay_survival,
    excitation_pulse_duration,
    integrate_cross_mode,
    integrate_general,
    integrate_same_mode,
    integrate_trajectory,
    integrate_transfer,
    same_mode_hamiltonian,
    transfer_hamiltonian,
    transfer_pulse_duration,
)

TWO_PI = 2.0 * math.pi


def test_params_validation():
    with pytest.raises(ValueError):
        OdeParams(rabi=0.0, blockade_shift=1.0, decay_rate=0.0)
    with pytest.raises(ValueError):
        OdeParams(rabi=1.0, blockade_shift=-1.0, decay_rate=0.0)
    with pytest.raises(ValueError):
        OdeParams(rabi=1.0, blockade_shift=1.0, decay_rate=-0.1)
    with pytest.raises(ValueError):
        OdeParams(rabi=1.0, blockade_shift=1.0, decay_rate=0.0, n_atoms=0.5)
    with pytest.raises(ValueError):
        OdeParams(rabi=1.0, blockade_shift=1.0, decay_rate=0.0, step_order=0)


def test_pulse_durations():
    p = OdeParams(rabi=TWO_PI, blockade_shift=0.0, decay_rate=0.0, n_atoms=400.0, step_order=9)
    assert excitation_pulse_duration(p) == pytest.approx(math.pi / (20.0 * TWO_PI))
    assert transfer_pulse_duration(p) == pytest.approx(math.pi / (3.0 * TWO_PI))


def test_zero_generator_returns_initial():
    y0 = np.array([0.3 + 0.1j, -0.2j, 0.5], complex)
    y = integrate_general(np.zeros((3, 3), complex), y0, 1.7)
    assert np.allclose(y, y0, atol=1e-15)


def test_diagonal_generator_pure_phase():
    lam = 3.7
    gen = np.diag([-1j * lam, -1j * lam, -1j * lam])
    y0 = np.array([1.0, 0.5j, -0.25], complex)
    y = integrate_general(gen, y0, 2.0, tolerance=1e-14)
    assert np.allclose(y, y0 * np.exp(-1j * lam * 2.0), rtol=0.0, atol=1e-12)
    assert np.max(np.abs(np.abs(y) - np.abs(y0))) <= 1e-12


def test_integrate_general_validation():
    gen = np.zeros((3, 3), complex)
    y0 = np.zeros(3, complex)
    with pytest.raises(ValueError):
        integrate_general(np.zeros((3, 2), complex), y0, 1.0)
    with pytest.raises(ValueError):
        integrate_general(gen, np.zeros(2, complex), 1.0)
    with pytest.raises(ValueError):
        integrate_general(gen, y0, -1.0)
    with pytest.raises(ValueError):
        integrate_general(gen, y0, 1.0, tolerance=0.0)
    bad = gen.copy()
    bad[0, 0] = np.nan
    with pytest.raises(ValueError):
        integrate_general(bad, y0, 1.0)


def test_step_budget_exhaustion_raises():
    p = OdeParams(rabi=TWO_PI, blockade_shift=TWO_PI * 100.0, decay_rate=0.0, n_atoms=400.0)
    gen = -1j * same_mode_hamiltonian(p)
    y0 = np.array([1.0, 0.0, 0.0], complex)
    with pytest.raises(IntegrationError):
        integrate_general(gen, y0, excitation_pulse_duration(p), max_steps=10)


@pytest.mark.parametrize("n_atoms,shift_mhz", [(1.0, 0.0), (400.0, 50.0), (100.0, 300.0), (25.0, 700.0), (900.0, 10.0)])
def test_same_mode_matches_expm_oracle_undamped(n_atoms, shift_mhz):
    p = OdeParams(rabi=TWO_PI, blockade_shift=TWO_PI * shift_mhz, decay_rate=0.0, n_atoms=n_atoms)
    h = same_mode_hamiltonian(p)
    dt = excitation_pulse_duration(p)
    y = integrate_general(-1j * h, np.array([1, 0, 0], complex), dt)
    ref = expm_propagate(h, [1, 0, 0], dt)
    assert np.max(np.abs(y - ref)) <= 1e-8
    assert integrate_same_mode(p) == pytest.approx(abs(ref[1]) ** 2, abs=1e-8)


def test_transfer_matches_expm_oracle_undamped():
    p = OdeParams(rabi=TWO_PI, blockade_shift=0.0, decay_rate=0.0, step_order=2)
    h = transfer_hamiltonian(p)
    dt = transfer_pulse_duration(p)
    y = integrate_general(-1j * h, np.array([0, 1, 0], complex), dt)
    ref = expm_propagate(h, [0, 1, 0], dt)
    assert np.max(np.abs(y - ref)) <= 1e-8
    assert integrate_transfer(p) == pytest.approx(abs(ref[0]) ** 2, abs=1e-8)


def test_damped_system_matches_rk4_power_oracle():
    p = OdeParams(rabi=TWO_PI, blockade_shift=TWO_PI * 40.0, decay_rate=0.05, n_atoms=200.0)
    h = same_mode_hamiltonian(p)
    dt = excitation_pulse_duration(p)
    y = integrate_general(-1j * h, np.array([1, 0, 0], complex), dt)
    ref = rk4_power_propagate(h, [1, 0, 0], dt)
    assert np.max(np.abs(y - ref)) <= 1e-9


@given(
    st.floats(0.1, 50.0),
    st.floats(0.0, 500.0),
    st.floats(0.0, 2.0),
)
@settings(max_examples=25, deadline=None)
def test_cross_mode_matches_closed_form(rabi_mhz, shift_mhz, decay):
    p = OdeParams(rabi=TWO_PI * rabi_mhz, blockade_shift=TWO_PI * shift_mhz, decay_rate=decay, n_atoms=64.0)
    dt = excitation_pulse_duration(p)
    oc = math.sqrt(p.n_atoms) * p.rabi
    c0, c1 = two_level_amplitudes(-oc / 2.0, p.blockade_shift - 0.5j * p.decay_rate, dt)
    y = integrate_general(-1j * cross_mode_hamiltonian(p), np.array([1, 0], complex), dt)
    assert abs(y[0] - c0) <= 1e-10
    assert abs(y[1] - c1) <= 1e-10
    assert integrate_cross_mode(p) == pytest.approx(abs(c0) ** 2, abs=1e-10)


def test_norm_conserved_undamped():
    p = OdeParams(rabi=TWO_PI, blockade_shift=TWO_PI * 300.0, decay_rate=0.0, n_atoms=400.0)
    dt = excitation_pulse_duration(p)
    y = integrate_general(-1j * same_mode_hamiltonian(p), np.array([1, 0, 0], complex), dt)
    assert abs(float(np.sum(np.abs(y) ** 2)) - 1.0) <= 1e-10


def test_damping_monotone_in_time():
    p = OdeParams(rabi=TWO_PI, blockade_shift=TWO_PI * 30.0, decay_rate=0.4, n_atoms=100.0)
    dt = excitation_pulse_duration(p)
    times = np.linspace(dt / 100.0, dt, 100)
    traj = integrate_trajectory(-1j * same_mode_hamiltonian(p), np.array([1, 0, 0], complex), times)
    norms = np.sum(np.abs(traj) ** 2, axis=1)
    assert np.all(np.diff(norms) <= 1e-12)
    assert norms[0] <= 1.0 + 1e-12


def test_resonant_cross_mode_fully_transfers():
    p = OdeParams(rabi=TWO_PI, blockade_shift=0.0, decay_rate=0.0, n_atoms=400.0)
    assert integrate_cross_mode(p) == pytest.approx(0.0, abs=1e-10)


def test_cross_mode_hold_probability_detuned():
    p = OdeParams(rabi=TWO_PI * 1e-3, blockade_shift=TWO_PI, decay_rate=0.0, n_atoms=1.0)
    assert integrate_cross_mode(p) >= 1.0 - 3e-6


def test_strong_blockade_limits():
    # collective pi pulse against a huge shift: exact two-level behavior
    p = OdeParams(rabi=TWO_PI, blockade_shift=TWO_PI * 1e6, decay_rate=0.0, n_atoms=1.0)
    p_i = integrate_same_mode(p, tolerance=1e-9, max_steps=200_000_000)
    assert p_i >= 1.0 - 1e-6
    # back-transfer blocked the same way
    pt = OdeParams(rabi=TWO_PI, blockade_shift=TWO_PI * 1e6, decay_rate=0.0, step_order=2)
    p_iv = integrate_transfer(pt, tolerance=1e-9, max_steps=200_000_000)
    assert p_iv >= 1.0 - 1e-5


def test_transfer_first_step_is_exact_two_level():
    p = OdeParams(rabi=TWO_PI, blockade_shift=TWO_PI * 1e6, decay_rate=0.0, step_order=1)
    assert integrate_transfer(p) == pytest.approx(1.0, abs=1e-9)


def test_slow_pulse_decays_away():
    # quasi-steady residue scales as (rabi / decay_rate)^2
    p = OdeParams(rabi=1e-4, blockade_shift=0.0, decay_rate=1.0, n_atoms=1.0)
    assert integrate_same_mode(p, tolerance=1e-9) <= 1e-7
    slower = OdeParams(rabi=1e-5, blockade_shift=0.0, decay_rate=1.0, n_atoms=1.0)
    assert integrate_same_mode(slower, tolerance=1e-9) <= 1e-9


def test_probabilities_improve_by_decade_of_shift():
    # pointwise the leakage oscillates; decade steps shrink its envelope
    # by two orders, so coarse monotonicity is unambiguous
    shifts = TWO_PI * np.array([30.0, 300.0, 3000.0])
    p_same, p_cross = [], []
    for shift in shifts:
        p = OdeParams(rabi=TWO_PI, blockade_shift=float(shift), decay_rate=0.0, n_atoms=400.0)
        p_same.append(integrate_same_mode(p))
        p_cross.append(integrate_cross_mode(p))
    assert p_same[0] < p_same[1] < p_same[2]
    assert p_cross[0] < p_cross[1] < p_cross[2]


def test_decay_survival_values():
    assert decay_survival(0.0, 5.0) == 1.0
    assert decay_survival(1.0, math.log(2.0)) == pytest.approx(0.5)
    assert decay_survival(1.0 / 300.0, 1.0) == pytest.approx(math.exp(-1.0 / 300.0))
    with pytest.raises(ValueError):
        decay_survival(-0.1, 1.0)
    with pytest.raises(ValueError):
        decay_survival(0.1, -1.0)


def test_trajectory_validates_times():
    gen = np.zeros((2, 2), complex)
    y0 = np.array([1, 0], complex)
    with pytest.raises(ValueError):
        integrate_trajectory(gen, y0, np.array([0.2, 0.1]))
    with pytest.raises(ValueError):
        integrate_trajectory(gen, y0, np.array([]))
