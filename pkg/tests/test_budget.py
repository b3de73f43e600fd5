import math

import numpy as np
import pytest

from swnoon.budget import (
    DEFAULT_BRACKET,
    MHZ_TO_ANGULAR,
    STATUS_BOUNDARY_HI,
    STATUS_BOUNDARY_LO,
    STATUS_INTERIOR,
    atom_number_error,
    channel_probabilities,
    compose_success,
    excitation_product,
    fidelity_from_errors,
    golden_section_max,
    lifetime_to_decay_rate,
    maximize_on_bracket,
    optimize_excitation_rabi,
    optimize_transfer_rabi,
    pulse_failure_probability,
    success_probability,
    sweep_error_vs_shift,
    transfer_product,
)

GAMMA_300 = lifetime_to_decay_rate(300.0)


def test_lifetime_conversion():
    assert lifetime_to_decay_rate(300.0) == pytest.approx(1.0 / 300.0)
    with pytest.raises(ValueError):
        lifetime_to_decay_rate(0.0)


def test_golden_section_on_parabola():
    x, fx, evals = golden_section_max(lambda x: -((x - 3.0) ** 2), 1.0, 8.0)
    assert x == pytest.approx(3.0, rel=1e-3)
    assert fx == pytest.approx(0.0, abs=1e-6)
    assert evals >= 2


def test_maximize_interior_and_boundaries():
    interior = maximize_on_bracket(lambda x: -((math.log(x) - 1.0) ** 2), (0.1, 100.0))
    assert interior.status == STATUS_INTERIOR
    assert interior.best_rabi == pytest.approx(math.e, rel=1e-3)

    decreasing = maximize_on_bracket(lambda x: 1.0 / x, (0.1, 100.0))
    assert decreasing.status == STATUS_BOUNDARY_LO
    assert decreasing.best_rabi == 0.1

    increasing = maximize_on_bracket(lambda x: x, (0.1, 100.0))
    assert increasing.status == STATUS_BOUNDARY_HI
    assert increasing.best_rabi == 100.0

    with pytest.raises(ValueError):
        maximize_on_bracket(lambda x: x, (1.0, 0.5))


def test_products_are_probabilities():
    shift = MHZ_TO_ANGULAR * 300.0
    for rabi_mhz in (0.05, 0.25, 2.0):
        pe = excitation_product(MHZ_TO_ANGULAR * rabi_mhz, 400.0, shift, GAMMA_300)
        pt = transfer_product(MHZ_TO_ANGULAR * rabi_mhz, 5, shift, GAMMA_300)
        assert 0.0 < pe <= 1.0
        assert 0.0 < pt <= 1.0


def test_excitation_optimum_beats_neighbors():
    shift = MHZ_TO_ANGULAR * 300.0
    res = optimize_excitation_rabi(400.0, shift, GAMMA_300)
    assert res.status == STATUS_INTERIOR
    best = res.best_product
    for factor in (0.5, 0.9, 1.1, 2.0):
        assert excitation_product(res.best_rabi * factor, 400.0, shift, GAMMA_300) <= best + 1e-12


def test_first_transfer_optimum_is_fast_edge():
    # with no double-promotion leakage the transfer only gains from speed
    res = optimize_transfer_rabi(1, MHZ_TO_ANGULAR * 300.0, GAMMA_300)
    assert res.status == STATUS_BOUNDARY_HI
    assert res.best_rabi == DEFAULT_BRACKET[1]


def test_optimizations_are_reproducible():
    shift = MHZ_TO_ANGULAR * 200.0
    first = optimize_excitation_rabi(100.0, shift, GAMMA_300)
    optimize_excitation_rabi.cache_clear()
    second = optimize_excitation_rabi(100.0, shift, GAMMA_300)
    assert first == second


def test_channel_probabilities_and_composition():
    shift = MHZ_TO_ANGULAR * 300.0
    channel, exc, transfers = channel_probabilities(3, 100.0, shift, GAMMA_300)
    assert len(channel.transfer) == 3
    assert len(transfers) == 3
    assert exc.best_product == pytest.approx(
        channel.excite * channel.hold * channel.survive, rel=1e-12
    )
    manual = channel.excite * channel.hold * channel.survive
    p1 = compose_success(channel, 1)
    assert p1 == pytest.approx(channel.transfer[0] * channel.transfer_survive[0] * manual, rel=1e-12)
    p3 = compose_success(channel, 3)
    assert 0.0 < p3 < p1 < 1.0
    with pytest.raises(ValueError):
        compose_success(channel, 4)
    with pytest.raises(ValueError):
        compose_success(channel, 0)


def test_success_probability_consistency():
    shift = MHZ_TO_ANGULAR * 300.0
    budget = success_probability(2, 100.0, shift, GAMMA_300)
    assert budget.p_success == pytest.approx(compose_success(budget.channel, 2), rel=1e-15)
    assert budget.e_protocol == pytest.approx(1.0 - budget.p_success, abs=1e-15)
    assert budget.e_atom_number == pytest.approx(atom_number_error(2, 100.0))
    assert budget.fidelity == pytest.approx(
        fidelity_from_errors(budget.e_protocol, budget.e_atom_number)
    )
    assert "transfer[1]:boundary_hi" in budget.boundary_statuses


def test_atom_number_error_values():
    assert atom_number_error(20, 400.0) == pytest.approx(math.pi**2 * 20 / 3200.0, rel=1e-15)
    assert pulse_failure_probability(400.0) == pytest.approx(math.pi**2 / 6400.0, rel=1e-15)
    with pytest.raises(ValueError):
        atom_number_error(0, 400.0)
    with pytest.raises(ValueError):
        atom_number_error(5, 0.5)
    with pytest.raises(ValueError):
        pulse_failure_probability(0.0)


def test_fidelity_clamping():
    assert fidelity_from_errors(0.0, 0.0) == 1.0
    assert fidelity_from_errors(0.3, 0.3) == 0.0
    assert fidelity_from_errors(0.02, 0.06) == pytest.approx(1.0 - 2.0 * 0.08)


def test_sweep_rows_sorted_and_consistent():
    rows = sweep_error_vs_shift([2, 1], [300.0, 100.0], [300.0], n_atoms=100.0)
    keys = [(r.order, r.lifetime_us, r.blockade_shift_mhz) for r in rows]
    assert keys == sorted(keys)
    assert len(rows) == 4
    for row in rows:
        assert row.e_total == pytest.approx(1.0 - row.p_success, abs=1e-15)
    channel, _, _ = channel_probabilities(
        2, 100.0, MHZ_TO_ANGULAR * 100.0, GAMMA_300
    )
    row = next(r for r in rows if r.order == 1 and r.blockade_shift_mhz == 100.0)
    assert row.p_success == compose_success(channel, 1)


def test_sweep_validation():
    with pytest.raises(ValueError):
        sweep_error_vs_shift([], [300.0], [300.0])
    with pytest.raises(ValueError):
        sweep_error_vs_shift([1], [-5.0], [300.0])
