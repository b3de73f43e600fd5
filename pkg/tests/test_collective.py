import math

import pytest
from hypothesis import given, strategies as st

from swnoon.collective import (
    ZERO_K,
    BasisConfig,
    CollectiveState,
    Mode,
    StateError,
)

coeffs = st.tuples(*[st.integers(-5, 5)] * 4)


def test_vacuum_is_empty_and_normalized():
    cfg = BasisConfig.vacuum()
    assert cfg.occupation == (0, 0, 0, 0)
    assert cfg.total_k() == ZERO_K
    state = CollectiveState.vacuum()
    assert len(state) == 1
    assert state.norm() == pytest.approx(1.0)
    assert state.amplitude(cfg) == 1.0


def test_negative_occupation_rejected():
    with pytest.raises(StateError):
        BasisConfig((-1, 0, 0, 0), (ZERO_K,) * 4)


def test_double_rydberg_rejected():
    with pytest.raises(StateError):
        BasisConfig((0, 0, 1, 1), (ZERO_K, ZERO_K, (1, 0, 0, 0), (0, 0, 1, 0)))
    with pytest.raises(StateError):
        BasisConfig((0, 0, 2, 0), (ZERO_K, ZERO_K, (2, 0, 0, 0), ZERO_K))


def test_empty_mode_with_momentum_rejected():
    with pytest.raises(StateError):
        BasisConfig((0, 0, 0, 0), ((1, 0, 0, 0), ZERO_K, ZERO_K, ZERO_K))


def test_make_canonicalizes_empty_modes():
    cfg = BasisConfig.make((1, 0, 0, 0), ((1, -1, 0, 0), (9, 9, 9, 9), ZERO_K, ZERO_K))
    assert cfg.k_coeffs[Mode.SB] == ZERO_K
    assert cfg.k_coeffs[Mode.SA] == (1, -1, 0, 0)


def test_with_mode_replaces_and_zeroes():
    cfg = BasisConfig.vacuum().with_mode(Mode.SA, 2, (2, -2, 0, 0))
    assert cfg.occupation == (2, 0, 0, 0)
    assert cfg.total_k() == (2, -2, 0, 0)
    back = cfg.with_mode(Mode.SA, 0, (5, 5, 5, 5))
    assert back == BasisConfig.vacuum()


def test_per_excitation_k_uniform_and_not():
    cfg = BasisConfig.make((3, 0, 0, 0), ((3, -3, 0, 0), ZERO_K, ZERO_K, ZERO_K))
    assert cfg.per_excitation_k(Mode.SA) == (1, -1, 0, 0)
    with pytest.raises(StateError):
        cfg.per_excitation_k(Mode.SB)
    lopsided = BasisConfig.make((2, 0, 0, 0), ((3, -1, 0, 0), ZERO_K, ZERO_K, ZERO_K))
    with pytest.raises(StateError):
        lopsided.per_excitation_k(Mode.SA)


@given(coeffs, coeffs)
def test_total_k_adds_componentwise(ka, kb):
    cfg = BasisConfig.make((1, 1, 0, 0), (ka, kb, ZERO_K, ZERO_K))
    assert cfg.total_k() == tuple(a + b for a, b in zip(ka, kb))


def test_amplitude_prune_drops_tiny_branches():
    cfg = BasisConfig.make((1, 0, 0, 0), ((1, 0, 0, 0), ZERO_K, ZERO_K, ZERO_K))
    state = CollectiveState({BasisConfig.vacuum(): 1.0, cfg: 1e-13})
    assert len(state) == 1
    assert state.amplitude(cfg) == 0.0


def _two_branch(amp_a, amp_b):
    cfg_a = BasisConfig.make((1, 0, 0, 0), ((1, -1, 0, 0), ZERO_K, ZERO_K, ZERO_K))
    cfg_b = BasisConfig.make((0, 1, 0, 0), (ZERO_K, (0, 0, 1, -1), ZERO_K, ZERO_K))
    return CollectiveState({cfg_a: amp_a, cfg_b: amp_b})


finite_amp = st.complex_numbers(
    min_magnitude=1e-6, max_magnitude=10.0, allow_nan=False, allow_infinity=False
)


@given(finite_amp, finite_amp, finite_amp, finite_amp)
def test_overlap_conjugate_symmetric(a1, b1, a2, b2):
    s1 = _two_branch(a1, b1)
    s2 = _two_branch(a2, b2)
    lhs = s1.overlap(s2)
    rhs = s2.overlap(s1).conjugate()
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


@given(finite_amp, finite_amp)
def test_norm_matches_self_overlap(a, b):
    s = _two_branch(a, b)
    assert s.norm() == pytest.approx(abs(s.overlap(s)), rel=1e-12)


def test_mode_population_counts_and_presence():
    cfg = BasisConfig.make((2, 0, 0, 0), ((2, -2, 0, 0), ZERO_K, ZERO_K, ZERO_K))
    state = CollectiveState({cfg: 1.0 / math.sqrt(2.0), BasisConfig.vacuum(): 1.0 / math.sqrt(2.0)})
    assert state.mode_population(Mode.SA) == pytest.approx(1.0)
    assert state.mode_population(Mode.SA, presence=True) == pytest.approx(0.5)
    assert state.mode_population(Mode.RA, presence=True) == 0.0
