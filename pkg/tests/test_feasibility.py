import math

import pytest

from swnoon.feasibility import (
    EnsembleSpec,
    VdwCoefficients,
    atom_number,
    energy_shift,
    feasibility_report,
    fit_range_warning,
    min_pair_shift,
)


def test_shift_at_design_point():
    shift, sign = energy_shift(100, 7.6)
    assert sign == -1
    assert shift == pytest.approx(285.0, rel=0.01)
    # within the accepted 10% shortfall of the 300 MHz design target
    assert shift >= 0.9 * 300.0


def test_shift_scales_as_inverse_sixth_power():
    near, _ = energy_shift(100, 3.8)
    far, _ = energy_shift(100, 7.6)
    assert near / far == pytest.approx(2.0**6, rel=1e-12)


def test_shift_sign_follows_coefficients():
    _, sign = energy_shift(100, 7.6, VdwCoefficients(c0=13.0, c1=0.0, c2=0.0))
    assert sign == 1


def test_shift_validation():
    with pytest.raises(ValueError):
        energy_shift(0, 7.6)
    with pytest.raises(ValueError):
        energy_shift(100, 0.0)


def test_fit_range_warning():
    assert fit_range_warning(100) is None
    assert fit_range_warning(30) is None
    assert "extrapolated" in fit_range_warning(20)
    assert "extrapolated" in fit_range_warning(160)


def test_atom_number():
    n = atom_number(1.7e12, 3.8)
    assert n == pytest.approx(1.7e12 * (4.0 / 3.0) * math.pi * 3.8**3 * 1e-12)
    assert round(n) == 391
    with pytest.raises(ValueError):
        atom_number(0.0, 3.8)
    with pytest.raises(ValueError):
        atom_number(1e12, -1.0)


def test_min_pair_shift_uses_cloud_diameter():
    spec = EnsembleSpec(principal_n=100, radius_um=3.8)
    assert min_pair_shift(spec) == energy_shift(100, 7.6)


def test_ensemble_validation():
    with pytest.raises(ValueError):
        EnsembleSpec(principal_n=0)
    with pytest.raises(ValueError):
        EnsembleSpec(radius_um=0.0)
    with pytest.raises(ValueError):
        EnsembleSpec(density_per_cm3=-1.0)


def test_default_report_is_feasible():
    report = feasibility_report()
    assert report.shift_ok
    assert report.error_ok
    assert report.feasible
    assert report.shift_sign == -1
    assert report.n_atoms == pytest.approx(390.7, abs=0.5)
    assert report.e_protocol <= 0.05
    assert 0.80 <= report.fidelity <= 0.84
    assert report.warnings == ()


def test_low_principal_n_fails_shift():
    spec = EnsembleSpec(principal_n=50)
    report = feasibility_report(spec, order=1)
    assert not report.shift_ok
    assert not report.feasible
    # n^11 scaling: dropping n from 100 to 50 kills the shift outright
    assert report.shift_mhz < 1.0


def test_sparse_cloud_warns_about_size():
    spec = EnsembleSpec(density_per_cm3=2e11)
    report = feasibility_report(spec, order=20)
    assert any("small for order" in w for w in report.warnings)
    assert report.e_atom_number > feasibility_report().e_atom_number


def test_report_validation():
    with pytest.raises(ValueError):
        feasibility_report(order=0)
    with pytest.raises(ValueError):
        feasibility_report(target_shift_mhz=0.0)
    with pytest.raises(ValueError):
        feasibility_report(target_error=1.5)
    with pytest.raises(ValueError):
        feasibility_report(EnsembleSpec(density_per_cm3=1.0), order=1)
