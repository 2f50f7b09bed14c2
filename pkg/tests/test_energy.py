"""Firing-event energy budget tests."""

import pytest

from optospike.energy import (
    EnergyModel,
    energy_per_event,
    photon_floor_aj,
    wall_energy,
    wall_power,
)


class TestBreakdown:
    def test_components_sum_to_total(self):
        model = EnergyModel(efficiency=0.1)
        for n in (1, 7, 100, 5000):
            b = energy_per_event(model, n)
            assert b.total == pytest.approx(
                b.inductive + b.capacitive + b.photonic, rel=1e-15)
            assert b.per_photon == pytest.approx(b.total / n, rel=1e-15)

    def test_photonic_term_linear(self):
        model = EnergyModel(efficiency=0.05)
        one = energy_per_event(model, 1).photonic
        for n in (2, 10, 1000):
            assert energy_per_event(model, n).photonic == pytest.approx(
                n * one, rel=1e-12)

    def test_inductive_term_affine(self):
        model = EnergyModel(efficiency=0.05)
        e1 = energy_per_event(model, 1).inductive
        e2 = energy_per_event(model, 2).inductive
        e3 = energy_per_event(model, 3).inductive
        assert e3 - e2 == pytest.approx(e2 - e1, rel=1e-12)
        # slope is one 500-square element at the wire current
        slope_aj = 0.5 * (400e-12 * 500) * (4e-6) ** 2 * 1e18
        assert e2 - e1 == pytest.approx(slope_aj, rel=1e-12)

    def test_rejects_zero_photons(self):
        with pytest.raises(ValueError):
            energy_per_event(EnergyModel(), 0)


class TestAnchors:
    def test_unit_efficiency_reaches_two_attojoule_regime(self):
        model = EnergyModel(efficiency=1.0)
        per_photon = energy_per_event(model, 10_000).per_photon
        assert 1.0 <= per_photon <= 3.0  # 2 aJ +- 50%

    def test_one_percent_efficiency_twenty_attojoules(self):
        model = EnergyModel(efficiency=0.01)
        per_photon = energy_per_event(model, 10_000).per_photon
        assert 10.0 <= per_photon <= 30.0  # 20 aJ +- 50%

    def test_photon_quantum_floor_never_violated(self):
        floor = photon_floor_aj()
        assert floor == pytest.approx(0.1628, rel=1e-3)
        for eta in (1.0, 0.1, 0.01):
            model = EnergyModel(efficiency=eta)
            for n in (1, 10, 100, 10_000, 1_000_000):
                assert energy_per_event(model, n).per_photon > floor

    def test_capacitor_dominates_single_photon_events(self):
        # at 10% efficiency the low-photon budget is capacitor charging
        b = energy_per_event(EnergyModel(efficiency=0.1), 1)
        assert b.capacitive > b.inductive
        assert b.capacitive > b.photonic

    def test_inductance_and_photon_terms_cross_near_hundred(self):
        b = energy_per_event(EnergyModel(efficiency=0.1), 100)
        assert b.inductive == pytest.approx(b.photonic, rel=0.25)

    def test_per_photon_nonincreasing(self):
        model = EnergyModel(efficiency=0.1)
        values = [energy_per_event(model, n).per_photon
                  for n in (1, 2, 5, 10, 30, 100, 300, 1000, 10_000)]
        assert values == sorted(values, reverse=True)


class TestWallPower:
    def test_twenty_attojoule_becomes_twenty_femtojoule(self):
        assert wall_energy(20.0, 1000.0) == 20_000.0  # aJ, i.e. 20 fJ

    def test_hundred_attojoule_snd_case(self):
        assert wall_energy(100.0, 1000.0) == 100_000.0  # 100 fJ

    def test_unit_cooling_factor_is_identity(self):
        assert wall_energy(37.5, 1.0) == 37.5

    def test_cooling_factor_below_one_rejected(self):
        with pytest.raises(ValueError):
            wall_energy(20.0, 0.5)

    def test_model_path_matches_manual_product(self):
        model = EnergyModel(efficiency=0.01)
        per_photon = energy_per_event(model, 1000).per_photon
        assert wall_power(model, 1000, 1000.0) == pytest.approx(
            per_photon * 1000.0, rel=1e-12)
