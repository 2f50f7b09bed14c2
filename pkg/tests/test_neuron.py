"""Neuron circuit-variant tests."""

import math

import numpy as np
import pytest

from optospike.detector import BiasPoint, PndArray, SndWire
from optospike.energy import EnergyModel, energy_per_event
from optospike.neuron import (
    FiringEvent,
    NeuronSpec,
    NeuronState,
    NtronSwitch,
    Port,
    Variant,
    effective_bias,
    initial_state,
    maybe_fire,
    receive,
    series_pair_step,
)


def pnd_spec(n_wires=5, bias_fraction=0.7, **overrides) -> NeuronSpec:
    array = PndArray(n_wires=n_wires, i_c_wire=4.0, alpha=0.05, n_passes=100)
    defaults = dict(receiver=array,
                    bias_receiver=BiasPoint.from_fraction(bias_fraction,
                                                          array.i_c))
    defaults.update(overrides)
    return NeuronSpec(**defaults)


def charge_up(spec, state, photons, t, seed=0):
    state = receive(spec, state, photons, Port.EXCITE, t, seed=seed)
    return maybe_fire(spec, state, t, seed=seed)


class TestSpecValidation:
    def test_gain_needs_ntron(self):
        with pytest.raises(ValueError):
            pnd_spec(variant=Variant.GAIN)

    def test_dual_port_needs_inhibitory_receiver(self):
        with pytest.raises(ValueError):
            pnd_spec(variant=Variant.DUAL_PORT)

    def test_taps_bounded(self):
        with pytest.raises(ValueError):
            pnd_spec(feedback_tap_fraction=0.6, upstream_tap_fraction=0.5)

    def test_integration_floor(self):
        with pytest.raises(ValueError):
            pnd_spec(integration_time=0.05)

    def test_snd_variant_needs_snd_receiver(self):
        with pytest.raises(ValueError):
            pnd_spec(variant=Variant.SND_CONTINUOUS)


class TestReceive:
    def test_zero_photons_pure_decay(self):
        spec = pnd_spec(integration_time=2.0)
        state = NeuronState(tally=4.0, last_update=0.0)
        state = receive(spec, state, 0, Port.EXCITE, t=3.0)
        assert state.tally == pytest.approx(4.0 * math.exp(-1.5), rel=1e-12)

    def test_infinite_integration_time_accumulates(self):
        spec = pnd_spec(n_wires=10, integration_time=math.inf)
        state = initial_state(spec)
        tallies = []
        for k in range(4):
            state = receive(spec, state, 2, Port.EXCITE, t=100.0 * k, seed=k)
            tallies.append(state.tally)
        assert tallies == sorted(tallies)
        assert tallies[-1] > tallies[0]

    def test_negative_photons_rejected(self):
        spec = pnd_spec()
        with pytest.raises(ValueError):
            receive(spec, initial_state(spec), -1, Port.EXCITE, 0.0)

    def test_inhibit_port_needs_inhibitory_receiver(self):
        spec = pnd_spec()
        with pytest.raises(ValueError):
            receive(spec, initial_state(spec), 1, Port.INHIBIT, 0.0)

    def test_time_reversal_rejected(self):
        spec = pnd_spec()
        state = receive(spec, initial_state(spec), 1, Port.EXCITE, 5.0)
        with pytest.raises(ValueError):
            receive(spec, state, 1, Port.EXCITE, 4.0)


class TestStepResponse:
    def test_below_threshold_no_event(self):
        spec = pnd_spec(n_wires=5, bias_fraction=0.7)  # n_c = 2
        state = initial_state(spec)
        state = receive(spec, state, 1, Port.EXCITE, 0.0, seed=1)
        state, event = maybe_fire(spec, state, 0.0)
        assert event is None

    def test_output_independent_of_overshoot(self):
        # the step response: any super-threshold input gives the same output
        spec = pnd_spec(n_wires=5, bias_fraction=0.7)
        rng = np.random.default_rng(7)
        outputs = set()
        for k in range(200):
            photons = int(rng.integers(10, 500))
            state, event = charge_up(spec, initial_state(spec), photons,
                                     t=0.0, seed=k)
            assert event is not None
            outputs.add(event.photons_out)
        assert len(outputs) == 1

    def test_ntron_decouples_drive_from_bias(self):
        base = pnd_spec(n_wires=5, bias_fraction=0.7)
        amplified = pnd_spec(
            n_wires=5, bias_fraction=0.7, variant=Variant.GAIN,
            ntron=NtronSwitch(gate_threshold=1.0,
                              drive=BiasPoint.from_current(50.0, 20.0)))
        _, ev_base = charge_up(base, initial_state(base), 100, 0.0, seed=2)
        _, ev_amp = charge_up(amplified, initial_state(amplified), 100, 0.0,
                              seed=2)
        assert ev_amp.photons_out > ev_base.photons_out
        # I2 may also be smaller than I1
        attenuated = pnd_spec(
            n_wires=5, bias_fraction=0.7, variant=Variant.GAIN,
            ntron=NtronSwitch(gate_threshold=1.0,
                              drive=BiasPoint.from_current(1.0, 20.0)))
        _, ev_att = charge_up(attenuated, initial_state(attenuated), 100, 0.0,
                              seed=2)
        assert ev_att.photons_out < ev_base.photons_out

    def test_refractory_blocks_and_releases(self):
        spec = pnd_spec(n_wires=5, bias_fraction=0.7, refractory_period=50.0,
                        integration_time=math.inf)
        state, first = charge_up(spec, initial_state(spec), 100, 0.0, seed=3)
        assert first is not None
        # photons landing inside the window accumulate but cannot fire
        state = receive(spec, state, 100, Port.EXCITE, 10.0, seed=4)
        state, blocked = maybe_fire(spec, state, 10.0)
        assert blocked is None
        state, released = maybe_fire(spec, state, 50.0)
        assert released is not None
        assert released.t - first.t >= spec.refractory_period

    def test_firing_resets_receiver(self):
        spec = pnd_spec(n_wires=5, bias_fraction=0.7)
        state, event = charge_up(spec, initial_state(spec), 100, 0.0, seed=5)
        assert event is not None
        assert state.tally == 0.0


class TestSndContinuous:
    def snd_spec(self, **overrides):
        wire = SndWire(i_c=4.0)
        defaults = dict(receiver=wire,
                        bias_receiver=BiasPoint.from_fraction(0.7, wire.i_c),
                        variant=Variant.SND_CONTINUOUS)
        defaults.update(overrides)
        return NeuronSpec(**defaults)

    def test_output_grows_with_input(self):
        spec = self.snd_spec()
        outs = []
        for photons in (500, 1500, 4000):
            state = receive(spec, initial_state(spec), photons, Port.EXCITE,
                            0.0, seed=9)
            _, event = maybe_fire(spec, state, 0.0, seed=9)
            outs.append(0 if event is None else event.photons_out)
        assert outs == sorted(outs)
        assert outs[-1] > 0

    def test_empty_wire_no_event(self):
        spec = self.snd_spec()
        _, event = maybe_fire(spec, initial_state(spec), 0.0)
        assert event is None


class TestDualPort:
    def dual_spec(self, **overrides):
        inhibitory = PndArray(n_wires=4, i_c_wire=4.0, alpha=0.5,
                              n_passes=100)
        return pnd_spec(n_wires=5, bias_fraction=0.7,
                        variant=Variant.DUAL_PORT,
                        inhibitory_receiver=inhibitory,
                        integration_time=math.inf, **overrides)

    def test_inhibition_raises_threshold(self):
        from optospike.neuron import _effective_threshold

        spec = self.dual_spec()
        state = initial_state(spec)
        base = _effective_threshold(spec, state, 0.0)
        state = receive(spec, state, 10, Port.INHIBIT, 0.0, seed=1)
        assert state.inhibit_tally >= 1
        raised = _effective_threshold(spec, state, 0.0)
        assert raised is None or raised > base

    def test_inhibited_neuron_needs_more_photons(self):
        spec = self.dual_spec()
        # uninhibited: 100 photons fire comfortably (n_c = 2)
        _, event = charge_up(spec, initial_state(spec), 100, 0.0, seed=2)
        assert event is not None
        # saturate the inhibitory array first: bias drops by 4 wire quanta,
        # effective bias 14 - 16 < 0, firing impossible
        state = receive(spec, initial_state(spec), 200, Port.INHIBIT, 0.0,
                        seed=3)
        state = receive(spec, state, 100, Port.EXCITE, 0.0, seed=4)
        _, event = maybe_fire(spec, state, 0.0)
        assert event is None

    def test_effective_bias_floor(self):
        spec = self.dual_spec()
        state = receive(spec, initial_state(spec), 200, Port.INHIBIT, 0.0,
                        seed=5)
        assert effective_bias(spec, state, 0.0) == 0.0


class TestIntegrateAndStop:
    def test_threshold_cuts_standing_emission(self):
        from optospike.neuron import steady_emission_rate

        spec = pnd_spec(n_wires=5, bias_fraction=0.7,
                        variant=Variant.INTEGRATE_AND_STOP)
        state = initial_state(spec)
        assert state.emitting
        assert steady_emission_rate(spec, state) > 0.0
        state, event = charge_up(spec, state, 100, 0.0, seed=6)
        assert event is not None and event.photons_out == 0
        assert not state.emitting
        assert steady_emission_rate(spec, state) == 0.0
        # a second threshold crossing does nothing: the drive is already cut
        state = receive(spec, state, 100, Port.EXCITE, 60.0, seed=7)
        state, again = maybe_fire(spec, state, 60.0)
        assert again is None


class TestSelfFeedback:
    def feedback_spec(self, quench=100.0):
        return pnd_spec(n_wires=5, bias_fraction=0.7,
                        variant=Variant.SELF_FEEDBACK,
                        feedback_tap_fraction=0.2,
                        upstream_tap_fraction=0.1,
                        feedback_quench_photons=quench,
                        integration_time=100.0)

    def test_taps_split_exactly(self):
        spec = self.feedback_spec(quench=1e12)
        _, event = charge_up(spec, initial_state(spec), 100, 0.0, seed=8)
        assert event is not None
        assert event.tap_self + event.tap_upstream + event.downstream \
            == event.photons_out
        assert event.tap_self == pytest.approx(
            0.2 * event.photons_out, abs=1.0)
        assert event.tap_upstream == pytest.approx(
            0.1 * event.photons_out, abs=1.0)

    def test_sustained_firing_quenches_bias(self):
        spec = self.feedback_spec(quench=100.0)  # tap exceeds this at once
        state, event = charge_up(spec, initial_state(spec), 100, 0.0, seed=9)
        assert event is not None
        assert state.feedback_tally >= spec.feedback_quench_photons
        assert effective_bias(spec, state, state.refractory_until) == 0.0
        # above threshold again, but the quench wire holds the bias off
        state = receive(spec, state, 100, Port.EXCITE, 55.0, seed=10)
        state, blocked = maybe_fire(spec, state, 55.0)
        assert blocked is None
        # after the tally leaks away the neuron recovers
        much_later = 55.0 + 100.0 * math.log(1e6)
        state, recovered = maybe_fire(spec, state, much_later)
        assert state.feedback_tally < spec.feedback_quench_photons


class TestSeriesPair:
    def test_idle_upper_leaves_lower_untouched(self):
        upper = pnd_spec(n_wires=5, bias_fraction=0.7)
        lower = pnd_spec(n_wires=5, bias_fraction=0.7,
                         variant=Variant.SERIES_INHIBITED)
        u_state, l_state = initial_state(upper), initial_state(lower)
        u_state, l_state, event = series_pair_step(upper, u_state, lower,
                                                   l_state, 0.0)
        assert event is None
        assert l_state == initial_state(lower)

    def test_upper_firing_silences_lower_for_window(self):
        upper = pnd_spec(n_wires=5, bias_fraction=0.9)
        lower = pnd_spec(n_wires=5, bias_fraction=0.7,
                         variant=Variant.SERIES_INHIBITED,
                         integration_time=math.inf)
        u_state = receive(upper, initial_state(upper), 100, Port.EXCITE, 0.0,
                          seed=11)
        l_state = receive(lower, initial_state(lower), 100, Port.EXCITE, 0.0,
                          seed=12)
        u_state, l_state, event = series_pair_step(upper, u_state, lower,
                                                   l_state, 0.0)
        assert event is not None
        # upper drive (18 uA) exceeds lower bias (14 uA): silenced
        assert effective_bias(lower, l_state, 0.0) == 0.0
        _, blocked = maybe_fire(lower, l_state, 0.0)
        assert blocked is None
        # past the window the lower neuron fires from its stored tally
        _, released = maybe_fire(lower, l_state, event.t_end + 1.0)
        assert released is not None

    def test_lower_rate_decreases_with_upper_rate(self):
        # drive both neurons periodically; sweep how often the upper one is
        # stimulated and count lower firings
        def lower_fire_count(upper_period):
            upper = pnd_spec(n_wires=5, bias_fraction=0.9,
                             integration_time=math.inf)
            lower = pnd_spec(n_wires=5, bias_fraction=0.7,
                             variant=Variant.SERIES_INHIBITED,
                             integration_time=math.inf)
            u_state, l_state = initial_state(upper), initial_state(lower)
            fired = 0
            for k in range(200):
                t = 10.0 * k
                if upper_period and k % upper_period == 0:
                    u_state = receive(upper, u_state, 100, Port.EXCITE, t,
                                      seed=2 * k)
                l_state = receive(lower, l_state, 100, Port.EXCITE, t,
                                  seed=2 * k + 1)
                u_state, l_state, _ = series_pair_step(upper, u_state, lower,
                                                       l_state, t)
                l_state, event = maybe_fire(lower, l_state, t)
                fired += event is not None
            return fired

        idle = lower_fire_count(0)
        sparse = lower_fire_count(40)
        dense = lower_fire_count(10)
        assert idle > sparse > dense


class TestEnergyHook:
    def test_trajectory_energy_is_count_times_per_event(self):
        spec = pnd_spec(n_wires=5, bias_fraction=0.7,
                        integration_time=math.inf)
        model = EnergyModel(efficiency=spec.emitter.efficiency,
                            i_wire=spec.receiver.i_c_wire,
                            junction=spec.emitter)
        state = initial_state(spec)
        events: list[FiringEvent] = []
        for k in range(6):
            t = 60.0 * k
            state = receive(spec, state, 100, Port.EXCITE, t, seed=k)
            state, event = maybe_fire(spec, state, t)
            if event is not None:
                events.append(event)
        assert len(events) == 6
        per_event = energy_per_event(model, events[0].photons_out).total
        total = sum(energy_per_event(model, e.photons_out).total
                    for e in events)
        assert total == pytest.approx(len(events) * per_event, rel=1e-12)
