"""Optoelectronic spiking-neuron circuits.

A neuron composes a photon-counting receiver (parallel array or series
wire), an optional three-terminal supercurrent switch that decouples the
receiver bias from the emitter drive, an LED emitter, and two time
constants: a leaky integration time (memory of absorbed photons) and a
refractory period (emission window / dead time).

Supported circuit variants:

  pnd_step          threshold firing with a step response: the photon count
                    out is set by the drive current, not by the input
  snd_continuous    continuous response: photons out follows the series-wire
                    resistance through the LED operating point
  gain              pnd_step with the supercurrent switch providing gain
  integrate_and_stop  runs inverted: the LED emits until the receiver
                    reaches threshold, which cuts the drive
  dual_port         separate excitatory and inhibitory receivers; photons on
                    the inhibit port divert receiver bias and raise the
                    firing threshold
  series_inhibited  shares a bias path with an upstream neuron whose firing
                    steals drive current for its refractory window
  self_feedback     a tap of the emitted light feeds a quench wire in series
                    with the receiver bias, moderating sustained firing

State transitions are pure: receive() and maybe_fire() return new state
objects, so trajectories can be replayed lock-free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .detector import (
    BiasPoint,
    PndArray,
    SndWire,
    pulse_absorption_trial,
    threshold_count,
)
from .emitter import (
    LedJunction,
    drive_photons,
    led_operating_point,
)
from .constants import ELEMENTARY_CHARGE_C, NS_TO_S, UA_TO_A
from .sampling import substream

# Hotspot relaxation sets the floor on how short the integration time can
# be made in hardware (about 200 ps for the fastest common materials).
MIN_INTEGRATION_TIME_NS = 0.2


class Variant(Enum):
    PND_STEP = "pnd_step"
    SND_CONTINUOUS = "snd_continuous"
    GAIN = "gain"
    INTEGRATE_AND_STOP = "integrate_and_stop"
    DUAL_PORT = "dual_port"
    SERIES_INHIBITED = "series_inhibited"
    SELF_FEEDBACK = "self_feedback"


class Port(Enum):
    EXCITE = "excite"
    INHIBIT = "inhibit"


@dataclass(frozen=True)
class NtronSwitch:
    """Ideal gate-thresholded current switch.

    When the gate current reaches gate_threshold the drive current is
    diverted to the LED. No analog transconductance is modeled; the switch
    only routes current.
    """

    gate_threshold: float  # uA
    drive: BiasPoint


@dataclass(frozen=True)
class NeuronSpec:
    """Immutable composition of a neuron circuit."""

    receiver: PndArray | SndWire
    bias_receiver: BiasPoint
    emitter: LedJunction = field(default_factory=LedJunction)
    variant: Variant = Variant.PND_STEP
    ntron: NtronSwitch | None = None
    inhibitory_receiver: PndArray | None = None
    feedback_tap_fraction: float = 0.0
    upstream_tap_fraction: float = 0.0
    integration_time: float = 1.0     # ns; math.inf traps flux indefinitely
    refractory_period: float = 50.0   # ns
    stochastic_emission: bool = False
    # photons accumulated on the feedback tap that quench the receiver bias
    feedback_quench_photons: float = 1e4

    def __post_init__(self):
        if self.feedback_tap_fraction < 0 or self.upstream_tap_fraction < 0:
            raise ValueError("tap fractions must be nonnegative")
        if self.feedback_tap_fraction + self.upstream_tap_fraction >= 1.0:
            raise ValueError("taps cannot consume the whole output")
        if self.variant is Variant.GAIN and self.ntron is None:
            raise ValueError("gain variant requires an ntron")
        if self.variant is Variant.DUAL_PORT and self.inhibitory_receiver is None:
            raise ValueError("dual_port variant requires an inhibitory receiver")
        if self.integration_time < MIN_INTEGRATION_TIME_NS:
            raise ValueError(
                f"integration_time below the {MIN_INTEGRATION_TIME_NS} ns "
                "hotspot relaxation floor")
        if self.refractory_period <= 0:
            raise ValueError("refractory_period must be positive")
        if self.variant is Variant.SND_CONTINUOUS:
            if not isinstance(self.receiver, SndWire):
                raise ValueError("snd_continuous requires an SndWire receiver")
        elif not isinstance(self.receiver, PndArray):
            raise ValueError(f"{self.variant.value} requires a PndArray receiver")

    @property
    def drive_current(self) -> float:
        """Current routed through the LED on firing, uA."""
        if self.ntron is not None:
            return self.ntron.drive.i_bias
        return self.bias_receiver.i_bias


@dataclass(frozen=True)
class NeuronState:
    """Dynamic neuron state between events.

    tally           leaky count of receiver absorptions (normal wires for a
                    parallel array, distinct hotspot slots for a series wire)
    occupied        series-wire slots hit since the last reset
    inhibit_tally   leaky count of inhibitory-receiver normal wires
    feedback_tally  leaky count of photons caught by the self-feedback tap
    series_deficit  drive current stolen by a series-connected upstream
                    neuron, uA, in force until series_deficit_until
    refractory_until  end of the current dead time, ns
    emitting        integrate-and-stop drive flag (starts True there)
    last_update     time of the last state transition, ns
    """

    tally: float = 0.0
    occupied: frozenset = frozenset()
    inhibit_tally: float = 0.0
    feedback_tally: float = 0.0
    series_deficit: float = 0.0
    series_deficit_until: float = -math.inf
    refractory_until: float = -math.inf
    emitting: bool = False
    last_update: float = 0.0


@dataclass(frozen=True)
class FiringEvent:
    """One firing of a neuron."""

    t: float             # ns
    photons_out: int     # photons sent downstream plus taps
    tap_self: int
    tap_upstream: int
    t_end: float         # end of the emission window / refractory period

    @property
    def downstream(self) -> int:
        return self.photons_out - self.tap_self - self.tap_upstream


def initial_state(spec: NeuronSpec, t: float = 0.0) -> NeuronState:
    return NeuronState(emitting=spec.variant is Variant.INTEGRATE_AND_STOP,
                       last_update=t)


def _decay(spec: NeuronSpec, state: NeuronState, t: float) -> NeuronState:
    """Leak all tallies exponentially from last_update to t."""
    dt = t - state.last_update
    if dt < 0:
        raise ValueError("state update moving backwards in time")
    if dt == 0.0:
        return state
    if math.isinf(spec.integration_time):
        factor = 1.0
    else:
        factor = math.exp(-dt / spec.integration_time)
    tally = state.tally * factor
    occupied = state.occupied
    if tally < 0.5 and occupied:
        # all hotspots have relaxed; clear the slot bookkeeping
        occupied = frozenset()
    return replace(state, tally=tally, occupied=occupied,
                   inhibit_tally=state.inhibit_tally * factor,
                   feedback_tally=state.feedback_tally * factor,
                   last_update=t)


def effective_bias(spec: NeuronSpec, state: NeuronState, t: float) -> float:
    """Receiver bias current after inhibition, series theft, and quench; uA.

    Each normal wire in the inhibitory receiver diverts one wire-critical-
    current quantum from the receiver bias. A saturated self-feedback tap
    quenches the bias entirely.
    """
    i = spec.bias_receiver.i_bias
    if isinstance(spec.receiver, PndArray):
        i -= math.floor(state.inhibit_tally + 1e-9) * spec.receiver.i_c_wire
    if t < state.series_deficit_until:
        i -= state.series_deficit
    if (spec.variant is Variant.SELF_FEEDBACK
            and state.feedback_tally >= spec.feedback_quench_photons):
        i = 0.0
    return max(i, 0.0)


def _effective_threshold(spec: NeuronSpec, state: NeuronState,
                         t: float) -> int | None:
    """Normal-wire count needed to fire, or None if firing is impossible."""
    i_eff = effective_bias(spec, state, t)
    if i_eff <= 0.0:
        return None
    receiver = spec.receiver
    if i_eff >= receiver.i_c:
        return 1  # bias alone would switch the array; any absorption fires
    return threshold_count(receiver, BiasPoint.from_current(i_eff, receiver.i_c))


def normal_count(state: NeuronState) -> int:
    return int(math.floor(state.tally + 1e-9))


def receive(spec: NeuronSpec, state: NeuronState, n_photons: int, port: Port,
            t: float, seed: int = 0) -> NeuronState:
    """Absorb a photon pulse arriving at time t; returns the new state.

    The tallies first leak for the elapsed time, then one trial of the
    receiver's absorption process runs with the pulse. Photons arriving
    during the refractory window are absorbed into state all the same; they
    simply cannot trigger firing until the window ends.
    """
    if n_photons < 0:
        raise ValueError("n_photons must be >= 0")
    state = _decay(spec, state, t)
    if n_photons == 0:
        return state
    rng = substream(seed)
    if port is Port.INHIBIT:
        array = spec.inhibitory_receiver
        if array is None:
            raise ValueError("neuron has no inhibitory receiver")
        before = int(math.floor(state.inhibit_tally + 1e-9))
        after = pulse_absorption_trial(array, n_photons, rng,
                                       initial_normal=before)
        return replace(state, inhibit_tally=state.inhibit_tally
                       + (after - before))
    receiver = spec.receiver
    if isinstance(receiver, PndArray):
        before = min(normal_count(state), receiver.n_wires)
        after = pulse_absorption_trial(receiver, n_photons, rng,
                                       initial_normal=before)
        return replace(state, tally=state.tally + (after - before))
    # series wire: sample absorption positions along the out-and-back path
    path = rng.exponential(scale=receiver.attenuation_length,
                           size=int(n_photons))
    length = receiver.wire_length
    hit = path <= 2.0 * length
    x = path[hit]
    x = np.where(x > length, 2.0 * length - x, x)
    slot_um = receiver.hotspot_length * 1e-3
    slots = frozenset(
        int(s) for s in np.minimum((x / slot_um).astype(np.int64),
                                   receiver.slot_count - 1))
    new_slots = slots - state.occupied
    return replace(state, occupied=state.occupied | new_slots,
                   tally=state.tally + len(new_slots))


def _split_taps(spec: NeuronSpec, photons_out: int) -> tuple[int, int]:
    """Integer tap counts by largest-remainder; taps never exceed output."""
    from .network import largest_remainder  # local import to avoid a cycle

    f_self = spec.feedback_tap_fraction
    f_up = spec.upstream_tap_fraction
    parts = [photons_out * f_self, photons_out * f_up,
             photons_out * (1.0 - f_self - f_up)]
    tap_self, tap_up, _ = largest_remainder(parts, photons_out)
    return tap_self, tap_up


def _emitted_count(spec: NeuronSpec, expected: float, rng) -> int:
    if spec.stochastic_emission:
        if rng is None:
            raise ValueError("stochastic emission requires an rng")
        return int(rng.poisson(expected))
    return int(math.floor(expected))


def steady_emission_rate(spec: NeuronSpec, state: NeuronState) -> float:
    """Photon rate (per ns) of an integrate-and-stop neuron's idle emission."""
    if spec.variant is not Variant.INTEGRATE_AND_STOP or not state.emitting:
        return 0.0
    rate_per_s = spec.emitter.efficiency * spec.drive_current * UA_TO_A \
        / ELEMENTARY_CHARGE_C
    return rate_per_s * NS_TO_S


def maybe_fire(spec: NeuronSpec, state: NeuronState, t: float,
               seed: int = 0) -> tuple[NeuronState, FiringEvent | None]:
    """Fire if the receiver is at threshold and outside the refractory window.

    Returns (new_state, event or None). Firing resets the receiver (the
    current diversion lets the wires re-superconduct), starts the refractory
    window, and routes the configured photon taps. The integrate-and-stop
    variant emits no pulse: its threshold crossing cuts the standing drive.
    """
    state = _decay(spec, state, t)
    if t < state.refractory_until:
        return state, None

    if spec.variant is Variant.SND_CONTINUOUS:
        receiver = spec.receiver
        i_eff = effective_bias(spec, state, t)
        slots_eff = min(state.tally, float(receiver.slot_count))
        if slots_eff <= 0.0 or i_eff <= 0.0:
            return state, None
        r_kohm = slots_eff * receiver.hotspot_resistance
        _, i_led = led_operating_point(r_kohm, spec.emitter, i_eff)
        expected = spec.emitter.efficiency * i_led * UA_TO_A \
            / ELEMENTARY_CHARGE_C * spec.refractory_period * NS_TO_S
        photons_out = _emitted_count(
            spec, expected, substream(seed, 1) if spec.stochastic_emission else None)
        if photons_out < 1:
            return state, None
    else:
        threshold = _effective_threshold(spec, state, t)
        if threshold is None or normal_count(state) < threshold:
            return state, None
        if spec.variant is Variant.INTEGRATE_AND_STOP:
            if not state.emitting:
                return state, None
            new_state = replace(state, emitting=False, tally=0.0,
                                occupied=frozenset(),
                                refractory_until=t + spec.refractory_period)
            return new_state, FiringEvent(t=t, photons_out=0, tap_self=0,
                                          tap_upstream=0,
                                          t_end=t + spec.refractory_period)
        expected = drive_photons(spec.emitter, spec.drive_current,
                                 spec.refractory_period)
        photons_out = _emitted_count(
            spec, expected, substream(seed, 1) if spec.stochastic_emission else None)

    tap_self, tap_up = _split_taps(spec, photons_out)
    feedback_tally = state.feedback_tally
    if spec.variant is Variant.SELF_FEEDBACK:
        feedback_tally += tap_self
    new_state = replace(state, tally=0.0, occupied=frozenset(),
                        feedback_tally=feedback_tally,
                        refractory_until=t + spec.refractory_period)
    event = FiringEvent(t=t, photons_out=photons_out, tap_self=tap_self,
                        tap_upstream=tap_up, t_end=t + spec.refractory_period)
    return new_state, event


def series_pair_step(upper_spec: NeuronSpec, upper_state: NeuronState,
                     lower_spec: NeuronSpec, lower_state: NeuronState,
                     t: float, seed: int = 0):
    """Advance a series-connected pair: upper firing inhibits the lower.

    The two neurons share a bias path, so a firing event in the upper neuron
    subtracts its drive current from the lower neuron's receiver bias for
    the upper's refractory window.

    Returns (upper_state, lower_state, upper_event).
    """
    upper_state, event = maybe_fire(upper_spec, upper_state, t, seed)
    if event is not None:
        lower_state = replace(lower_state,
                              series_deficit=upper_spec.drive_current,
                              series_deficit_until=event.t_end)
    return upper_state, lower_state, event
