"""Faint-light LED emitter model.

An abrupt p-n junction drives the light emission. The current-voltage law

    I(V) = e A (sqrt(D_p / tau_p) p_n + sqrt(D_n / tau_n) n_p) (e^(eV/kT) - 1)

is evaluated with diffusion coefficients D = mu kT/e derived from the
mobilities, and minority-carrier densities n_p = n_i^2 / N_A and
p_n = n_i^2 / N_D. The doping levels are calibration constants (degenerate
doping, 1e19 cm^-3 by default); the temperature inside the I-V law is held
at 300 K, where the degenerately doped junction behaves essentially as it
does at the cryogenic operating point.

The emitter couples to the series-nanowire receiver through a parallel
current divider: bias current splits between the resistive nanowire and the
diode, and the shared voltage is found by bracketed root finding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .constants import (
    ELEMENTARY_CHARGE_C,
    NS_TO_S,
    SILICON_NI_PER_CM3,
    UA_TO_A,
    VACUUM_PERMITTIVITY_F_PER_M,
    thermal_voltage,
)
from .detector import BiasPoint, SndWire, snd_absorb, snd_resistance


class VoltageClampError(ValueError):
    """Requested junction voltage beyond the configured clamp."""


class OperatingPointError(RuntimeError):
    """Root finder failed to satisfy the current-balance residual."""


@dataclass(frozen=True)
class LedJunction:
    """p-n junction LED parameters.

    mobility_n, mobility_p   carrier mobilities, cm^2/(V s)
    lifetime_n, lifetime_p   minority-carrier lifetimes, ns
    doping_n, doping_p       donor / acceptor densities, cm^-3
    area                     junction area, um^2
    temperature              junction temperature in the I-V law, K
    efficiency               photons out per electron through the junction
    cap_epsilon_rel          relative permittivity of the capacitor model
    cap_area                 parallel-plate area, um^2 (10 um x 100 nm default)
    cap_gap                  plate separation, nm
    v_clamp                  overflow guard on the junction voltage, V
    """

    mobility_n: float = 100.0
    mobility_p: float = 100.0
    lifetime_n: float = 40.0
    lifetime_p: float = 40.0
    doping_n: float = 1e19
    doping_p: float = 1e19
    area: float = 1.0
    temperature: float = 300.0
    efficiency: float = 0.01
    cap_epsilon_rel: float = 12.0
    cap_area: float = 1.0
    cap_gap: float = 300.0
    v_clamp: float = 1.5

    def __post_init__(self):
        positive = (self.mobility_n, self.mobility_p, self.lifetime_n,
                    self.lifetime_p, self.doping_n, self.doping_p, self.area,
                    self.temperature, self.cap_epsilon_rel, self.cap_area,
                    self.cap_gap, self.v_clamp)
        if min(positive) <= 0:
            raise ValueError("all junction parameters must be positive")
        if not 0.0 < self.efficiency <= 1.0:
            raise ValueError("efficiency must be in (0, 1]")

    @property
    def thermal_v(self) -> float:
        return thermal_voltage(self.temperature)

    @property
    def saturation_current_a(self) -> float:
        """Prefactor of the I-V law, amperes."""
        vt = self.thermal_v
        d_n = self.mobility_n * vt  # cm^2/s
        d_p = self.mobility_p * vt
        n_p = SILICON_NI_PER_CM3 ** 2 / self.doping_p  # cm^-3
        p_n = SILICON_NI_PER_CM3 ** 2 / self.doping_n
        area_cm2 = self.area * 1e-8
        flux = (math.sqrt(d_p / (self.lifetime_p * NS_TO_S)) * p_n
                + math.sqrt(d_n / (self.lifetime_n * NS_TO_S)) * n_p)
        return ELEMENTARY_CHARGE_C * area_cm2 * flux


def diode_current(junction: LedJunction, v: float) -> float:
    """Junction current at voltage v, in uA. Strictly increasing in v."""
    if not math.isfinite(v):
        raise ValueError("voltage must be finite")
    if v > junction.v_clamp:
        raise VoltageClampError(
            f"voltage {v} V beyond clamp {junction.v_clamp} V")
    i_a = junction.saturation_current_a * math.expm1(v / junction.thermal_v)
    return i_a / UA_TO_A


def diode_voltage(junction: LedJunction, i_ua: float) -> float:
    """Inverse of diode_current for forward currents, volts."""
    if i_ua < 0.0:
        raise ValueError("forward current expected")
    if i_ua == 0.0:
        return 0.0
    v = junction.thermal_v * math.log1p(
        i_ua * UA_TO_A / junction.saturation_current_a)
    if v > junction.v_clamp:
        raise VoltageClampError(
            f"current {i_ua} uA needs {v:.3f} V, beyond clamp")
    return v


def photon_current(junction: LedJunction, v: float) -> float:
    """Photon emission rate at voltage v, photons per second."""
    return junction.efficiency * diode_current(junction, v) * UA_TO_A \
        / ELEMENTARY_CHARGE_C


def junction_capacitance(junction: LedJunction) -> float:
    """Parallel-plate capacitance of the junction, farads."""
    area_m2 = junction.cap_area * 1e-12
    gap_m = junction.cap_gap * 1e-9
    return junction.cap_epsilon_rel * VACUUM_PERMITTIVITY_F_PER_M \
        * area_m2 / gap_m


def capacitor_energy(junction: LedJunction, v: float) -> float:
    """Energy stored on the junction capacitance at voltage v, joules."""
    return 0.5 * junction_capacitance(junction) * v * v


def led_operating_point(r_kohm: float, junction: LedJunction,
                        i_bias_ua: float) -> tuple[float, float]:
    """Shared voltage and LED current of a resistor/LED current divider.

    Solves i_bias = V / R + I_pn(V) for V by bracketed root finding; the
    residual is monotone in V so a root always exists below the voltage
    clamp. A zero resistance (superconducting path) shorts the LED. Returns
    (v_volts, i_led_ua); the residual is verified below 1e-6 * i_bias.
    """
    i_b_a = i_bias_ua * UA_TO_A
    if i_b_a <= 0.0:
        raise ValueError("bias current must be positive")
    if r_kohm < 0.0:
        raise ValueError("resistance must be nonnegative")
    if r_kohm == 0.0:
        return 0.0, 0.0
    r_ohm = r_kohm * 1e3

    i_sat = junction.saturation_current_a
    vt = junction.thermal_v

    def residual(v):
        return v / r_ohm + i_sat * math.expm1(v / vt) - i_b_a

    hi = min(junction.v_clamp, r_ohm * i_b_a)
    if residual(hi) < 0.0:
        hi = junction.v_clamp
    v = brentq(residual, 0.0, hi, xtol=1e-18, rtol=8.9e-16)
    res = abs(residual(v))
    if res >= 1e-6 * i_b_a:
        raise OperatingPointError(
            f"residual {res} A at V={v} V exceeds tolerance")
    i_led_a = i_b_a - v / r_ohm
    return float(v), float(i_led_a / UA_TO_A)


def snd_led_operating_point(wire: SndWire, junction: LedJunction,
                            bias: BiasPoint) -> tuple[float, float]:
    """Operating point of the series-nanowire/LED divider, (volts, uA)."""
    return led_operating_point(snd_resistance(wire), junction, bias.i_bias)


def expected_photons_emitted(wire: SndWire, junction: LedJunction,
                             bias: BiasPoint,
                             pulse_duration: float = 50.0) -> float:
    """Expected photon count over a pulse_duration (ns) emission window."""
    if pulse_duration <= 0.0:
        raise ValueError("pulse_duration must be positive")
    v, i_led_ua = snd_led_operating_point(wire, junction, bias)
    rate = junction.efficiency * i_led_ua * UA_TO_A / ELEMENTARY_CHARGE_C
    return rate * pulse_duration * NS_TO_S


def photons_emitted(wire: SndWire, junction: LedJunction, bias: BiasPoint,
                    pulse_duration: float = 50.0) -> int:
    """Photon count emitted in the window, floored to an integer."""
    return int(math.floor(expected_photons_emitted(
        wire, junction, bias, pulse_duration)))


def drive_photons(junction: LedJunction, drive_ua: float,
                  pulse_duration: float = 50.0) -> float:
    """Expected photons from driving drive_ua through the LED for the window.

    Used for the step-response (parallel-array) circuit, where the firing
    event diverts the full drive current through the diode.
    """
    if pulse_duration <= 0.0:
        raise ValueError("pulse_duration must be positive")
    rate = junction.efficiency * drive_ua * UA_TO_A / ELEMENTARY_CHARGE_C
    return rate * pulse_duration * NS_TO_S


def snd_transfer_curve(wire: SndWire, junction: LedJunction, bias: BiasPoint,
                       photon_counts, pulse_duration: float = 50.0,
                       seed: int = 0, cumulative: bool = True) -> list[tuple]:
    """Photons-out versus photons-in rows for the series-wire neuron.

    Rows are (photons_in, occupied_slots, resistance_kohm, v_led,
    photons_out). In cumulative mode one wire keeps absorbing and
    photons_in is the running total, which makes the curve exactly
    nondecreasing; in independent mode each point starts from a fresh wire.
    """
    counts = [int(n) for n in photon_counts]
    rows = []
    if cumulative:
        totals = sorted(set(counts))
        state = wire
        prev = 0
        for total in totals:
            state = snd_absorb(state, total - prev, seed=seed + total)
            prev = total
            v, _ = snd_led_operating_point(state, junction, bias)
            rows.append((total, len(state.occupied_slots),
                         snd_resistance(state), v,
                         photons_emitted(state, junction, bias,
                                         pulse_duration)))
    else:
        for n in counts:
            fresh = snd_absorb(wire, n, seed=seed + n)
            v, _ = snd_led_operating_point(fresh, junction, bias)
            rows.append((n, len(fresh.occupied_slots), snd_resistance(fresh),
                         v, photons_emitted(fresh, junction, bias,
                                            pulse_duration)))
    return rows
