"""Energy accounting for a firing event.

Three contributions are summed: re-supplying current to the superconducting
inductors (one receiver element per emitted photon plus a fixed series
inductor), charging the LED junction capacitance to its operating voltage,
and producing the photons themselves. The photon-production quantum is the
Si band gap divided by the LED efficiency; the band gap upper-bounds the
energy of any photon a silicon waveguide carries.

The current flowing in the inductors is a calibration constant (the wire
critical current by default): the anchor figures of roughly 2 aJ/photon at
unit efficiency and 20 aJ/photon at 1% efficiency pin it to the 4 uA
default used throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .constants import (
    AJ_TO_J,
    ELEMENTARY_CHARGE_C,
    J_TO_AJ,
    NS_TO_S,
    PHOTON_ENERGY_1220NM_J,
    SILICON_BANDGAP_J,
    UA_TO_A,
)
from .emitter import LedJunction, capacitor_energy, diode_voltage


@dataclass(frozen=True)
class EnergyModel:
    """Inputs of the firing-event energy budget.

    sheet_inductance     superconductor sheet inductance, pH per square
    squares_per_element  squares of one receiver element (one per photon)
    series_squares       squares of the fixed series inductor
    photon_quantum_j     energy spent producing one photon before efficiency
    efficiency           LED efficiency (photons out per electron)
    i_wire               current re-supplied to each inductor, uA
    junction             LED used for the capacitive term
    emission_window      window over which the photons are emitted, ns
    v_led                override for the capacitive-term voltage, volts
                         (None derives it from the drive current needed to
                         emit n_photons within the window)
    """

    efficiency: float = 0.01
    sheet_inductance: float = 400.0
    squares_per_element: float = 500.0
    series_squares: float = 5000.0
    photon_quantum_j: float = SILICON_BANDGAP_J
    i_wire: float = 4.0
    junction: LedJunction = field(default_factory=LedJunction)
    emission_window: float = 50.0
    v_led: float | None = None

    def __post_init__(self):
        if not 0.0 < self.efficiency <= 1.0:
            raise ValueError("efficiency must be in (0, 1]")
        if min(self.sheet_inductance, self.squares_per_element,
               self.series_squares, self.photon_quantum_j, self.i_wire,
               self.emission_window) <= 0:
            raise ValueError("all energy-model parameters must be positive")


@dataclass(frozen=True)
class EnergyBreakdown:
    """Firing-event energy, attojoules."""

    total: float
    inductive: float
    capacitive: float
    photonic: float
    per_photon: float


def operating_voltage(model: EnergyModel, n_photons: int) -> float:
    """LED voltage while emitting n_photons within the emission window."""
    if model.v_led is not None:
        return model.v_led
    rate = n_photons / (model.emission_window * NS_TO_S)  # photons/s
    i_led_ua = rate * ELEMENTARY_CHARGE_C / model.efficiency / UA_TO_A
    return diode_voltage(model.junction, i_led_ua)


def energy_per_event(model: EnergyModel, n_photons: int) -> EnergyBreakdown:
    """Energy of one firing event that emits n_photons photons.

    photonic   = quantum * n / efficiency           (linear in n)
    inductive  = L_sq * (series + n * per_element) * i^2 / 2   (affine in n)
    capacitive = C V^2 / 2 at the operating voltage (n-dependent through V)
    """
    if n_photons < 1:
        raise ValueError("n_photons must be >= 1")
    photonic_j = model.photon_quantum_j * n_photons / model.efficiency
    l_per_sq = model.sheet_inductance * 1e-12  # H
    squares = model.series_squares + n_photons * model.squares_per_element
    i_a = model.i_wire * UA_TO_A
    inductive_j = 0.5 * l_per_sq * squares * i_a * i_a
    capacitive_j = capacitor_energy(model.junction,
                                    operating_voltage(model, n_photons))
    total_j = photonic_j + inductive_j + capacitive_j
    return EnergyBreakdown(
        total=total_j * J_TO_AJ,
        inductive=inductive_j * J_TO_AJ,
        capacitive=capacitive_j * J_TO_AJ,
        photonic=photonic_j * J_TO_AJ,
        per_photon=total_j * J_TO_AJ / n_photons,
    )


def photon_floor_aj() -> float:
    """Hard lower bound on energy per photon: h nu at 1.22 um, attojoules."""
    return PHOTON_ENERGY_1220NM_J * J_TO_AJ


def wall_energy(e_synapse_aj: float, cooling_w_per_w: float = 1000.0) -> float:
    """Per-synapse-event energy referred to the wall plug, attojoules.

    Holding the system at its operating temperature costs a fixed multiple
    of the device power (1 kW per W for a 2 K stage with a 15% efficient
    cooler), so wall energy is device energy times that factor.
    """
    if cooling_w_per_w < 1.0:
        raise ValueError("cooling factor must be >= 1")
    return e_synapse_aj * cooling_w_per_w


def wall_power(model: EnergyModel, n_photons: int,
               cooling_w_per_w: float = 1000.0) -> float:
    """Wall-plug energy per synapse event for a firing of n_photons, aJ.

    The per-synapse energy is the per-photon energy: a neuron thresholding
    on as many photons as it has connections spends one emitted photon per
    downstream synapse.
    """
    breakdown = energy_per_event(model, n_photons)
    return wall_energy(breakdown.per_photon, cooling_w_per_w)
