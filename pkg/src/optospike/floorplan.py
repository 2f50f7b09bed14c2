"""Die-geometry and system-power arithmetic.

Layer geometry follows the routing model for fully connected feedforward
layers: taps, gaps, and crossings run along the layer for each neuron's
synapses, shared across vertically stacked waveguide planes, plus the
interlayer couplers and the neuron bodies themselves.

The layer width is not pinned by a published formula; the width model used
here assumes each of the N_n neurons receives N_n waveguides at the minimum
pitch, shared across the waveguide planes (W = pitch * N_n^2 / N_wg). It is
pluggable, and density figures derived from it are order-of-magnitude.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

CM2_PER_UM2 = 1e-8


@dataclass(frozen=True)
class FloorplanParams:
    """Geometry inputs, lengths in um unless noted.

    l_tap         length of one tap (synapse) along the layer
    l_gap         gap between vertically running waveguides (undercut room)
    l_cross       length of an intralayer waveguide crossing
    l_interlayer  length of one interlayer coupler
    wg_pitch      minimum inter-waveguide gap, nm
    n_neurons     neurons per layer
    n_wg_planes   vertically stacked waveguide routing planes
    die_edge      die edge length, cm
    """

    n_neurons: int
    n_wg_planes: int = 1
    l_tap: float = 10.0
    l_gap: float = 5.0
    l_cross: float = 3.0
    l_interlayer: float = 10.0
    wg_pitch: float = 600.0
    die_edge: float = 10.0

    def __post_init__(self):
        if self.n_neurons < 1 or self.n_wg_planes < 1:
            raise ValueError("counts must be >= 1")
        if min(self.l_tap, self.l_gap, self.l_cross, self.l_interlayer,
               self.wg_pitch, self.die_edge) <= 0:
            raise ValueError("all lengths must be positive")


def neuron_length(p: FloorplanParams) -> float:
    """Length of one neuron body, um: its input waveguides at minimum pitch."""
    return p.wg_pitch * 1e-3 * p.n_neurons


def layer_length(p: FloorplanParams) -> float:
    """Length of one fully connected layer, um.

    (L_tap + L_gap + L_cross) * N_n / N_wg + 2 * L_wg * N_wg + L_n
    """
    return ((p.l_tap + p.l_gap + p.l_cross) * p.n_neurons / p.n_wg_planes
            + 2.0 * p.l_interlayer * p.n_wg_planes
            + neuron_length(p))


def layer_width(p: FloorplanParams) -> float:
    """Default width model, um: N_n neurons x N_n waveguides at pitch,
    shared across the routing planes."""
    return p.wg_pitch * 1e-3 * p.n_neurons * p.n_neurons / p.n_wg_planes


def neuron_density(p: FloorplanParams,
                   width_model: Callable[[FloorplanParams], float] = layer_width
                   ) -> float:
    """Neurons per cm^2 for fully connected layers (N_conn = N_n)."""
    area_um2 = layer_length(p) * width_model(p)
    return p.n_neurons / (area_um2 * CM2_PER_UM2)


def density_scan(n_conns, n_wg_planes, **overrides) -> list[dict]:
    """Density table over connection counts; one dict per (n_conn, n_wg)."""
    rows = []
    for n_wg in n_wg_planes:
        for n_conn in n_conns:
            p = FloorplanParams(n_neurons=int(n_conn), n_wg_planes=int(n_wg),
                                **overrides)
            rows.append(dict(n_conn=int(n_conn), n_wg=int(n_wg),
                             l_l_um=layer_length(p), w_l_um=layer_width(p),
                             density_per_cm2=neuron_density(p)))
    return rows


@dataclass(frozen=True)
class PowerParams:
    """System-power inputs.

    e_synapse     energy per synapse event, aJ
    n_conn        connections per processing unit
    rate          sustained firing rate per unit, Hz
    n_units       number of processing units
    cooling       wall watts per device watt
    headline_power_w  quoted total power the throughput figures refer to;
                  None uses the computed device power
    """

    n_units: float
    e_synapse: float = 20.0
    n_conn: int = 700
    rate: float = 2e4
    cooling: float = 1000.0
    headline_power_w: float | None = None

    def __post_init__(self):
        if min(self.n_units, self.e_synapse, self.n_conn, self.rate,
               self.cooling) <= 0:
            raise ValueError("all power parameters must be positive")


@dataclass(frozen=True)
class SystemPower:
    """Computed power figures."""

    device_w: float
    wall_w: float
    events_per_s: float
    events_per_s_per_w_device: float
    events_per_s_per_w_wall: float


def system_power(p: PowerParams) -> SystemPower:
    """Device and wall power plus synapse-event throughput per watt.

    The throughput ratios are quoted against the headline power when the
    preset pins one (matching how such figures are usually reported: the
    rounded headline number, with cooling multiplying it for the wall
    figure); otherwise against the computed device power.
    """
    events_per_s = p.n_units * p.n_conn * p.rate
    device_w = events_per_s * p.e_synapse * 1e-18
    ref_w = p.headline_power_w if p.headline_power_w is not None else device_w
    return SystemPower(
        device_w=device_w,
        wall_w=device_w * p.cooling,
        events_per_s=events_per_s,
        events_per_s_per_w_device=events_per_s / ref_w,
        events_per_s_per_w_wall=events_per_s / (ref_w * p.cooling),
    )


# One-cubic-meter machine: 7e9 units of 700 connections firing sparsely at
# 20 kHz with 20 aJ per synapse event, quoted against the 2 W headline.
PAPER_1M3 = PowerParams(n_units=7e9, e_synapse=20.0, n_conn=700, rate=2e4,
                        cooling=1000.0, headline_power_w=2.0)

# Human-brain comparison point: 1e11 neurons, 7e3 synapses each, ~1 Hz,
# against the body's 100 W. e_synapse is back-derived for consistency.
BRAIN = PowerParams(n_units=1e11, e_synapse=100.0 / (1e11 * 7e3 * 1.0) * 1e18,
                    n_conn=7000, rate=1.0, cooling=1.0,
                    headline_power_w=100.0)

PRESETS = {"paper-1m3": PAPER_1M3, "brain": BRAIN}
