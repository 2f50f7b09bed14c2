"""Simulator for superconducting optoelectronic spiking neurons and networks.

Photon-counting nanowire receivers and faint-light LED emitters compose
into spiking neurons; neurons connect through tunable waveguide couplers
into event-driven networks. Device transfer curves, firing-event energy
budgets, absorption statistics, and system-scaling arithmetic are all
reproducible from seeds.
"""

__version__ = "0.1.0"

from .detector import (
    AbsorptionStats,
    AlwaysFiresError,
    BiasPoint,
    PhotonCapExceededError,
    PndArray,
    SndWire,
    absorption_statistics,
    snd_absorb,
    snd_resistance,
    spike_probability,
    spike_probability_surface,
    threshold_at_half,
    threshold_count,
    threshold_staircase,
)
from .emitter import (
    LedJunction,
    diode_current,
    diode_voltage,
    junction_capacitance,
    led_operating_point,
    photon_current,
    photons_emitted,
    snd_led_operating_point,
    snd_transfer_curve,
)
from .energy import (
    EnergyBreakdown,
    EnergyModel,
    energy_per_event,
    wall_energy,
    wall_power,
)
from .neuron import (
    FiringEvent,
    NeuronSpec,
    NeuronState,
    NtronSwitch,
    Port,
    Variant,
    initial_state,
    maybe_fire,
    receive,
    series_pair_step,
)
from .network import (
    EventKind,
    EventQueue,
    Network,
    Simulation,
    Stimulus,
    Synapse,
    SynapseTable,
    TraceRecord,
    build_mlp,
    build_visual_cortex,
    largest_remainder,
    mlp_synapse_count,
    read_trace_binary,
    simulate,
    stdp_update,
    write_trace_binary,
)
from .floorplan import (
    FloorplanParams,
    PowerParams,
    PRESETS,
    layer_length,
    layer_width,
    neuron_density,
    system_power,
)
from .metrics import (
    JointHistogram,
    dynamic_range,
    marginal_entropies,
    mutual_information,
)
