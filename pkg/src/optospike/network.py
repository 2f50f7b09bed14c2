"""Event-driven simulation of spiking optoelectronic networks.

Neurons are connected by directed synapses implemented as mechanically
tunable waveguide couplers: a fraction `coupling` in [c_min, 1] of the
photons entering the synapse reaches the downstream port, with the floor
c_min set in hardware by the rest gap. Charge accumulated on the coupler's
actuation capacitor pulls the waveguides together, so coupling is a
monotone saturating function of charge; causal pre-before-post firing
pairs deposit charge (timing-dependent potentiation). Only the causal
direction is modeled, and only excitatory synapses take part.

The event queue processes events in (time, kind rank, source id, sequence)
order, a total order, so a run is a pure function of (network, stimuli,
seed) and independent runs can be fanned out across workers freely.

Synapse state is stored column-wise, with constant columns kept as scalars
until first written, so that networks with tens of millions of edges can be
built in memory; `Synapse` records are materialized views of single rows.
"""

from __future__ import annotations

import heapq
import math
import struct
from dataclasses import dataclass, field, replace
from enum import IntEnum

import numpy as np

from .detector import BiasPoint, PndArray
from .neuron import (
    FiringEvent,
    NeuronSpec,
    NeuronState,
    Port,
    Variant,
    initial_state,
    maybe_fire,
    receive,
)
from .sampling import substream

GROUP_INDEX_DEFAULT = 3.52
_TRACE_RECORD = struct.Struct("<QII")  # time (fs), neuron id, photon count


def propagation_delay_ns(path_length_um: float,
                         group_index: float = GROUP_INDEX_DEFAULT) -> float:
    """Optical propagation delay along a waveguide path, ns."""
    return path_length_um * 1e-6 * group_index / 2.99792458e8 / 1e-9


DEFAULT_DELAY_NS = propagation_delay_ns(100.0)


def largest_remainder(values, total: int) -> list[int]:
    """Round nonnegative reals summing to `total` into integers that do.

    Floors every value, then hands the remaining units to the largest
    fractional parts (ties broken by index), so the result is deterministic
    and sums to `total` exactly.
    """
    floors = [int(math.floor(v)) for v in values]
    remainder = total - sum(floors)
    if remainder < 0 or remainder > len(values):
        raise ValueError("values do not sum to total")
    order = sorted(range(len(values)),
                   key=lambda i: (floors[i] - values[i], i))
    for i in order[:remainder]:
        floors[i] += 1
    return floors


def coupling_from_charge(charge: float, c_min: float,
                         q_scale: float = 1.0) -> float:
    """Monotone saturating map from actuation charge to coupling."""
    if charge < 0.0:
        charge = 0.0
    return c_min + (1.0 - c_min) * -math.expm1(-charge / q_scale)


def charge_from_coupling(coupling: float, c_min: float,
                         q_scale: float = 1.0) -> float:
    """Inverse of coupling_from_charge; coupling == 1 maps to infinity."""
    span = (coupling - c_min) / (1.0 - c_min)
    if span >= 1.0:
        return math.inf
    if span <= 0.0:
        return 0.0
    return -q_scale * math.log1p(-span)


@dataclass
class Synapse:
    """One directed connection; a materialized row of the synapse table.

    coupling is kept consistent with charge through the monotone map.
    delay defaults to the propagation time over a 100 um waveguide path.
    share is this synapse's fraction of the source neuron's downstream
    photon budget (shares of one source sum to 1; nan means "assign me an
    equal split at validation").
    """

    src: int
    dst: int
    dst_port: Port = Port.EXCITE
    coupling: float = 0.05
    c_min: float = 0.05
    charge: float = 0.0
    q_scale: float = 1.0
    stdp_window: float = 10.0            # ns
    delta_q_pot: float = 0.1
    update_interval_min: float = 1000.0  # ns
    delay: float = DEFAULT_DELAY_NS      # ns
    share: float = 1.0
    last_pre_t: float = -math.inf
    last_update_t: float = -math.inf

    def __post_init__(self):
        if not 0.0 <= self.c_min <= 1.0:
            raise ValueError("c_min must be in [0, 1]")
        if not self.c_min <= self.coupling <= 1.0:
            raise ValueError("coupling must be in [c_min, 1]")
        if self.delay < 0.0:
            raise ValueError("delay must be nonnegative")
        # keep the (charge, coupling) pair on the monotone map: a rest
        # charge of zero adopts the given coupling, a nonzero charge wins
        if self.charge == 0.0:
            self.charge = charge_from_coupling(self.coupling, self.c_min,
                                               self.q_scale)
        else:
            self.coupling = coupling_from_charge(self.charge, self.c_min,
                                                 self.q_scale)


def stdp_update(synapse: Synapse, t_pre: float, t_post: float) -> Synapse:
    """Apply the causal-pairing potentiation rule; returns the new synapse.

    A post firing within stdp_window after a pre arrival deposits
    delta_q_pot of charge and recomputes the coupling. Anti-causal and
    out-of-window pairings change nothing. Updates are rate-limited: a
    synapse updated less than update_interval_min ago is left unchanged.
    """
    dt = t_post - t_pre
    if not 0.0 < dt <= synapse.stdp_window:
        return synapse
    if t_post - synapse.last_update_t < synapse.update_interval_min:
        return synapse
    charge = synapse.charge + synapse.delta_q_pot
    return replace(synapse, charge=charge,
                   coupling=coupling_from_charge(charge, synapse.c_min,
                                                 synapse.q_scale),
                   last_update_t=t_post)


class SynapseTable:
    """Column-wise synapse storage with Synapse-record row views.

    Float columns passed as scalars stay scalar (a constant column) until
    the first per-row write, which keeps huge uniform networks cheap.
    """

    FLOAT_COLS = ("coupling", "c_min", "charge", "q_scale", "stdp_window",
                  "delta_q_pot", "update_interval_min", "delay", "share",
                  "last_pre_t", "last_update_t")
    _DEFAULTS = dict(coupling=0.05, c_min=0.05, charge=0.0, q_scale=1.0,
                     stdp_window=10.0, delta_q_pot=0.1,
                     update_interval_min=1000.0, delay=DEFAULT_DELAY_NS,
                     share=math.nan, last_pre_t=-math.inf,
                     last_update_t=-math.inf)

    def __init__(self, src, dst, port, **columns):
        self.src = np.asarray(src, dtype=np.int64)
        self.dst = np.asarray(dst, dtype=np.int64)
        self.port = np.asarray(port, dtype=np.uint8)  # 0 excite, 1 inhibit
        n = len(self.src)
        if len(self.dst) != n or len(self.port) != n:
            raise ValueError("column lengths differ")
        unknown = set(columns) - set(self.FLOAT_COLS)
        if unknown:
            raise ValueError(f"unknown synapse columns: {sorted(unknown)}")
        self._cols: dict[str, float | np.ndarray] = {}
        for name in self.FLOAT_COLS:
            value = columns.get(name, self._DEFAULTS[name])
            if np.ndim(value) == 0:
                self._cols[name] = float(value)
            else:
                arr = np.asarray(value, dtype=np.float64)
                if len(arr) != n:
                    raise ValueError(f"column {name} has wrong length")
                self._cols[name] = arr
        self._sync_charge()
        self._out_index: dict[int, np.ndarray] | None = None
        self._in_index: dict[int, np.ndarray] | None = None

    def _sync_charge(self) -> None:
        """Keep (charge, coupling) on the monotone map, like Synapse does."""
        charge, coupling = self._cols["charge"], self._cols["coupling"]
        c_min, q_scale = self._cols["c_min"], self._cols["q_scale"]
        scalar = all(not isinstance(c, np.ndarray)
                     for c in (charge, coupling, c_min, q_scale))
        if scalar:
            if charge == 0.0:
                self._cols["charge"] = charge_from_coupling(
                    coupling, c_min, q_scale)
            else:
                self._cols["coupling"] = coupling_from_charge(
                    charge, c_min, q_scale)
            return
        n = len(self)
        charge = np.broadcast_to(np.asarray(charge, dtype=float), n).copy()
        coupling = np.broadcast_to(np.asarray(coupling, dtype=float), n).copy()
        c_min = np.broadcast_to(np.asarray(c_min, dtype=float), n)
        q_scale = np.broadcast_to(np.asarray(q_scale, dtype=float), n)
        rest = charge == 0.0
        span = (coupling[rest] - c_min[rest]) / (1.0 - c_min[rest])
        with np.errstate(divide="ignore"):
            charge[rest] = np.where(span >= 1.0, np.inf,
                                    -q_scale[rest] * np.log1p(-np.minimum(
                                        span, 1.0 - 1e-300)))
        active = ~rest
        coupling[active] = c_min[active] + (1.0 - c_min[active]) \
            * -np.expm1(-charge[active] / q_scale[active])
        self._cols["charge"] = charge
        self._cols["coupling"] = coupling

    @classmethod
    def from_records(cls, records) -> "SynapseTable":
        records = list(records)
        cols = {name: np.array([getattr(r, name) for r in records])
                for name in cls.FLOAT_COLS}
        return cls([r.src for r in records], [r.dst for r in records],
                   [0 if r.dst_port is Port.EXCITE else 1 for r in records],
                   **cols)

    def __len__(self) -> int:
        return len(self.src)

    def values(self, name: str) -> np.ndarray:
        """Column as an array (read-only broadcast view if still scalar)."""
        col = self._cols[name]
        if isinstance(col, np.ndarray):
            return col
        return np.broadcast_to(col, len(self))

    def value(self, name: str, i: int) -> float:
        col = self._cols[name]
        return float(col if not isinstance(col, np.ndarray) else col[i])

    def set_value(self, name: str, i: int, v: float) -> None:
        col = self._cols[name]
        if not isinstance(col, np.ndarray):
            col = np.full(len(self), col)
            self._cols[name] = col
        col[i] = v

    def row(self, i: int) -> Synapse:
        return Synapse(
            src=int(self.src[i]), dst=int(self.dst[i]),
            dst_port=Port.EXCITE if self.port[i] == 0 else Port.INHIBIT,
            **{name: self.value(name, i) for name in self.FLOAT_COLS})

    def write(self, i: int, record: Synapse) -> None:
        for name in self.FLOAT_COLS:
            if self.value(name, i) != getattr(record, name):
                self.set_value(name, i, getattr(record, name))

    def __iter__(self):
        return (self.row(i) for i in range(len(self)))

    def out_edges(self, neuron_id: int) -> np.ndarray:
        """Row indices of synapses leaving neuron_id."""
        if self._out_index is None:
            self._out_index = self._build_index(self.src)
        return self._out_index.get(neuron_id, np.empty(0, dtype=np.int64))

    def in_edges(self, neuron_id: int) -> np.ndarray:
        if self._in_index is None:
            self._in_index = self._build_index(self.dst)
        return self._in_index.get(neuron_id, np.empty(0, dtype=np.int64))

    @staticmethod
    def _build_index(keys: np.ndarray) -> dict[int, np.ndarray]:
        order = np.argsort(keys, kind="stable")
        sorted_keys = keys[order]
        uniq, starts = np.unique(sorted_keys, return_index=True)
        bounds = list(starts) + [len(keys)]
        return {int(k): order[bounds[i]:bounds[i + 1]]
                for i, k in enumerate(uniq)}

    def copy(self) -> "SynapseTable":
        """Snapshot of the mutable synapse state.

        Topology columns (src, dst, port) are immutable by convention and
        shared; float columns are copied (scalars stay scalar).
        """
        clone = object.__new__(SynapseTable)
        clone.src, clone.dst, clone.port = self.src, self.dst, self.port
        clone._cols = {name: (col if not isinstance(col, np.ndarray)
                              else col.copy())
                       for name, col in self._cols.items()}
        clone._out_index = self._out_index
        clone._in_index = self._in_index
        return clone

    def normalize_shares(self) -> None:
        """Give unset (nan) shares an equal split of each source's fan-out."""
        col = self._cols["share"]
        if not isinstance(col, np.ndarray):
            if math.isnan(col):
                _, inverse, counts = np.unique(self.src, return_inverse=True,
                                               return_counts=True)
                self._cols["share"] = 1.0 / counts[inverse]
            return
        nan = np.isnan(col)
        if not nan.any():
            return
        for src in np.unique(self.src[nan]):
            rows = np.flatnonzero(self.src == src)
            unset = rows[np.isnan(col[rows])]
            assigned = col[rows][~np.isnan(col[rows])].sum()
            col[unset] = (1.0 - assigned) / len(unset)


@dataclass(frozen=True)
class Stimulus:
    """External photon injection."""

    t: float
    neuron: int
    port: Port = Port.EXCITE
    photons: int = 1


@dataclass
class Network:
    """Directed weighted graph of neuron specs plus external stimuli."""

    neurons: dict[int, NeuronSpec]
    synapses: SynapseTable
    stimuli: list[Stimulus] = field(default_factory=list)

    def validate(self) -> None:
        ids = set(self.neurons)
        for arr in (self.synapses.src, self.synapses.dst):
            missing = set(int(x) for x in np.unique(arr)) - ids
            if missing:
                raise ValueError(f"synapse references unknown neurons {missing}")
        delays = self.synapses._cols["delay"]
        if (delays < 0.0).any() if isinstance(delays, np.ndarray) else delays < 0.0:
            raise ValueError("synapse delays must be nonnegative")
        for s in self.stimuli:
            if s.neuron not in ids:
                raise ValueError(f"stimulus references unknown neuron {s.neuron}")
        self.synapses.normalize_shares()


class EventKind(IntEnum):
    """Tie-break rank for simultaneous events (lower processes first)."""

    REFRACTORY_END = 0
    PHOTON_ARRIVAL = 1
    WEIGHT_UPDATE = 2
    DECAY_CHECKPOINT = 3


@dataclass(frozen=True, order=True)
class _Event:
    t: float
    kind: int
    src: int
    seq: int
    payload: tuple = field(compare=False, default=())


class EventQueue:
    """Time-ordered event multiset with a deterministic total order.

    Ties are broken by (event kind rank, source id, insertion sequence), so
    replaying the same pushes always pops the same order.
    """

    def __init__(self):
        self._heap: list[_Event] = []
        self._seq = 0

    def push(self, t: float, kind: EventKind, src: int,
             payload: tuple = ()) -> None:
        heapq.heappush(self._heap,
                       _Event(t, int(kind), src, self._seq, payload))
        self._seq += 1

    def pop(self) -> _Event:
        return heapq.heappop(self._heap)

    def peek(self) -> _Event | None:
        return self._heap[0] if self._heap else None

    def __len__(self) -> int:
        return len(self._heap)


@dataclass(frozen=True)
class TraceRecord:
    """One firing event in a simulation trace."""

    t: float
    neuron: int
    photons_out: int


class Simulation:
    """Event-driven simulation run over a network.

    All randomness derives from (seed, event sequence number), and the
    mutable synapse state is snapshotted at construction, so a run is a
    pure function of (network, stimuli, seed): the caller's Network object
    is never mutated, and two runs over it with the same seed produce
    identical traces. The evolved couplings are readable at
    `sim.net.synapses` afterwards.
    """

    def __init__(self, net: Network, seed: int = 0,
                 record_deliveries: bool = False):
        net.validate()
        self.net = Network(neurons=net.neurons,
                           synapses=net.synapses.copy(),
                           stimuli=net.stimuli)
        self.seed = seed
        self.queue = EventQueue()
        self.states: dict[int, NeuronState] = {
            nid: initial_state(spec) for nid, spec in net.neurons.items()}
        self.trace: list[TraceRecord] = []
        # (t, src, downstream budget, per-synapse counts, photons lost in
        # couplers); kept only when asked, for conservation checks
        self.deliveries: list[tuple] | None = [] if record_deliveries else None
        self.now = 0.0
        for s in sorted(net.stimuli, key=lambda s: (s.t, s.neuron)):
            self.queue.push(s.t, EventKind.PHOTON_ARRIVAL, -1,
                            (s.neuron, s.port, s.photons, -1))

    def step(self, until: float) -> list[TraceRecord]:
        """Process all events up to and including time `until` (ns).

        Returns the trace records appended during this call.
        """
        if until < self.now:
            raise ValueError("cannot step backwards in time")
        start = len(self.trace)
        while True:
            head = self.queue.peek()
            if head is None or head.t > until:
                break
            event = self.queue.pop()
            if event.t < self.now:
                raise RuntimeError("event scheduled before current time")
            self.now = event.t
            self._dispatch(event)
        self.now = until
        return self.trace[start:]

    # -- event handlers ----------------------------------------------------

    def _dispatch(self, event: _Event) -> None:
        kind = EventKind(event.kind)
        if kind is EventKind.PHOTON_ARRIVAL:
            dst, port, photons, syn_row = event.payload
            self._photon_arrival(event, dst, port, photons, syn_row)
        elif kind in (EventKind.REFRACTORY_END, EventKind.DECAY_CHECKPOINT):
            self._try_fire(event, event.payload[0])
        elif kind is EventKind.WEIGHT_UPDATE:
            row, coupling = event.payload
            self._apply_weight(row, coupling)

    def _photon_arrival(self, event, dst, port, photons, syn_row) -> None:
        spec = self.net.neurons[dst]
        state = receive(spec, self.states[dst], photons, port, event.t,
                        seed=self._event_seed(event))
        self.states[dst] = state
        self._try_fire(event, dst)

    def _try_fire(self, event, neuron_id) -> None:
        spec = self.net.neurons[neuron_id]
        state, fired = maybe_fire(spec, self.states[neuron_id], event.t,
                                  seed=self._event_seed(event))
        self.states[neuron_id] = state
        if fired is not None:
            self._handle_firing(neuron_id, fired)

    def _handle_firing(self, neuron_id: int, fired: FiringEvent) -> None:
        self.trace.append(TraceRecord(fired.t, neuron_id, fired.photons_out))
        self.queue.push(fired.t_end, EventKind.REFRACTORY_END, neuron_id,
                        (neuron_id,))
        table = self.net.synapses
        rows = table.out_edges(neuron_id)
        budget = fired.downstream
        if len(rows) and budget > 0:
            shares = table.values("share")[rows]
            couplings = table.values("coupling")[rows]
            delivered_exact = budget * shares * couplings
            lost_exact = budget - float(delivered_exact.sum())
            parts = largest_remainder(
                list(delivered_exact) + [max(lost_exact, 0.0)], budget)
            if self.deliveries is not None:
                self.deliveries.append((fired.t, neuron_id, budget,
                                        parts[:-1], parts[-1]))
            for row, count in zip(rows, parts[:-1]):
                if count <= 0:
                    continue
                port = Port.EXCITE if table.port[row] == 0 else Port.INHIBIT
                if port is Port.EXCITE:
                    # the pre timestamp of the causal-pairing rule is the
                    # upstream firing event itself
                    table.set_value("last_pre_t", int(row), fired.t)
                self.queue.push(fired.t + table.value("delay", row),
                                EventKind.PHOTON_ARRIVAL, neuron_id,
                                (int(table.dst[row]), port, count, int(row)))
        elif self.deliveries is not None:
            self.deliveries.append((fired.t, neuron_id, budget, [], budget))
        # causal plasticity on the incoming excitatory synapses
        for row in table.in_edges(neuron_id):
            if table.port[row] != 0:
                continue  # inhibitory synapses do not take part
            pre = table.value("last_pre_t", int(row))
            if math.isfinite(pre):
                updated = stdp_update(table.row(int(row)), pre, fired.t)
                table.write(int(row), updated)

    def _apply_weight(self, row: int, coupling: float) -> None:
        table = self.net.synapses
        c_min = table.value("c_min", row)
        value = min(max(coupling, c_min), 1.0)
        table.set_value("coupling", row, value)
        table.set_value("charge", row,
                        charge_from_coupling(value, c_min,
                                             table.value("q_scale", row)))
        table.set_value("last_update_t", row, -math.inf)

    def _event_seed(self, event: _Event) -> int:
        return (int(self.seed) << 20) ^ (event.seq + 1)


def step(net: Network, queue_or_sim, until: float,
         seed: int = 0) -> list[TraceRecord]:
    """Advance a simulation to `until`.

    Accepts an existing Simulation (resumes it) or anything else (starts a
    fresh run over net with the given seed).
    """
    sim = queue_or_sim if isinstance(queue_or_sim, Simulation) \
        else Simulation(net, seed)
    return sim.step(until)


def simulate(net: Network, until: float, seed: int = 0) -> list[TraceRecord]:
    """Run a fresh simulation of `net` up to time `until` (ns)."""
    return Simulation(net, seed).step(until)


# -- topology builders -----------------------------------------------------


def _relay_spec(**overrides) -> NeuronSpec:
    """Single-wire threshold relay used for input layers."""
    defaults = dict(
        receiver=PndArray(n_wires=1, i_c_wire=4.0, alpha=0.05, n_passes=100),
        bias_receiver=BiasPoint.from_fraction(0.5, 4.0),
        variant=Variant.PND_STEP,
    )
    defaults.update(overrides)
    return NeuronSpec(**defaults)


def _layer_spec(n_wires: int = 5, bias_fraction: float = 0.7,
                **overrides) -> NeuronSpec:
    array = PndArray(n_wires=n_wires, i_c_wire=4.0, alpha=0.05, n_passes=100)
    defaults = dict(
        receiver=array,
        bias_receiver=BiasPoint.from_fraction(bias_fraction, array.i_c),
        variant=Variant.PND_STEP,
    )
    defaults.update(overrides)
    return NeuronSpec(**defaults)


def build_mlp(n_inputs: int, n_per_layer: int, n_layers: int,
              weights_init=1.0, *, c_min: float = 0.05, seed: int = 0,
              neuron_spec: NeuronSpec | None = None,
              input_spec: NeuronSpec | None = None) -> Network:
    """Fully connected feedforward network.

    Layer 0 holds n_inputs relay neurons driven by external stimuli; each of
    the n_layers processing layers holds n_per_layer neurons, and every
    neuron of one layer connects to every neuron of the next. weights_init
    is either a coupling value in [c_min, 1] applied uniformly or the string
    "random" for couplings drawn uniformly from [c_min, 1] under `seed`.
    """
    if min(n_inputs, n_per_layer, n_layers) < 1:
        raise ValueError("all layer sizes must be >= 1")
    relay = input_spec or _relay_spec()
    hidden = neuron_spec or _layer_spec()
    neurons: dict[int, NeuronSpec] = {}
    layers: list[np.ndarray] = []
    next_id = 0
    for size, spec in [(n_inputs, relay)] + [(n_per_layer, hidden)] * n_layers:
        ids = np.arange(next_id, next_id + size, dtype=np.int64)
        neurons.update({int(i): spec for i in ids})
        layers.append(ids)
        next_id += size

    src_cols, dst_cols = [], []
    for a, b in zip(layers[:-1], layers[1:]):
        src_cols.append(np.repeat(a, len(b)))
        dst_cols.append(np.tile(b, len(a)))
    src = np.concatenate(src_cols)
    dst = np.concatenate(dst_cols)
    n_syn = len(src)
    if isinstance(weights_init, str):
        if weights_init != "random":
            raise ValueError("weights_init must be a coupling or 'random'")
        coupling = substream(seed, 0xC0).uniform(c_min, 1.0, size=n_syn)
    else:
        coupling = float(weights_init)
        if not c_min <= coupling <= 1.0:
            raise ValueError("uniform weight outside [c_min, 1]")
    table = SynapseTable(src, dst, np.zeros(n_syn, dtype=np.uint8),
                         coupling=coupling, c_min=c_min)
    net = Network(neurons=neurons, synapses=table)
    net.validate()
    return net


def mlp_synapse_count(n_inputs: int, n_per_layer: int, n_layers: int) -> int:
    """Synapse count of build_mlp without building it."""
    return n_inputs * n_per_layer + (n_layers - 1) * n_per_layer * n_per_layer


def build_visual_cortex(pixels: int, n_granular: int, n_supragranular: int, *,
                        n_thalamus: int | None = None, pixel_branch: int = 2,
                        thalamus_branch: int = 3, inhibit_fraction: float = 0.2,
                        granular_branch: int = 10, feedback_branch: int = 2,
                        recurrent_branch: int = 10, c_min: float = 0.05,
                        coupling: float = 1.0, seed: int = 0) -> Network:
    """Retina / thalamus / two-layer cortex topology.

    Pixels are relay neurons driven by external light. Each pixel projects
    to a few thalamic neurons and the thalamus projects onward with low
    branching, both with a mix of excitatory and inhibitory connections.
    The granular layer receives the thalamic feedforward drive, sends
    feedback to the thalamus, and projects (branching more heavily) to the
    supragranular layer, which is heavily recurrent and also feeds back to
    the granular layer. The thalamus has no intra-layer synapses.
    """
    if min(pixels, n_granular, n_supragranular) < 1:
        raise ValueError("all population sizes must be >= 1")
    n_thalamus = n_thalamus or pixels
    rng = substream(seed, 0x1C)

    blocks: dict[str, np.ndarray] = {}
    next_id = 0
    for name, size in [("retina", pixels), ("thalamus", n_thalamus),
                       ("granular", n_granular),
                       ("supragranular", n_supragranular)]:
        blocks[name] = np.arange(next_id, next_id + size, dtype=np.int64)
        next_id += size

    inhibitory = PndArray(n_wires=3, i_c_wire=4.0, alpha=0.05, n_passes=100)
    relay = _relay_spec()
    dual = _layer_spec(variant=Variant.DUAL_PORT,
                       inhibitory_receiver=inhibitory)
    neurons: dict[int, NeuronSpec] = {}
    for i in blocks["retina"]:
        neurons[int(i)] = relay
    for name in ("thalamus", "granular", "supragranular"):
        for i in blocks[name]:
            neurons[int(i)] = dual

    src, dst, port = [], [], []

    def connect(a_ids, b_ids, branch, mixed=False):
        branch = min(branch, len(b_ids))
        for a in a_ids:
            targets = rng.choice(b_ids, size=branch, replace=False)
            for b in targets:
                if b == a:
                    continue
                src.append(int(a))
                dst.append(int(b))
                is_inhibit = mixed and rng.random() < inhibit_fraction
                port.append(1 if is_inhibit else 0)

    connect(blocks["retina"], blocks["thalamus"], pixel_branch, mixed=True)
    connect(blocks["thalamus"], blocks["granular"], thalamus_branch, mixed=True)
    connect(blocks["granular"], blocks["thalamus"], feedback_branch)
    connect(blocks["granular"], blocks["supragranular"], granular_branch)
    connect(blocks["supragranular"], blocks["granular"], feedback_branch)
    connect(blocks["supragranular"], blocks["supragranular"], recurrent_branch)

    table = SynapseTable(src, dst, port, coupling=coupling, c_min=c_min)
    net = Network(neurons=neurons, synapses=table)
    net.validate()
    return net


# -- trace export ----------------------------------------------------------


def trace_to_csv_rows(trace) -> list[tuple]:
    """Rows (t_ns, neuron_id, photons_out) in firing order."""
    return [(r.t, r.neuron, r.photons_out) for r in trace]


def write_trace_binary(trace, path) -> None:
    """Binary trace framing: per record little-endian u64 time in
    femtoseconds (1e-6 ns, rounded), u32 neuron id, u32 photon count."""
    with open(path, "wb") as fh:
        for r in trace:
            fh.write(_TRACE_RECORD.pack(int(round(r.t * 1e6)), r.neuron,
                                        r.photons_out))


def read_trace_binary(path) -> list[TraceRecord]:
    out = []
    with open(path, "rb") as fh:
        while True:
            chunk = fh.read(_TRACE_RECORD.size)
            if not chunk:
                break
            t_fs, nid, count = _TRACE_RECORD.unpack(chunk)
            out.append(TraceRecord(t_fs / 1e6, nid, count))
    return out
