"""Command-line driver and experiment configuration schema.

Every subcommand resolves its parameters (flags over config file over
defaults), validates them against an explicit schema that rejects unknown
keys, runs the mapped operation, and writes the requested table plus a run
record. The run record embeds the fully resolved configuration and seed and
is itself a valid --config document, so rerunning it reproduces the output
byte for byte.

Exit codes: 0 success, 2 configuration error, 3 numeric domain error,
4 I/O error. Failures print a machine-readable error record to stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import asdict

import numpy as np

from . import __version__
from .detector import (
    AlwaysFiresError,
    BiasPoint,
    PhotonCapExceededError,
    PndArray,
    SndWire,
    absorption_statistics,
    spike_probability_surface,
    threshold_staircase,
)
from .emitter import (
    LedJunction,
    OperatingPointError,
    VoltageClampError,
    snd_transfer_curve,
)
from .energy import EnergyModel, energy_per_event, wall_energy
from .floorplan import (
    FloorplanParams,
    PowerParams,
    PRESETS,
    density_scan,
    system_power,
)
from .metrics import EmptyHistogramError, FlatCurveError
from .network import (
    Network,
    Port,
    Stimulus,
    Synapse,
    SynapseTable,
    build_mlp,
    build_visual_cortex,
    simulate,
    write_trace_binary,
)
from .neuron import NeuronSpec, NtronSwitch, Variant

OUTDIR_ENV = "OPTOSPIKE_OUTDIR"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_IO = 4

_DOMAIN_ERRORS = (AlwaysFiresError, PhotonCapExceededError,
                  VoltageClampError, OperatingPointError, FlatCurveError,
                  EmptyHistogramError, ValueError, ZeroDivisionError,
                  OverflowError)


class ConfigError(Exception):
    """Configuration document or flag set failed validation."""


def _fmt(value) -> str:
    """Numbers rendered with 9 significant digits for stable diffs."""
    if isinstance(value, float):
        return f"{value:.9g}"
    return str(value)


def _outdir() -> str:
    return os.environ.get(OUTDIR_ENV, ".")


def _resolve_out(config: dict, default_name: str) -> str:
    out = config.get("out")
    if out is None:
        out = os.path.join(_outdir(), default_name)
    return out


def _write_table(path: str, fmt: str, header: list[str], rows) -> None:
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt(v) for v in row])
    elif fmt == "json":
        payload = [dict(zip(header, row)) for row in rows]
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        raise ConfigError(f"unknown output format {fmt!r}")


def _write_run_record(command: str, config: dict, outputs: list[str]) -> str:
    record = {"command": command, "config": config, "outputs": outputs,
              "version": __version__}
    path = config.get("run_record")
    if path is None:
        base = outputs[0] if outputs else os.path.join(_outdir(), command)
        path = base + ".run.json"
    with open(path, "w") as fh:
        json.dump(record, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


# -- configuration resolution ------------------------------------------------


def _load_config_file(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed JSON in {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a JSON object")
    # a run record is itself a valid config for the same command
    if "config" in doc and "command" in doc:
        doc = doc["config"]
    return doc


def _resolve(schema: dict, cli_values: dict, file_values: dict) -> dict:
    """Merge defaults < config file < explicit flags; reject unknown keys."""
    unknown = set(file_values) - set(schema)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    out = {}
    for key, default in schema.items():
        if cli_values.get(key) is not None:
            out[key] = cli_values[key]
        elif key in file_values:
            out[key] = file_values[key]
        else:
            out[key] = default
    return out


def _int_list(text) -> list[int]:
    if isinstance(text, list):
        return [int(v) for v in text]
    return [int(tok) for tok in str(text).split(",") if tok.strip()]


def _float_list(text) -> list[float]:
    if isinstance(text, list):
        return [float(v) for v in text]
    return [float(tok) for tok in str(text).split(",") if tok.strip()]


def _bias_grid(spec) -> list[float]:
    if isinstance(spec, str) and ":" in spec:
        start, stop, step = (float(tok) for tok in spec.split(":"))
        n = int(round((stop - start) / step)) + 1
        return [start + i * step for i in range(n)]
    return _float_list(spec)


# -- subcommand implementations ----------------------------------------------


def _array_from(config: dict) -> PndArray:
    return PndArray(n_wires=int(config["n_wires"]),
                    i_c_wire=float(config["i_c_wire"]),
                    alpha=float(config["alpha"]),
                    n_passes=int(config["passes"]))


def _cmd_spike_prob(config: dict) -> list[str]:
    array = _array_from(config)
    biases = _bias_grid(config["bias"])
    if config["photons"] == "auto":
        rate = max(array.alpha * array.n_passes, 1e-9)
        top = max(2, math.ceil(4.0 * array.n_wires / rate))
        photons = sorted(set(np.geomspace(1, top, 40).astype(int).tolist()))
    else:
        photons = _int_list(config["photons"])
    rows = spike_probability_surface(array, photons, biases,
                                     n_trials=int(config["trials"]),
                                     seed=int(config["seed"]))
    out = _resolve_out(config, "spike_prob." + config["format"])
    _write_table(out, config["format"],
                 ["bias_fraction", "n_photons", "probability"], rows)
    return [out]


def _cmd_threshold_scan(config: dict) -> list[str]:
    array = _array_from(config)
    biases = _bias_grid(config["bias"])
    cap = config["photon_cap"]
    thresholds = threshold_staircase(
        array, biases, n_trials=int(config["trials"]),
        seed=int(config["seed"]), counting=config["counting"],
        photon_cap=None if cap is None else int(cap))
    rows = list(zip(biases, thresholds))
    out = _resolve_out(config, "threshold_scan." + config["format"])
    _write_table(out, config["format"],
                 ["bias_fraction", "threshold_photons"], rows)
    return [out]


def _cmd_snd_transfer(config: dict) -> list[str]:
    wire = SndWire(wire_length=float(config["wire_length"]),
                   hotspot_length=float(config["hotspot_length"]),
                   hotspot_resistance=float(config["hotspot_resistance"]),
                   attenuation_length=float(config["attenuation_length"]),
                   i_c=float(config["i_c"]))
    junction = LedJunction(efficiency=float(config["efficiency"]))
    bias = BiasPoint.from_fraction(float(config["bias_fraction"]), wire.i_c)
    if config["photons"] == "auto":
        photons = sorted(set(np.geomspace(1, 8000, 60).astype(int).tolist()))
    else:
        photons = _int_list(config["photons"])
    rows = snd_transfer_curve(wire, junction, bias, photons,
                              pulse_duration=float(config["window"]),
                              seed=int(config["seed"]),
                              cumulative=bool(config["cumulative"]))
    out = _resolve_out(config, "snd_transfer." + config["format"])
    _write_table(out, config["format"],
                 ["photons_in", "occupied_slots", "resistance_kohm", "v_led",
                  "photons_out"], rows)
    return [out]


def _cmd_energy(config: dict) -> list[str]:
    etas = _float_list(config["eta"])
    photons = _int_list(config["photons"]) if config["photons"] != "auto" \
        else sorted(set(np.geomspace(1, 10000, 50).astype(int).tolist()))
    rows = []
    for eta in etas:
        model = EnergyModel(efficiency=eta, i_wire=float(config["i_wire"]),
                            junction=LedJunction(efficiency=eta))
        for n in photons:
            b = energy_per_event(model, n)
            rows.append((n, eta, b.total, b.inductive, b.capacitive,
                         b.photonic))
    out = _resolve_out(config, "energy." + config["format"])
    _write_table(out, config["format"],
                 ["n_photons", "eta", "e_total", "e_inductive",
                  "e_capacitive", "e_photonic"], rows)
    return [out]


def _cmd_absorb_stats(config: dict) -> list[str]:
    array = _array_from(config)
    incident = _int_list(config["incident"])
    rows = []
    for n in incident:
        stats = absorption_statistics(array, n, n_trials=int(config["trials"]),
                                      seed=int(config["seed"]))
        rows.append((n, stats.mean_of_means, stats.mean_of_stds,
                     stats.std_of_stds))
    out = _resolve_out(config, "absorb_stats." + config["format"])
    _write_table(out, config["format"],
                 ["n_incident", "mean_of_means", "mean_of_stds",
                  "std_of_stds"], rows)
    return [out]


def _cmd_floorplan(config: dict) -> list[str]:
    overrides = {k: float(config[k]) for k in
                 ("l_tap", "l_gap", "l_cross", "l_interlayer", "wg_pitch")}
    rows = [(r["n_conn"], r["n_wg"], r["l_l_um"], r["w_l_um"],
             r["density_per_cm2"])
            for r in density_scan(_int_list(config["n_conn"]),
                                  _int_list(config["n_wg"]), **overrides)]
    out = _resolve_out(config, "floorplan." + config["format"])
    _write_table(out, config["format"],
                 ["n_conn", "n_wg", "L_l_um", "W_l_um", "density_per_cm2"],
                 rows)
    return [out]


def _cmd_power(config: dict) -> list[str]:
    if config["preset"] is not None:
        name = config["preset"]
        if name not in PRESETS:
            raise ConfigError(f"unknown preset {name!r}; "
                              f"have {sorted(PRESETS)}")
        params = PRESETS[name]
    else:
        params = PowerParams(
            n_units=float(config["n_units"]),
            e_synapse=float(config["e_synapse"]),
            n_conn=int(config["n_conn"]),
            rate=float(config["rate"]),
            cooling=float(config["cooling"]))
    result = system_power(params)
    report = {
        "inputs": asdict(params),
        "device_w": result.device_w,
        "wall_w": result.wall_w,
        "events_per_s": result.events_per_s,
        "events_per_s_per_w_device": result.events_per_s_per_w_device,
        "events_per_s_per_w_wall": result.events_per_s_per_w_wall,
    }
    out = _resolve_out(config, "power.json")
    with open(out, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"device power: {_fmt(result.device_w)} W")
    print(f"wall power: {_fmt(result.wall_w)} W")
    print(f"synapse events/s/W (device): "
          f"{_fmt(result.events_per_s_per_w_device)}")
    print(f"synapse events/s/W (wall): "
          f"{_fmt(result.events_per_s_per_w_wall)}")
    return [out]


# -- network config schema ---------------------------------------------------

_NEURON_KEYS = {"id", "variant", "receiver", "bias_fraction", "emitter",
                "ntron", "inhibitory_receiver", "feedback_tap_fraction",
                "upstream_tap_fraction", "integration_time",
                "refractory_period", "stochastic_emission",
                "feedback_quench_photons"}
_RECEIVER_PND_KEYS = {"kind", "n_wires", "i_c_wire", "alpha", "n_passes"}
_RECEIVER_SND_KEYS = {"kind", "wire_length", "hotspot_length",
                      "hotspot_resistance", "attenuation_length", "i_c"}
_SYNAPSE_KEYS = {"src", "dst", "port", "coupling", "c_min", "q_scale",
                 "stdp_window", "delta_q_pot", "update_interval_min",
                 "delay", "share"}
_STIMULUS_KEYS = {"t", "neuron", "port", "photons"}


def _check_keys(doc: dict, allowed: set, what: str) -> None:
    unknown = set(doc) - allowed
    if unknown:
        raise ConfigError(f"unknown keys in {what}: {sorted(unknown)}")


def _parse_receiver(doc: dict):
    kind = doc.get("kind", "pnd")
    if kind == "pnd":
        _check_keys(doc, _RECEIVER_PND_KEYS, "pnd receiver")
        return PndArray(n_wires=int(doc.get("n_wires", 5)),
                        i_c_wire=float(doc.get("i_c_wire", 4.0)),
                        alpha=float(doc.get("alpha", 0.05)),
                        n_passes=int(doc.get("n_passes", 100)))
    if kind == "snd":
        _check_keys(doc, _RECEIVER_SND_KEYS, "snd receiver")
        return SndWire(wire_length=float(doc.get("wire_length", 100.0)),
                       hotspot_length=float(doc.get("hotspot_length", 100.0)),
                       hotspot_resistance=float(
                           doc.get("hotspot_resistance", 1.0)),
                       attenuation_length=float(
                           doc.get("attenuation_length", 100.0)),
                       i_c=float(doc.get("i_c", 4.0)))
    raise ConfigError(f"unknown receiver kind {kind!r}")


def parse_neuron(doc: dict) -> tuple[int, NeuronSpec]:
    """Neuron config block -> (id, NeuronSpec)."""
    _check_keys(doc, _NEURON_KEYS, "neuron")
    if "id" not in doc:
        raise ConfigError("neuron block needs an id")
    receiver = _parse_receiver(doc.get("receiver", {"kind": "pnd"}))
    bias = BiasPoint.from_fraction(float(doc.get("bias_fraction", 0.7)),
                                   receiver.i_c)
    emitter_doc = dict(doc.get("emitter", {}))
    junction = LedJunction(**emitter_doc)
    ntron = None
    if doc.get("ntron") is not None:
        nd = doc["ntron"]
        _check_keys(nd, {"gate_threshold", "drive_current"}, "ntron")
        drive = float(nd.get("drive_current", bias.i_bias))
        ntron = NtronSwitch(gate_threshold=float(nd.get("gate_threshold", 1.0)),
                            drive=BiasPoint.from_current(drive, receiver.i_c))
    inhibitory = None
    if doc.get("inhibitory_receiver") is not None:
        inhibitory = _parse_receiver(doc["inhibitory_receiver"])
    try:
        variant = Variant(doc.get("variant", "pnd_step"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    spec = NeuronSpec(
        receiver=receiver, bias_receiver=bias, emitter=junction,
        variant=variant, ntron=ntron, inhibitory_receiver=inhibitory,
        feedback_tap_fraction=float(doc.get("feedback_tap_fraction", 0.0)),
        upstream_tap_fraction=float(doc.get("upstream_tap_fraction", 0.0)),
        integration_time=float(doc.get("integration_time", 1.0)),
        refractory_period=float(doc.get("refractory_period", 50.0)),
        stochastic_emission=bool(doc.get("stochastic_emission", False)),
        feedback_quench_photons=float(doc.get("feedback_quench_photons", 1e4)),
    )
    return int(doc["id"]), spec


def serialize_neuron(nid: int, spec: NeuronSpec) -> dict:
    receiver: dict
    if isinstance(spec.receiver, PndArray):
        receiver = {"kind": "pnd", "n_wires": spec.receiver.n_wires,
                    "i_c_wire": spec.receiver.i_c_wire,
                    "alpha": spec.receiver.alpha,
                    "n_passes": spec.receiver.n_passes}
    else:
        receiver = {"kind": "snd", "wire_length": spec.receiver.wire_length,
                    "hotspot_length": spec.receiver.hotspot_length,
                    "hotspot_resistance": spec.receiver.hotspot_resistance,
                    "attenuation_length": spec.receiver.attenuation_length,
                    "i_c": spec.receiver.i_c}
    doc = {"id": nid, "variant": spec.variant.value, "receiver": receiver,
           "bias_fraction": spec.bias_receiver.fraction_of_ic,
           "emitter": {"efficiency": spec.emitter.efficiency},
           "feedback_tap_fraction": spec.feedback_tap_fraction,
           "upstream_tap_fraction": spec.upstream_tap_fraction,
           "integration_time": spec.integration_time,
           "refractory_period": spec.refractory_period,
           "stochastic_emission": spec.stochastic_emission,
           "feedback_quench_photons": spec.feedback_quench_photons}
    if spec.ntron is not None:
        doc["ntron"] = {"gate_threshold": spec.ntron.gate_threshold,
                        "drive_current": spec.ntron.drive.i_bias}
    if spec.inhibitory_receiver is not None:
        doc["inhibitory_receiver"] = {
            "kind": "pnd", "n_wires": spec.inhibitory_receiver.n_wires,
            "i_c_wire": spec.inhibitory_receiver.i_c_wire,
            "alpha": spec.inhibitory_receiver.alpha,
            "n_passes": spec.inhibitory_receiver.n_passes}
    return doc


def parse_network(doc: dict) -> Network:
    """Network config block -> Network."""
    _check_keys(doc, {"neurons", "synapses", "stimuli", "builder"}, "network")
    if "builder" in doc:
        b = dict(doc["builder"])
        kind = b.pop("kind", None)
        if kind == "mlp":
            net = build_mlp(**b)
        elif kind == "visual_cortex":
            net = build_visual_cortex(**b)
        else:
            raise ConfigError(f"unknown builder kind {kind!r}")
    else:
        neurons = dict(parse_neuron(nd) for nd in doc.get("neurons", []))
        records = []
        for sd in doc.get("synapses", []):
            _check_keys(sd, _SYNAPSE_KEYS, "synapse")
            kwargs = {k: float(v) for k, v in sd.items()
                      if k not in ("src", "dst", "port", "share")}
            share = sd.get("share")
            records.append(Synapse(
                src=int(sd["src"]), dst=int(sd["dst"]),
                dst_port=Port(sd.get("port", "excite")),
                share=math.nan if share is None else float(share),
                **kwargs))
        table = SynapseTable.from_records(records) if records else \
            SynapseTable([], [], [])
        net = Network(neurons=neurons, synapses=table)
    for sd in doc.get("stimuli", []):
        _check_keys(sd, _STIMULUS_KEYS, "stimulus")
        net.stimuli.append(Stimulus(t=float(sd.get("t", 0.0)),
                                    neuron=int(sd["neuron"]),
                                    port=Port(sd.get("port", "excite")),
                                    photons=int(sd.get("photons", 1))))
    net.validate()
    return net


def serialize_network(net: Network) -> dict:
    return {
        "neurons": [serialize_neuron(nid, spec)
                    for nid, spec in sorted(net.neurons.items())],
        "synapses": [
            {"src": s.src, "dst": s.dst, "port": s.dst_port.value,
             "coupling": s.coupling, "c_min": s.c_min, "q_scale": s.q_scale,
             "stdp_window": s.stdp_window, "delta_q_pot": s.delta_q_pot,
             "update_interval_min": s.update_interval_min, "delay": s.delay,
             "share": s.share}
            for s in net.synapses],
        "stimuli": [
            {"t": s.t, "neuron": s.neuron, "port": s.port.value,
             "photons": s.photons}
            for s in net.stimuli],
    }


def set_weights(net_config: dict, weight_table, bit_depth: int | None = None
                ) -> dict:
    """Overwrite synapse couplings in a network config document.

    weight_table is a flat list of couplings in synapse order; its length
    must match the topology. Values are clamped to [c_min, 1] and, when
    bit_depth is given, quantized to 2^bit_depth levels spanning that range.
    Returns a new document.
    """
    synapses = net_config.get("synapses")
    if synapses is None:
        raise ConfigError("network config has no explicit synapse list")
    weights = [float(w) for w in weight_table]
    if len(weights) != len(synapses):
        raise ConfigError(
            f"weight table has {len(weights)} entries for "
            f"{len(synapses)} synapses")
    out = json.loads(json.dumps(net_config))  # deep copy
    for sd, w in zip(out["synapses"], weights):
        c_min = float(sd.get("c_min", 0.05))
        value = min(max(w, c_min), 1.0)
        if bit_depth is not None:
            levels = 2 ** int(bit_depth)
            if levels < 2:
                raise ConfigError("bit_depth must be >= 1")
            step = (1.0 - c_min) / (levels - 1)
            value = c_min + round((value - c_min) / step) * step
        sd["coupling"] = value
    return out


def _cmd_simulate(config: dict) -> list[str]:
    doc = config["network"]
    if doc is None:
        raise ConfigError("simulate needs a network block in the config")
    net = parse_network(doc)
    trace = simulate(net, until=float(config["until"]),
                     seed=int(config["seed"]))
    out = _resolve_out(config, "trace." + config["format"])
    rows = [(r.t, r.neuron, r.photons_out) for r in trace]
    _write_table(out, config["format"], ["t_ns", "neuron_id", "photons_out"],
                 rows)
    outputs = [out]
    if config["binary_trace"]:
        bin_path = os.path.splitext(out)[0] + ".trace"
        write_trace_binary(trace, bin_path)
        outputs.append(bin_path)
    return outputs


def _cmd_info(config: dict) -> list[str]:
    from . import constants

    info = {
        "version": __version__,
        "power_presets": {name: asdict(p) for name, p in PRESETS.items()},
        "constants": {
            name: getattr(constants, name) for name in dir(constants)
            if name.isupper()},
        "commands": sorted(_COMMANDS),
        "wall_energy_20aJ_1000x_fJ": wall_energy(20.0, 1000.0) / 1000.0,
    }
    print(json.dumps(info, indent=2, sort_keys=True))
    return []


# -- argument parsing --------------------------------------------------------

_DETECTOR_SCHEMA = {"n_wires": 10, "i_c_wire": 4.0, "alpha": 0.01,
                    "passes": 100, "trials": 1000, "seed": 0,
                    "format": "csv", "out": None, "run_record": None}

_SCHEMAS: dict[str, dict] = {
    "spike-prob": {**_DETECTOR_SCHEMA, "bias": "0.01:0.99:0.01",
                   "photons": "auto"},
    "threshold-scan": {**_DETECTOR_SCHEMA, "bias": "0.01:0.99:0.01",
                       "counting": "incident", "photon_cap": None},
    "snd-transfer": {"wire_length": 100.0, "hotspot_length": 100.0,
                     "hotspot_resistance": 1.0, "attenuation_length": 100.0,
                     "i_c": 4.0, "efficiency": 0.01, "bias_fraction": 0.7,
                     "window": 50.0, "photons": "auto", "cumulative": True,
                     "seed": 0, "format": "csv", "out": None,
                     "run_record": None},
    "energy": {"eta": "1.0,0.1,0.01,0.001", "photons": "auto", "i_wire": 4.0,
               "format": "csv", "out": None, "run_record": None, "seed": 0},
    "absorb-stats": {"n_wires": 40, "i_c_wire": 4.0, "alpha": 0.01,
                     "passes": 1, "trials": 1000, "seed": 0,
                     "incident": "1,2,5,10,20,40,80", "format": "csv",
                     "out": None, "run_record": None},
    "floorplan": {"n_conn": "10,100,1000", "n_wg": "1,10,100",
                  "l_tap": 10.0, "l_gap": 5.0, "l_cross": 3.0,
                  "l_interlayer": 10.0, "wg_pitch": 600.0, "format": "csv",
                  "out": None, "run_record": None, "seed": 0},
    "power": {"preset": None, "n_units": 7e9, "e_synapse": 20.0,
              "n_conn": 700, "rate": 2e4, "cooling": 1000.0, "out": None,
              "run_record": None, "seed": 0},
    "simulate": {"network": None, "until": 1000.0, "seed": 0,
                 "format": "csv", "binary_trace": False, "out": None,
                 "run_record": None},
    "info": {"seed": 0},
}

_COMMANDS = {
    "spike-prob": _cmd_spike_prob,
    "threshold-scan": _cmd_threshold_scan,
    "snd-transfer": _cmd_snd_transfer,
    "energy": _cmd_energy,
    "absorb-stats": _cmd_absorb_stats,
    "floorplan": _cmd_floorplan,
    "power": _cmd_power,
    "simulate": _cmd_simulate,
    "info": _cmd_info,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="optospike",
        description="Superconducting optoelectronic network simulator")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, schema in _SCHEMAS.items():
        p = sub.add_parser(name)
        p.add_argument("--config", default=None,
                       help="JSON config document (run records accepted)")
        for key, default in schema.items():
            flag = "--" + key.replace("_", "-")
            if isinstance(default, bool):
                p.add_argument(flag, default=None,
                               type=lambda s: s.lower() in ("1", "true", "yes"))
            elif isinstance(default, int) and not isinstance(default, bool):
                p.add_argument(flag, default=None, type=int)
            elif isinstance(default, float):
                p.add_argument(flag, default=None, type=float)
            else:
                p.add_argument(flag, default=None)
    return parser


def run(argv) -> int:
    """Execute a subcommand; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    command = args.command
    schema = _SCHEMAS[command]
    cli_values = {k: getattr(args, k) for k in schema}
    try:
        file_values = _load_config_file(args.config)
        config = _resolve(schema, cli_values, file_values)
        outputs = _COMMANDS[command](config)
        if command != "info":
            record = _write_run_record(command, config, outputs)
            for path in outputs + [record]:
                print(f"wrote {path}")
        return EXIT_OK
    except ConfigError as exc:
        _emit_error("config", exc)
        return EXIT_CONFIG
    except _DOMAIN_ERRORS as exc:
        _emit_error("domain", exc)
        return EXIT_DOMAIN
    except OSError as exc:
        _emit_error("io", exc)
        return EXIT_IO


def _emit_error(kind: str, exc: Exception) -> None:
    record = {"error": kind, "type": type(exc).__name__, "message": str(exc)}
    print(json.dumps(record, sort_keys=True), file=sys.stderr)


def main() -> None:
    sys.exit(run(sys.argv[1:]))
