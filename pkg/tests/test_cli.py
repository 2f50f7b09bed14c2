"""Command-line driver tests: schemas, outputs, exit codes, replay."""

import csv
import json
import os

import pytest

from optospike.cli import (
    EXIT_CONFIG,
    EXIT_DOMAIN,
    EXIT_IO,
    EXIT_OK,
    parse_network,
    serialize_network,
    set_weights,
    run,
)


@pytest.fixture(autouse=True)
def outdir(tmp_path, monkeypatch):
    monkeypatch.setenv("OPTOSPIKE_OUTDIR", str(tmp_path))
    return tmp_path


def read_csv(path):
    with open(path) as fh:
        return list(csv.reader(fh))


NETWORK_DOC = {
    "neurons": [
        {"id": 0, "variant": "pnd_step",
         "receiver": {"kind": "pnd", "n_wires": 1, "i_c_wire": 4.0,
                      "alpha": 0.5, "n_passes": 100},
         "bias_fraction": 0.5},
        {"id": 1, "variant": "pnd_step",
         "receiver": {"kind": "pnd", "n_wires": 2, "i_c_wire": 4.0,
                      "alpha": 0.5, "n_passes": 100},
         "bias_fraction": 0.7},
    ],
    "synapses": [{"src": 0, "dst": 1, "coupling": 1.0, "c_min": 0.05}],
    "stimuli": [{"t": 0.0, "neuron": 0, "photons": 1}],
}


class TestSpikeProb:
    def test_emits_surface_csv(self, outdir):
        code = run(["spike-prob", "--n-wires", "4", "--alpha", "0.05",
                    "--passes", "50", "--trials", "200",
                    "--bias", "0.25,0.75", "--photons", "1,2,4,8"])
        assert code == EXIT_OK
        rows = read_csv(outdir / "spike_prob.csv")
        assert rows[0] == ["bias_fraction", "n_photons", "probability"]
        assert len(rows) == 1 + 2 * 4
        probs = [float(r[2]) for r in rows[1:]]
        assert all(0.0 <= p <= 1.0 for p in probs)

    def test_replay_reproduces_bytes(self, outdir):
        args = ["spike-prob", "--n-wires", "3", "--alpha", "0.05",
                "--passes", "30", "--trials", "100", "--bias", "0.5",
                "--photons", "1,3,9", "--seed", "21"]
        assert run(args) == EXIT_OK
        first = (outdir / "spike_prob.csv").read_bytes()
        record = outdir / "spike_prob.csv.run.json"
        assert record.exists()
        assert run(["spike-prob", "--config", str(record)]) == EXIT_OK
        assert (outdir / "spike_prob.csv").read_bytes() == first

    def test_always_fires_bias_is_domain_error(self):
        assert run(["spike-prob", "--bias", "1.0", "--photons", "1",
                    "--trials", "10"]) == EXIT_DOMAIN


class TestThresholdScan:
    def test_staircase_csv(self, outdir):
        code = run(["threshold-scan", "--n-wires", "4", "--alpha", "0.1",
                    "--passes", "50", "--trials", "200",
                    "--bias", "0.125:0.875:0.25"])
        assert code == EXIT_OK
        rows = read_csv(outdir / "threshold_scan.csv")
        assert rows[0] == ["bias_fraction", "threshold_photons"]
        thresholds = [int(r[1]) for r in rows[1:]]
        assert thresholds == sorted(thresholds, reverse=True)


class TestSndTransfer:
    def test_transfer_csv(self, outdir):
        code = run(["snd-transfer", "--photons", "100,1000,4000",
                    "--seed", "3"])
        assert code == EXIT_OK
        rows = read_csv(outdir / "snd_transfer.csv")
        assert rows[0][0] == "photons_in" and rows[0][-1] == "photons_out"
        outs = [float(r[-1]) for r in rows[1:]]
        assert outs == sorted(outs)


class TestEnergy:
    def test_breakdown_columns(self, outdir):
        code = run(["energy", "--eta", "0.01", "--photons", "1,100,10000"])
        assert code == EXIT_OK
        rows = read_csv(outdir / "energy.csv")
        assert rows[0] == ["n_photons", "eta", "e_total", "e_inductive",
                           "e_capacitive", "e_photonic"]
        for row in rows[1:]:
            total, parts = float(row[2]), sum(map(float, row[3:]))
            assert total == pytest.approx(parts, rel=1e-6)


class TestAbsorbStats:
    def test_stats_csv(self, outdir):
        code = run(["absorb-stats", "--incident", "0,10,40",
                    "--trials", "50"])
        assert code == EXIT_OK
        rows = read_csv(outdir / "absorb_stats.csv")
        assert rows[0] == ["n_incident", "mean_of_means", "mean_of_stds",
                           "std_of_stds"]
        assert float(rows[1][1]) == 0.0


class TestFloorplanAndPower:
    def test_floorplan_table(self, outdir):
        code = run(["floorplan", "--n-conn", "10,100", "--n-wg", "1,10"])
        assert code == EXIT_OK
        rows = read_csv(outdir / "floorplan.csv")
        assert rows[0] == ["n_conn", "n_wg", "L_l_um", "W_l_um",
                           "density_per_cm2"]
        assert len(rows) == 1 + 4

    def test_power_preset_report(self, outdir, capsys):
        code = run(["power", "--preset", "paper-1m3"])
        assert code == EXIT_OK
        printed = capsys.readouterr().out
        assert "1.96" in printed
        report = json.loads((outdir / "power.json").read_text())
        assert report["device_w"] == pytest.approx(1.96, rel=1e-12)
        assert report["events_per_s_per_w_device"] == pytest.approx(4.9e16,
                                                                    rel=1e-12)

    def test_unknown_preset_is_config_error(self):
        assert run(["power", "--preset", "nope"]) == EXIT_CONFIG


class TestSimulate:
    def test_runs_from_config(self, outdir):
        config = {"network": NETWORK_DOC, "until": 200.0, "seed": 3,
                  "binary_trace": True}
        path = outdir / "run.json"
        path.write_text(json.dumps(config))
        assert run(["simulate", "--config", str(path)]) == EXIT_OK
        rows = read_csv(outdir / "trace.csv")
        assert rows[0] == ["t_ns", "neuron_id", "photons_out"]
        assert len(rows) > 1
        assert (outdir / "trace.trace").exists()

    def test_missing_config_file_is_io_error(self, capsys):
        assert run(["simulate", "--config", "missing.json"]) == EXIT_IO
        err = json.loads(capsys.readouterr().err)
        assert err["error"] == "io"

    def test_unknown_keys_rejected(self, outdir):
        config = {"network": NETWORK_DOC, "until": 100.0, "typo": 1}
        path = outdir / "bad.json"
        path.write_text(json.dumps(config))
        assert run(["simulate", "--config", str(path)]) == EXIT_CONFIG

    def test_unknown_neuron_key_rejected(self, outdir):
        doc = json.loads(json.dumps(NETWORK_DOC))
        doc["neurons"][0]["mystery"] = 1
        path = outdir / "bad2.json"
        path.write_text(json.dumps({"network": doc, "until": 100.0}))
        assert run(["simulate", "--config", str(path)]) == EXIT_CONFIG

    def test_builder_network(self, outdir):
        config = {"network": {"builder": {"kind": "mlp", "n_inputs": 2,
                                          "n_per_layer": 2, "n_layers": 1},
                              "stimuli": [{"t": 0.0, "neuron": 0,
                                           "photons": 2},
                                          {"t": 0.0, "neuron": 1,
                                           "photons": 2}]},
                  "until": 100.0}
        path = outdir / "builder.json"
        path.write_text(json.dumps(config))
        assert run(["simulate", "--config", str(path)]) == EXIT_OK

    def test_replay_trace_bytes(self, outdir):
        config = {"network": NETWORK_DOC, "until": 150.0, "seed": 9}
        path = outdir / "run2.json"
        path.write_text(json.dumps(config))
        assert run(["simulate", "--config", str(path)]) == EXIT_OK
        first = (outdir / "trace.csv").read_bytes()
        record = outdir / "trace.csv.run.json"
        assert run(["simulate", "--config", str(record)]) == EXIT_OK
        assert (outdir / "trace.csv").read_bytes() == first


class TestNetworkSchema:
    def test_round_trip_idempotent_after_normalization(self):
        net = parse_network(NETWORK_DOC)
        doc1 = serialize_network(net)
        doc2 = serialize_network(parse_network(doc1))
        assert doc1 == doc2

    def test_set_weights_identity_is_noop(self):
        doc = serialize_network(parse_network(NETWORK_DOC))
        current = [s["coupling"] for s in doc["synapses"]]
        assert set_weights(doc, current) == doc

    def test_set_weights_zeros_clamp_to_floor(self):
        doc = serialize_network(parse_network(NETWORK_DOC))
        written = set_weights(doc, [0.0] * len(doc["synapses"]))
        assert all(s["coupling"] == s["c_min"]
                   for s in written["synapses"])

    def test_set_weights_dimension_mismatch(self):
        doc = serialize_network(parse_network(NETWORK_DOC))
        with pytest.raises(Exception):
            set_weights(doc, [0.5, 0.5, 0.5])

    def test_quantized_write_bit_depth(self):
        doc = json.loads(json.dumps(NETWORK_DOC))
        doc["synapses"] = [dict(src=0, dst=1, coupling=0.05 + 0.9 * k / 63,
                                c_min=0.05) for k in range(64)]
        # every synapse needs valid endpoints
        doc["synapses"] = [dict(s, dst=1, src=0) for s in doc["synapses"]]
        net_doc = serialize_network(parse_network(doc))
        weights = [s["coupling"] for s in net_doc["synapses"]]
        written = set_weights(net_doc, weights, bit_depth=3)
        distinct = {s["coupling"] for s in written["synapses"]}
        assert len(distinct) <= 2 ** 3


class TestInfo:
    def test_info_prints_json(self, capsys):
        assert run(["info"]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert "version" in payload
        assert "paper-1m3" in payload["power_presets"]
