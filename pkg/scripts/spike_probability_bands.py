#!/usr/bin/env python3
"""Spike-probability banding scan for the parallel nanowire receiver.

Sweeps bias current over (0, Ic) and photon number for a 10-wire array at
1% per-pass absorption and 100 passes, then locates the 50% thresholds for
10-, 20-, and 40-wire arrays. Writes CSVs into --outdir; pass --plot for a
quick look (requires matplotlib).
"""

import argparse
import csv
import os

import numpy as np

from optospike.detector import PndArray, spike_probability_surface, threshold_staircase


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="results")
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--plot", action="store_true")
    args = ap.parse_args()
    os.makedirs(args.outdir, exist_ok=True)

    array = PndArray(n_wires=10, i_c_wire=1.0, alpha=0.01, n_passes=100)
    biases = [0.01 * k for k in range(1, 100)]
    photons = sorted(set(np.geomspace(1, 60, 40).astype(int).tolist()))
    rows = spike_probability_surface(array, photons, biases,
                                     n_trials=args.trials, seed=args.seed)
    surface_path = os.path.join(args.outdir, "spike_probability_10wire.csv")
    with open(surface_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["bias_fraction", "n_photons", "probability"])
        w.writerows(rows)
    print(f"wrote {surface_path} ({len(rows)} rows)")

    stair_path = os.path.join(args.outdir, "threshold_staircases.csv")
    with open(stair_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n_wires", "bias_fraction", "threshold_photons"])
        for n_wires in (10, 20, 40):
            arr = PndArray(n_wires=n_wires, i_c_wire=1.0, alpha=0.01,
                           n_passes=100)
            stair = threshold_staircase(arr, biases, n_trials=args.trials,
                                        seed=args.seed)
            w.writerows((n_wires, f, t) for f, t in zip(biases, stair))
            print(f"{n_wires} wires: {len(set(stair))} bands")
    print(f"wrote {stair_path}")

    if args.plot:
        import matplotlib.pyplot as plt

        data = np.array(rows)
        fig, ax = plt.subplots(figsize=(6, 4))
        for f in sorted(set(data[:, 0])):
            sel = data[data[:, 0] == f]
            ax.plot(sel[:, 1], sel[:, 2], color="C0", alpha=0.25)
        ax.set_xlabel("photons incident")
        ax.set_ylabel("spike probability")
        fig.savefig(os.path.join(args.outdir, "spike_probability_bands.png"),
                    dpi=150, bbox_inches="tight")
        print("wrote spike_probability_bands.png")


if __name__ == "__main__":
    main()
