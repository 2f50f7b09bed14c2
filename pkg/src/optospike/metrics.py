"""Information metrics over stimulus/response ensembles.

The mutual-information estimator is the discrete plug-in form of

    I = sum_s sum_r P[s] P[r|s] log2( P[r|s] / P[r] )

over a joint stimulus/response histogram, with 0 log 0 terms defined as 0.
No bias correction is applied; the estimator equals the analytic value
exactly on rational-probability tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class EmptyHistogramError(ValueError):
    """Mutual information of an empty histogram is undefined."""


class FlatCurveError(ValueError):
    """Dynamic range of a flat transfer curve is undefined."""


@dataclass(frozen=True)
class JointHistogram:
    """Joint stimulus/response counts.

    stimulus_bins and response_bins are bin edges (length = counts.shape + 1)
    or None for categorical axes. Probabilities are always derived from the
    counts, never stored.
    """

    counts: np.ndarray
    stimulus_bins: np.ndarray | None = None
    response_bins: np.ndarray | None = None

    def __post_init__(self):
        counts = np.asarray(self.counts)
        if counts.ndim != 2:
            raise ValueError("counts must be 2-D (stimulus x response)")
        if (counts < 0).any():
            raise ValueError("counts must be nonnegative")
        object.__setattr__(self, "counts", counts)
        for name, edges in (("stimulus_bins", self.stimulus_bins),
                            ("response_bins", self.response_bins)):
            if edges is not None:
                edges = np.asarray(edges, dtype=float)
                axis = 0 if name == "stimulus_bins" else 1
                if len(edges) != counts.shape[axis] + 1:
                    raise ValueError(f"{name} length must be bins + 1")
                object.__setattr__(self, name, edges)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @classmethod
    def from_samples(cls, stimulus, response, stimulus_bins=16,
                     response_bins=16) -> "JointHistogram":
        counts, s_edges, r_edges = np.histogram2d(
            np.asarray(stimulus, dtype=float),
            np.asarray(response, dtype=float),
            bins=[stimulus_bins, response_bins])
        return cls(counts=counts.astype(np.int64), stimulus_bins=s_edges,
                   response_bins=r_edges)


def mutual_information(hist: JointHistogram) -> float:
    """Plug-in mutual information of the joint histogram, bits."""
    counts = hist.counts.astype(float)
    total = counts.sum()
    if total < 1:
        raise EmptyHistogramError("histogram holds no samples")
    joint = counts / total
    p_s = joint.sum(axis=1, keepdims=True)
    p_r = joint.sum(axis=0, keepdims=True)
    mask = joint > 0
    ratio = joint[mask] / (p_s * p_r + 0.0)[mask]
    return float(np.sum(joint[mask] * np.log2(ratio)))


def entropy(probabilities: np.ndarray) -> float:
    """Shannon entropy in bits, 0 log 0 = 0."""
    p = np.asarray(probabilities, dtype=float)
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def marginal_entropies(hist: JointHistogram) -> tuple[float, float]:
    """(H(stimulus), H(response)) of the histogram marginals, bits."""
    counts = hist.counts.astype(float)
    total = counts.sum()
    if total < 1:
        raise EmptyHistogramError("histogram holds no samples")
    return (entropy(counts.sum(axis=1) / total),
            entropy(counts.sum(axis=0) / total))


def dynamic_range(inputs, outputs, low: float = 0.05,
                  high: float = 0.95) -> float:
    """Usable input span of a monotone transfer curve, bits.

    Turn-on is the first input where the output reaches `low` of the output
    span above its minimum; saturation the first input reaching `high`.
    Returns log2(saturation_input - turn_on_input), or 0.0 when the two
    coincide (a step response has no usable span).
    """
    x = np.asarray(inputs, dtype=float)
    y = np.asarray(outputs, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or len(x) < 2:
        raise ValueError("inputs and outputs must be matching 1-D arrays")
    span = y.max() - y.min()
    if span <= 0:
        raise FlatCurveError("flat transfer curve has no dynamic range")
    turn_on = x[np.argmax(y >= y.min() + low * span)]
    saturation = x[np.argmax(y >= y.min() + high * span)]
    width = saturation - turn_on
    if width <= 1.0:
        return 0.0
    return float(math.log2(width))
