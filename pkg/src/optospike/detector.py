"""Photon-counting receiver models.

Two receiver geometries are modeled:

* a parallel nanowire array (PND): N superconducting wires sharing a bias
  current. A wire driven normal by a photon redistributes its current onto
  the remaining wires; once enough wires are normal the per-wire current
  reaches the critical current and the whole array switches (a step-response
  firing event).

* a series nanowire (SND): one long wire in which each absorbed photon adds
  a fixed resistive hotspot, giving a continuous resistance-vs-photons
  response.

Two distinct absorption regimes are implemented on purpose. The spike
Monte Carlo (`spike_probability`) uses a one-hotspot-per-wire rule: a wire
that has been driven normal stops absorbing for the rest of the pulse.
`absorption_statistics` models the complementary regime in which a wire may
absorb any number of photons, which is the relevant question when choosing
the per-pass absorption probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .sampling import substream, trial_streams

# Relative tolerance used to treat a bias ratio that lands within float
# noise of an integer as exactly that integer. The boundary "per-wire
# current equals the critical current" counts as firing.
_RATIO_SNAP = 1e-9

# Uniforms are drawn per trial in fixed-size blocks.
_BLOCK = 256


class AlwaysFiresError(ValueError):
    """Bias at or above the array critical current: zero-photon firing."""


class PhotonCapExceededError(RuntimeError):
    """The 50% threshold search ran past its photon cap."""

    def __init__(self, cap: int):
        super().__init__(f"spike probability never reached 0.5 within {cap} photons")
        self.cap = cap


@dataclass(frozen=True)
class PndArray:
    """Parallel nanowire detector.

    n_wires      number of parallel wires
    i_c_wire     critical current of a single wire, uA
    alpha        absorption probability per wire per pass, in [0, 1]
    n_passes     number of times the photon pulse passes each wire
    wire_normal  per-wire hotspot state (empty tuple means all superconducting)
    """

    n_wires: int
    i_c_wire: float = 4.0
    alpha: float = 0.01
    n_passes: int = 100
    wire_normal: tuple = ()

    def __post_init__(self):
        if self.n_wires < 1:
            raise ValueError("n_wires must be >= 1")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must be in [0, 1]")
        if self.n_passes < 1:
            raise ValueError("n_passes must be >= 1")
        if self.i_c_wire <= 0.0:
            raise ValueError("i_c_wire must be positive")
        if not self.wire_normal:
            object.__setattr__(self, "wire_normal", (False,) * self.n_wires)
        elif len(self.wire_normal) != self.n_wires:
            raise ValueError("wire_normal length must equal n_wires")

    @property
    def i_c(self) -> float:
        """Critical current of the whole array, uA."""
        return self.n_wires * self.i_c_wire

    @property
    def n_normal(self) -> int:
        return sum(self.wire_normal)


@dataclass(frozen=True)
class SndWire:
    """Series nanowire detector.

    wire_length         physical wire length, um
    hotspot_length      length of one hotspot, nm
    hotspot_resistance  resistance of one hotspot, kOhm
    attenuation_length  1/e absorption length of the guided light, um
    i_c                 critical current, uA
    occupied_slots      indices of hotspot-length slots driven normal
    """

    wire_length: float = 100.0
    hotspot_length: float = 100.0
    hotspot_resistance: float = 1.0
    attenuation_length: float = 100.0
    i_c: float = 4.0
    occupied_slots: frozenset = frozenset()

    def __post_init__(self):
        if min(self.wire_length, self.hotspot_length, self.hotspot_resistance,
               self.attenuation_length, self.i_c) <= 0:
            raise ValueError("all SndWire parameters must be positive")
        if self.occupied_slots and not all(
                0 <= s < self.slot_count for s in self.occupied_slots):
            raise ValueError("occupied_slots outside [0, slot_count)")

    @property
    def slot_count(self) -> int:
        return int(self.wire_length / (self.hotspot_length * 1e-3))

    @property
    def max_resistance(self) -> float:
        """Saturation resistance with every slot occupied, kOhm."""
        return self.slot_count * self.hotspot_resistance


@dataclass(frozen=True)
class BiasPoint:
    """Operating bias of a receiver.

    i_bias          absolute bias current, uA
    fraction_of_ic  i_bias divided by the relevant critical current
    """

    i_bias: float
    fraction_of_ic: float

    @classmethod
    def from_fraction(cls, fraction: float, i_c_total: float) -> "BiasPoint":
        return cls(i_bias=fraction * i_c_total, fraction_of_ic=fraction)

    @classmethod
    def from_current(cls, i_bias: float, i_c_total: float) -> "BiasPoint":
        return cls(i_bias=i_bias, fraction_of_ic=i_bias / i_c_total)


def threshold_count(array: PndArray, bias: BiasPoint) -> int:
    """Critical number of photon-driven-normal wires for the array to switch.

    With n wires normal the remaining N - n wires carry i_bias / (N - n)
    each; the array switches once that reaches i_c_wire. The smallest such
    integer n is ceil(N - i_bias / i_c_wire), with an exact-integer bias
    ratio counting as firing (per-wire current equal to i_c switches).
    """
    if bias.i_bias <= 0.0:
        raise ValueError("bias current must be positive")
    ratio = bias.i_bias / array.i_c_wire
    nearest = round(ratio)
    if abs(ratio - nearest) <= _RATIO_SNAP * max(1.0, abs(nearest)):
        ratio = float(nearest)
    if ratio >= array.n_wires:
        raise AlwaysFiresError(
            f"bias {bias.i_bias} uA at or above array critical current "
            f"{array.i_c} uA")
    return array.n_wires - math.floor(ratio)


def pulse_absorption_trial(array: PndArray, n_photons: int,
                           rng: np.random.Generator,
                           initial_normal: int = 0) -> int:
    """One trial of the pulse-absorption process; returns final normal count.

    The pulse passes the wires in index order for n_passes rounds. At each
    pass of a still-superconducting wire, the wire is driven normal with
    probability 1 - (1 - alpha)^m where m is the photon pool (each pooled
    photon sees the wire independently); a conversion removes one photon
    from the pool. Normal wires absorb nothing for the rest of the trial.
    One uniform is consumed per wire pass, so the outcome is a pure function
    of (rng stream, inputs).

    This scalar routine is the reference definition of the process; the
    vectorized multi-trial kernel reproduces its outcome for every trial.
    """
    n = array.n_wires
    normal = [False] * n
    for w in range(min(initial_normal, n)):
        normal[w] = True
    n_normal = sum(normal)
    pool = int(n_photons)
    log_keep = math.log1p(-array.alpha) if array.alpha < 1.0 else -math.inf
    for s in range(n * array.n_passes):
        if pool <= 0 or n_normal == n:
            break
        u = rng.random()
        w = s % n
        if normal[w]:
            continue
        q = 1.0 if array.alpha >= 1.0 else -math.expm1(pool * log_keep)
        if u < q:
            normal[w] = True
            n_normal += 1
            pool -= 1
    return n_normal


def _final_normal_counts(array: PndArray, n_photons: int, n_trials: int,
                         seed: int) -> np.ndarray:
    """Final normal-wire count for each of n_trials independent trials.

    Vectorized across trials. Trial t draws from the stream keyed (seed, t)
    and consumes one uniform per wire-pass step, matching
    `pulse_absorption_trial` exactly, so the result is bit-identical no
    matter how the trials are batched across workers.
    """
    n = array.n_wires
    if n_photons <= 0:
        return np.zeros(n_trials, dtype=np.int64)
    rngs = trial_streams(seed, n_trials)
    pool = np.full(n_trials, float(n_photons))
    normal = np.zeros((n_trials, n), dtype=bool)
    log_keep = math.log1p(-array.alpha) if array.alpha < 1.0 else -math.inf
    uniforms = None
    col = _BLOCK
    for s in range(n * array.n_passes):
        live = (pool > 0.0) & ~normal.all(axis=1)
        if not live.any():
            break
        if col == _BLOCK:
            uniforms = np.stack([r.random(_BLOCK) for r in rngs])
            col = 0
        w = s % n
        if array.alpha >= 1.0:
            q = (pool > 0.0).astype(float)
        else:
            q = -np.expm1(pool * log_keep)
        converts = (~normal[:, w]) & (pool > 0.0) & (uniforms[:, col] < q)
        col += 1
        if converts.any():
            normal[converts, w] = True
            pool[converts] -= 1.0
    return normal.sum(axis=1).astype(np.int64)


def spike_probability(array: PndArray, n_photons: int, bias: BiasPoint,
                      n_trials: int = 1000, seed: int = 0) -> float:
    """Monte Carlo probability that a pulse of n_photons fires the array.

    A trial fires if the normal-wire count reaches threshold_count at any
    point; since the count only grows within a trial this equals the final
    count reaching threshold. Deterministic for fixed seed.
    """
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    n_c = threshold_count(array, bias)
    if n_photons < n_c:
        # each conversion consumes a photon, so the threshold is unreachable
        return 0.0
    counts = _final_normal_counts(array, n_photons, n_trials, seed)
    return float((counts >= n_c).mean())


def _default_photon_cap(array: PndArray, n_c: int) -> int:
    rate = array.alpha * array.n_passes
    if rate <= 0.0:
        return n_c
    return max(n_c, math.ceil(100.0 * array.n_wires / rate))


def _search_half_threshold(array: PndArray, n_c: int, n_trials: int, seed: int,
                           photon_cap: int, cache: dict) -> int:
    """Exponential search plus bisection for the 50% crossing in photon number.

    `cache` maps photon number to the per-trial final normal counts; trials
    do not depend on the bias, so the cache can be shared across a bias scan.
    """

    def prob(n: int) -> float:
        if n not in cache:
            cache[n] = _final_normal_counts(array, n, n_trials, seed)
        return float((cache[n] >= n_c).mean())

    lo, hi = n_c - 1, min(n_c, photon_cap)  # probability is exactly 0 below n_c
    while prob(hi) < 0.5:
        lo = hi
        if hi >= photon_cap:
            raise PhotonCapExceededError(photon_cap)
        hi = min(2 * hi, photon_cap)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if prob(mid) >= 0.5:
            hi = mid
        else:
            lo = mid
    return hi


def threshold_at_half(array: PndArray, bias: BiasPoint, n_trials: int = 1000,
                      seed: int = 0, counting: str = "absorbed",
                      photon_cap: int | None = None) -> int:
    """Smallest photon number at which the spike probability reaches 50%.

    counting="absorbed": photon number counts absorbed photons. Under the
    one-hotspot-per-wire rule every absorption drives exactly one wire
    normal, so the device fires deterministically once threshold_count
    photons have been absorbed and the result is exact.

    counting="incident": photon number counts photons incident on the
    receiver; the threshold is located by exponential search plus bisection
    over the Monte Carlo estimate. Trials are shared across photon numbers
    (common random numbers), and the estimate at a given photon number is
    independent of the search path.
    """
    n_c = threshold_count(array, bias)
    if counting == "absorbed":
        return n_c
    if counting != "incident":
        raise ValueError("counting must be 'absorbed' or 'incident'")
    if photon_cap is None:
        photon_cap = _default_photon_cap(array, n_c)
    return _search_half_threshold(array, n_c, n_trials, seed, photon_cap, {})


def threshold_staircase(array: PndArray, bias_fractions, n_trials: int = 1000,
                        seed: int = 0, counting: str = "incident",
                        photon_cap: int | None = None) -> list[int]:
    """50% thresholds over a bias scan, sharing Monte Carlo trials.

    The trial trajectories depend only on the photon number, not on the
    bias, so one cache of trial outcomes serves the whole scan; bias values
    that map to the same critical count n_c get identical thresholds by
    construction.
    """
    n_cs = [threshold_count(array, BiasPoint.from_fraction(f, array.i_c))
            for f in bias_fractions]
    cache: dict[int, np.ndarray] = {}
    by_nc: dict[int, int] = {}
    out = []
    for n_c in n_cs:
        if n_c not in by_nc:
            if counting == "absorbed":
                by_nc[n_c] = n_c
            else:
                cap = photon_cap if photon_cap is not None \
                    else _default_photon_cap(array, n_c)
                by_nc[n_c] = _search_half_threshold(
                    array, n_c, n_trials, seed, cap, cache)
        out.append(by_nc[n_c])
    return out


def spike_probability_surface(array: PndArray, photon_counts, bias_fractions,
                              n_trials: int = 1000, seed: int = 0) -> list[tuple]:
    """Spike probability over a (bias, photon-count) grid.

    The absorption trajectories do not depend on the bias, so each photon
    count is simulated once and evaluated against every bias threshold.
    Returns rows (bias_fraction, n_photons, probability) ordered by bias
    then photon count.
    """
    n_cs = [threshold_count(array, BiasPoint.from_fraction(f, array.i_c))
            for f in bias_fractions]
    rows = []
    counts_by_n = {int(n): _final_normal_counts(array, int(n), n_trials, seed)
                   for n in photon_counts}
    for f, n_c in zip(bias_fractions, n_cs):
        for n in photon_counts:
            prob = float((counts_by_n[int(n)] >= n_c).mean())
            rows.append((float(f), int(n), prob))
    return rows


def snd_absorb(wire: SndWire, n_photons: int, seed: int = 0) -> SndWire:
    """Absorb a pulse of photons into the series wire; returns the new wire.

    Each photon's absorption point is sampled along the out-and-back light
    path (length 2 * wire_length) from an exponential distribution with the
    configured attenuation length; photons whose draw exceeds the path are
    transmitted. The return leg folds back onto the physical wire. Two
    photons landing in the same hotspot-length slot make a single hotspot.
    """
    if n_photons < 0:
        raise ValueError("n_photons must be >= 0")
    rng = substream(seed)
    path = rng.exponential(scale=wire.attenuation_length, size=int(n_photons))
    length = wire.wire_length
    absorbed = path <= 2.0 * length
    x = path[absorbed]
    x = np.where(x > length, 2.0 * length - x, x)
    slot_um = wire.hotspot_length * 1e-3
    slots = np.minimum((x / slot_um).astype(np.int64), wire.slot_count - 1)
    occupied = wire.occupied_slots | frozenset(int(s) for s in slots)
    return replace(wire, occupied_slots=occupied)


def snd_resistance(wire: SndWire) -> float:
    """Series-wire resistance in kOhm: one hotspot per occupied slot."""
    return len(wire.occupied_slots) * wire.hotspot_resistance


@dataclass(frozen=True)
class AbsorptionStats:
    """Per-wire absorption statistics aggregated over Monte Carlo trials.

    mean_of_means  grand mean of the per-trial mean photons absorbed per wire
    mean_of_stds   mean of the per-trial standard deviation across wires
    std_of_stds    spread of those standard deviations (band width)
    """

    mean_of_means: float
    mean_of_stds: float
    std_of_stds: float


def absorption_statistics(array: PndArray, n_incident: int,
                          n_trials: int = 1000, seed: int = 0) -> AbsorptionStats:
    """Monte Carlo absorption statistics with multi-photon wires.

    Unlike the spike Monte Carlo, a wire here may absorb any number of
    photons: each photon independently survives each wire pass with
    probability 1 - alpha and is absorbed by the wire at which its first
    failure occurs (or transmitted past the array). Per trial, the mean and
    the population standard deviation of the per-wire absorbed counts are
    computed; the trial values are then aggregated.
    """
    if n_trials < 2:
        raise ValueError("n_trials must be >= 2")
    if n_incident < 0:
        raise ValueError("n_incident must be >= 0")
    n = array.n_wires
    total_passes = n * array.n_passes
    means = np.empty(n_trials)
    stds = np.empty(n_trials)
    for t in range(n_trials):
        rng = substream(seed, t)
        if n_incident == 0 or array.alpha == 0.0:
            per_wire = np.zeros(n)
        else:
            first_hit = rng.geometric(array.alpha, size=n_incident)
            hit = first_hit <= total_passes
            wires = (first_hit[hit] - 1) % n
            per_wire = np.bincount(wires, minlength=n).astype(float)
        means[t] = per_wire.mean()
        stds[t] = per_wire.std()
    return AbsorptionStats(
        mean_of_means=float(means.mean()),
        mean_of_stds=float(stds.mean()),
        std_of_stds=float(stds.std()),
    )
