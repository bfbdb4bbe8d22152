"""Ensemble statistics: speeds, scaling exponents, rescaled densities.

All estimators are annealed: they reduce endpoint ensembles pooled over
environment realizations.  Sums use compensated accumulation so results
do not depend on reduction order.
"""

import math
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np

from .errors import InvalidArgumentError
from .simulator import EndpointSample

HIST_BINS = 61
HIST_SPAN_SIGMAS = 5.0
DIFFUSIVE_BAND = (0.49, 0.51)
TV_ALPHA_STEP = 0.005

SamplesArg = Union[EndpointSample, Sequence[EndpointSample]]


@dataclass(frozen=True)
class SpeedEstimate:
    """Displacement per jump with its standard error."""

    v_n: float
    stderr: float
    n: int
    M: int


@dataclass(frozen=True)
class ScalingSlice:
    N: int
    n: int
    M: int
    sd: float
    alpha: float
    flagged: bool  # zero spread, exponent undefined


@dataclass(frozen=True)
class ScalingEstimate:
    """Per-slice spreads and exponents; alpha_star is read off the
    largest usable slice, with a least-squares slope as a diagnostic."""

    slices: Tuple[ScalingSlice, ...]
    alpha_star: float
    lsq_slope: float


@dataclass(frozen=True)
class RescaledHistogram:
    """Unit-mass histogram of (X_n - v_n * n) / n^alpha."""

    alpha: float
    edges: np.ndarray  # HIST_BINS + 1 uniform edges
    mass: np.ndarray  # HIST_BINS entries
    tail_mass: float  # out-of-range mass; in-range + tail == 1
    M: int


def _merge(samples: SamplesArg) -> Tuple[np.ndarray, int]:
    if isinstance(samples, EndpointSample):
        samples = [samples]
    if len(samples) == 0:
        raise InvalidArgumentError("no samples given")
    n = samples[0].n
    params = samples[0].params
    for s in samples[1:]:
        if s.n != n:
            raise InvalidArgumentError(f"mixed jump counts in one batch: {s.n} != {n}")
        if s.params != params:
            raise InvalidArgumentError("mixed parameters in one batch")
    return np.concatenate([s.endpoints for s in samples]), n


def _mean_sd(x: np.ndarray) -> Tuple[float, float]:
    """Compensated mean and (M-1)-denominator standard deviation."""
    m = x.size
    mean = math.fsum(x) / m
    ss = math.fsum((float(v) - mean) ** 2 for v in x)
    return mean, math.sqrt(ss / (m - 1))


def estimate_speed(samples: SamplesArg) -> SpeedEstimate:
    """v_n = sum(X) / (n M); stderr is the endpoint SD over n sqrt(M)."""
    x, n = _merge(samples)
    if x.size < 2:
        raise InvalidArgumentError("speed needs at least 2 replicas")
    mean, sd = _mean_sd(x)
    return SpeedEstimate(v_n=mean / n, stderr=sd / (n * math.sqrt(x.size)),
                         n=n, M=x.size)


def _slice_n_to_N(n: int) -> int:
    N = n.bit_length() - 1
    if n != 1 << N:
        raise InvalidArgumentError(f"slice jump counts must be powers of two, got {n}")
    return N


def estimate_scaling(batches: Sequence[SamplesArg]) -> ScalingEstimate:
    """Spread growth across slices of increasing n = 2^N.

    Each batch is an independent ensemble at one n.  A slice with zero
    spread has no defined exponent; it is flagged and excluded from both
    alpha_star and the diagnostic slope.
    """
    if len(batches) < 3:
        raise InvalidArgumentError("scaling needs at least 3 slices")
    slices = []
    for b in batches:
        x, n = _merge(b)
        if x.size < 100:
            raise InvalidArgumentError(f"slice at n={n} has M={x.size} < 100")
        N = _slice_n_to_N(n)
        _, sd = _mean_sd(x)
        flagged = sd == 0.0
        alpha = math.nan if flagged else math.log(sd) / math.log(n)
        slices.append(ScalingSlice(N=N, n=n, M=x.size, sd=sd, alpha=alpha,
                                   flagged=flagged))
    slices.sort(key=lambda s: s.n)
    if len({s.n for s in slices}) != len(slices):
        raise InvalidArgumentError("slices must have distinct jump counts")
    usable = [s for s in slices if not s.flagged]
    if not usable:
        raise InvalidArgumentError("every slice has zero spread; no exponent defined")
    alpha_star = usable[-1].alpha
    if len(usable) >= 2:
        slope = float(np.polyfit([math.log(s.n) for s in usable],
                                 [math.log(s.sd) for s in usable], 1)[0])
    else:
        slope = math.nan
    return ScalingEstimate(slices=tuple(slices), alpha_star=alpha_star,
                           lsq_slope=slope)


def rescaled_density(samples: SamplesArg, v_n: float, alpha: float) -> RescaledHistogram:
    """Histogram (X_n - v_n n) / n^alpha over HIST_BINS uniform bins
    spanning [-5 sigma, +5 sigma] of the rescaled data around zero.

    Zero-spread ensembles get a fallback half-width of 1/2, which puts a
    centered constant entirely in the middle bin.  Total reported mass
    (bins plus tail) is exactly 1.
    """
    x, n = _merge(samples)
    if x.size < 100:
        raise InvalidArgumentError(f"density needs M >= 100, got {x.size}")
    y = (x - v_n * n) / float(n) ** alpha
    sigma = float(y.std(ddof=1))
    half = HIST_SPAN_SIGMAS * sigma if sigma > 0.0 else 0.5
    edges = np.linspace(-half, half, HIST_BINS + 1)
    counts, _ = np.histogram(y, bins=edges)
    mass = counts / x.size
    tail = 1.0 - math.fsum(mass)
    return RescaledHistogram(alpha=float(alpha), edges=edges, mass=mass,
                             tail_mass=tail, M=x.size)


def _tv_profiles(ys: Sequence[np.ndarray]):
    """Per-slice mass vectors (bins plus the two tails) on shared edges."""
    pooled = np.concatenate(ys)
    sigma = float(pooled.std(ddof=1))
    if sigma == 0.0:
        return None  # everything collapsed to one atom: all TVs vanish
    half = HIST_SPAN_SIGMAS * sigma
    edges = np.linspace(-half, half, HIST_BINS + 1)
    profiles = []
    for y in ys:
        counts, _ = np.histogram(y, bins=edges)
        body = counts / y.size
        left = np.count_nonzero(y < edges[0]) / y.size
        right = np.count_nonzero(y > edges[-1]) / y.size
        profiles.append(np.concatenate((body, [left, right])))
    return profiles


def tv_exponent_fit(batches: Sequence[SamplesArg]) -> float:
    """Exponent minimizing summed pairwise total-variation distance.

    Each slice is centered by its own empirical drift, rescaled by
    n^alpha, and binned on shared edges (out-of-range mass kept in two
    directional tail cells).  Grid search over alpha in [0, 1] with step
    TV_ALPHA_STEP; exact ties resolve to the smallest alpha.
    """
    if len(batches) < 3:
        raise InvalidArgumentError("exponent fit needs at least 3 slices")
    data = []
    for b in batches:
        x, n = _merge(b)
        if x.size < 100:
            raise InvalidArgumentError(f"slice at n={n} has M={x.size} < 100")
        data.append((x, n, math.fsum(x) / x.size))
    if len({n for _, n, _ in data}) != len(data):
        raise InvalidArgumentError("slices must have distinct jump counts")
    alphas = np.arange(0.0, 1.0 + TV_ALPHA_STEP / 2, TV_ALPHA_STEP)
    best_alpha = 0.0
    best_total = math.inf
    for alpha in alphas:
        ys = [(x - mean) / float(n) ** alpha for x, n, mean in data]
        profiles = _tv_profiles(ys)
        if profiles is None:
            total = 0.0
        else:
            total = 0.0
            for i in range(len(profiles)):
                for j in range(i + 1, len(profiles)):
                    total += 0.5 * float(np.abs(profiles[i] - profiles[j]).sum())
        if total < best_total:
            best_total = total
            best_alpha = float(alpha)
    return best_alpha


def curve_flags(points: Sequence[Tuple[float, float, float]],
                k: float = 2.0) -> Tuple[bool, bool]:
    """(monotone, concave) noise-tolerant checks for (x, v, se) triples.

    Forward differences may dip k joint standard errors below zero and
    still count as monotone; second differences may poke k joint standard
    errors above zero and still count as concave.  Differences are plain
    (the abscissae are assumed evenly spaced).
    """
    if len(points) < 4:
        raise InvalidArgumentError(f"curve classification needs >= 4 points, got {len(points)}")
    xs = [p[0] for p in points]
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise InvalidArgumentError("abscissae must be strictly increasing")
    vs = [p[1] for p in points]
    ses = [p[2] for p in points]
    monotone = all(
        vs[i + 1] - vs[i] >= -k * math.hypot(ses[i + 1], ses[i])
        for i in range(len(vs) - 1)
    )
    concave = all(
        vs[i + 1] - 2.0 * vs[i] + vs[i - 1]
        <= k * math.sqrt(ses[i + 1] ** 2 + 4.0 * ses[i] ** 2 + ses[i - 1] ** 2)
        for i in range(1, len(vs) - 1)
    )
    return monotone, concave


def classify_curve(points: Sequence[Tuple[float, float, float]],
                   k: float = 2.0) -> str:
    """Label a sampled curve monotone / concave / non-concave.

    "monotone" is reported only when both curve_flags hold, so monotone
    cells nest inside concave ones by construction.
    """
    monotone, concave = curve_flags(points, k)
    if monotone and concave:
        return "monotone"
    if concave:
        return "concave"
    return "non-concave"


def classify_exponent(alpha_star: float) -> str:
    """cross inside the diffusive band (inclusive), dot above, square below."""
    if not math.isfinite(alpha_star):
        raise InvalidArgumentError(f"exponent must be finite, got {alpha_star}")
    lo, hi = DIFFUSIVE_BAND
    if lo <= alpha_star <= hi:
        return "cross"
    return "dot" if alpha_star > hi else "square"
