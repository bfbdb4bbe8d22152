"""Walker ensembles in static, spin flip, and exclusion environments.

The walker holds position x and jumps at rate walker_rate; at a jump it
reads the occupancy under itself and steps right with probability p on a
particle, 1-p on a hole.  :func:`run` produces endpoint ensembles through
the compiled batch loops; :func:`run_replica` is the slow reference that
drives the plain environment objects event by event and can emit
environment snapshots along the way.  Both paths derive replica streams
from (seed, stream index), so results are reproducible and replicas are
independent by construction.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .environments import (
    IsfCache,
    SseState,
    StaticField,
    env_query,
    window_half_width,
)
from .errors import InvalidArgumentError
from .params import ModelParams
from .rng import (
    MASK64,
    RngStream,
    mix_stream_key,
    site_key_from_key,
    state_from_key,
    threshold_u64,
)

_EMPTY_I64 = np.empty(0, dtype=np.int64)
_EMPTY_F64 = np.empty(0, dtype=np.float64)


@dataclass(frozen=True)
class EndpointSample:
    """Walker endpoints after n jumps, one entry per replica."""

    params: ModelParams
    n: int
    seed: int
    stream_base: int
    endpoints: np.ndarray
    durations: Optional[np.ndarray]  # clock time per replica; None for static

    @property
    def replicas(self) -> int:
        return self.endpoints.size


@dataclass(frozen=True)
class TrajectoryRecord:
    """One replica's full path, including the start at the origin."""

    params: ModelParams
    n: int
    seed: int
    stream_index: int
    positions: np.ndarray  # length n + 1
    times: np.ndarray  # length n + 1
    env_lines: tuple = ()

    @property
    def endpoint(self) -> int:
        return int(self.positions[-1])


def _check_run_args(n: int, M: int) -> None:
    if not (isinstance(n, (int, np.integer)) and n >= 1):
        raise InvalidArgumentError(f"jump count must be a positive integer, got {n}")
    if not (isinstance(M, (int, np.integer)) and M >= 1):
        raise InvalidArgumentError(f"replica count must be a positive integer, got {M}")


def _reseed(state: np.ndarray, seed: int, stream_index: int):
    """Load the stream's xoshiro state into ``state``; returns the site key."""
    key = np.uint64(mix_stream_key(np.uint64(seed & MASK64),
                                   np.uint64(stream_index & MASK64)))
    state_from_key(key, state)
    return np.uint64(site_key_from_key(key))


class _StaticRunner:
    def __init__(self, params: ModelParams, n: int):
        self.params = params
        self.n = n
        self.origin = n + 1
        self.occ = np.empty(2 * n + 3, dtype=np.uint8)
        self.state = np.empty(4, dtype=np.uint64)
        self.thr_rho = threshold_u64(params.rho)
        self.thr_occ = threshold_u64(params.p)
        self.thr_vac = threshold_u64(1.0 - params.p)

    has_clock = False

    def replica(self, seed, stream_index, positions, times):
        site_key = _reseed(self.state, seed, stream_index)
        self.occ.fill(_kernels.UNSET)
        x = _kernels.static_walk(
            self.state, self.occ, self.origin, site_key, self.thr_rho,
            self.thr_occ, self.thr_vac, self.n, positions, times,
            self.params.walker_rate,
        )
        return x, math.nan


class _IsfRunner:
    def __init__(self, params: ModelParams, n: int):
        self.params = params
        self.n = n
        self.origin = n + 1
        self.value = np.empty(2 * n + 3, dtype=np.uint8)
        self.since = np.empty(2 * n + 3, dtype=np.float64)
        self.state = np.empty(4, dtype=np.uint64)
        self.thr_rho = threshold_u64(params.rho)
        self.thr_occ = threshold_u64(params.p)
        self.thr_vac = threshold_u64(1.0 - params.p)

    has_clock = True

    def replica(self, seed, stream_index, positions, times):
        site_key = _reseed(self.state, seed, stream_index)
        self.since.fill(0.0)
        return _kernels.isf_walk(
            self.state, self.value, self.since, self.origin, site_key,
            self.thr_rho, self.thr_occ, self.thr_vac, self.params.gamma,
            self.params.rho, self.params.walker_rate, self.n, positions, times,
        )


class _SseRunner:
    def __init__(self, params: ModelParams, n: int, exact: bool = False):
        self.params = params
        self.n = n
        wcap = window_half_width(n)
        self.origin = wcap
        size = 2 * wcap + 1
        self.occ = np.empty(size, dtype=np.uint8)
        self.idx_of = np.empty(size, dtype=np.int32)
        self.pos = np.empty(size, dtype=np.int64)
        self.state = np.empty(4, dtype=np.uint64)
        self.thr_rho = threshold_u64(params.rho)
        self.thr_occ = threshold_u64(params.p)
        self.thr_vac = threshold_u64(1.0 - params.p)
        self.t_end = (n + 8.0 * math.sqrt(n) + 64.0) / params.walker_rate
        self.full_torus = params.boundary == "torus"
        need0 = max(
            int(_kernels.MARGIN_C * math.sqrt(2.0 * params.gamma * self.t_end)) + 1,
            _kernels.MARGIN_FLOOR,
        )
        half0 = need0 + (need0 >> 1)
        self.half0 = wcap if (exact or half0 >= wcap) else half0

    has_clock = True

    def replica(self, seed, stream_index, positions, times):
        site_key = _reseed(self.state, seed, stream_index)
        return _kernels.sse_walk(
            self.state, site_key, self.occ, self.idx_of, self.pos, self.origin,
            self.half0, self.full_torus, self.thr_rho, self.thr_occ,
            self.thr_vac, self.params.gamma, self.params.rho,
            self.params.walker_rate, self.n, self.t_end, positions, times,
        )


def _runner_for(params: ModelParams, n: int, exact: bool):
    if params.env == "static":
        return _StaticRunner(params, n)
    if params.env == "isf":
        return _IsfRunner(params, n)
    return _SseRunner(params, n, exact=exact)


def run(params: ModelParams, n: int, M: int, seed: int = 0,
        stream_base: int = 0, exact: bool = False) -> EndpointSample:
    """Simulate M independent replicas of n jumps each.

    Replica i uses the stream (seed, stream_base + i).  ``exact`` forces
    the exclusion loop to carry the full window from the start instead of
    the adaptive one; other environments ignore it.
    """
    _check_run_args(n, M)
    runner = _runner_for(params, n, exact)
    endpoints = np.empty(M, dtype=np.int64)
    durations = np.empty(M, dtype=np.float64) if runner.has_clock else None
    for i in range(M):
        x, t = runner.replica(seed, stream_base + i, _EMPTY_I64, _EMPTY_F64)
        endpoints[i] = x
        if durations is not None:
            durations[i] = t
    return EndpointSample(params, int(n), int(seed), int(stream_base),
                          endpoints, durations)


def run_replica_fast(params: ModelParams, n: int, seed: int = 0,
                     stream_index: int = 0) -> TrajectoryRecord:
    """One replica through the compiled loop, with the full path recorded."""
    _check_run_args(n, 1)
    runner = _runner_for(params, n, exact=False)
    positions = np.empty(n, dtype=np.int64)
    times = np.empty(n, dtype=np.float64)
    runner.replica(seed, stream_index, positions, times)
    return TrajectoryRecord(
        params, int(n), int(seed), int(stream_index),
        np.concatenate(([0], positions)),
        np.concatenate(([0.0], times)),
    )


def _build_env(params: ModelParams, rng: RngStream, half_width: int):
    if params.env == "static":
        return StaticField.build(rng, half_width, params.rho)
    if params.env == "isf":
        return IsfCache(rng, params.rho, params.gamma,
                        lo=-half_width, hi=half_width)
    return SseState.build(rng, half_width, params.rho, params.gamma,
                          params.boundary)


def _snapshot(env, at: float) -> str:
    if isinstance(env, SseState):
        env.advance(at)
        return env.serialize()
    if isinstance(env, IsfCache):
        if at > env.clock:
            env.query(env.lo, at)  # push the cache clock forward
        return env.serialize()
    return env.serialize()


def run_replica(params: ModelParams, n: int, seed: int = 0,
                stream_index: int = 0,
                snapshot_times: Sequence[float] = ()) -> TrajectoryRecord:
    """Reference replica: drives the plain environment objects event by
    event, preserving the exact joint law of times and positions.

    ``snapshot_times`` (non-decreasing) interleaves environment snapshot
    lines with the walk; each snapshot is taken once the walk's clock
    passes it, at the earliest state the environment can still serialize.
    """
    _check_run_args(n, 1)
    snaps = sorted(float(s) for s in snapshot_times)
    if any(s < 0.0 for s in snaps):
        raise InvalidArgumentError("snapshot times must be >= 0")
    rng = RngStream(seed, stream_index)
    env = _build_env(params, rng, window_half_width(n))
    thr_occ = int(threshold_u64(params.p))
    thr_vac = int(threshold_u64(1.0 - params.p))
    positions = np.empty(n + 1, dtype=np.int64)
    times = np.empty(n + 1, dtype=np.float64)
    positions[0] = 0
    times[0] = 0.0
    lines = []
    si = 0
    x = 0
    t = 0.0
    for k in range(1, n + 1):
        t += rng.exponential(params.walker_rate)
        while si < len(snaps) and snaps[si] <= t:
            lines.append(_snapshot(env, snaps[si]))
            si += 1
        v = env_query(env, x, t)
        u = rng.next_u64()
        x += 1 if u < (thr_occ if v else thr_vac) else -1
        positions[k] = x
        times[k] = t
    for s in snaps[si:]:
        lines.append(_snapshot(env, s))
    return TrajectoryRecord(params, int(n), int(seed), int(stream_index),
                            positions, times, tuple(lines))


def symmetry_reflect(sample: EndpointSample) -> EndpointSample:
    """Map an ensemble through the negating model symmetry.

    Flipping every cell and reflecting space sends rho -> 1-rho and the
    walk to its negative; the reflected ensemble has the law of the
    density-flipped parameters.  (Flipping cells while also relabelling
    p -> 1-p changes nothing, see :func:`symmetry_relabel`.)
    """
    p = sample.params
    return EndpointSample(
        p.with_(rho=1.0 - p.rho), sample.n, sample.seed,
        sample.stream_base, -sample.endpoints, sample.durations,
    )


def symmetry_relabel(sample: EndpointSample) -> EndpointSample:
    """Relabel through the invariance p -> 1-p, rho -> 1-rho.

    Flipping every cell turns each occupied-site step into the identical
    vacant-site step of the complementary parameters, so the walk itself
    is unchanged in law.
    """
    p = sample.params
    return EndpointSample(
        p.with_(p=1.0 - p.p, rho=1.0 - p.rho), sample.n, sample.seed,
        sample.stream_base, sample.endpoints.copy(), sample.durations,
    )
