"""Parameter-grid orchestration: speed sweeps, scaling sweeps, phase maps.

Grid cells are embarrassingly parallel.  Every replica draws its random
stream from (master_seed, global replica index), where the global index
is point_index * streams_per_cell + slice_position * M + replica; the
mixing function behind this is documented in the rng module.  Results
are therefore pure functions of (grid, cell index) and do not depend on
execution order, chunking, or thread count.

A wall-clock budget per cell turns runaway cells into recorded aborts
instead of stalled sweeps: replicas completed before the deadline are
kept, the rest are counted in ``aborts`` with flag "budget".  A cell
whose aborts exceed 1% of the request is marked failed; the sweep
continues past it.  Budget aborts are the one timing-dependent output;
sweeps that finish inside the budget are bit-reproducible.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

from .errors import InvalidArgumentError
from .estimators import (
    ScalingEstimate,
    SpeedEstimate,
    classify_curve,
    classify_exponent,
    curve_flags,
    estimate_scaling,
    estimate_speed,
)
from .oracles import reliable_steps
from .params import ModelParams
from .simulator import EndpointSample, run

CHUNK_CAP = 256            # replicas per timing slice inside one cell
DEFAULT_BUDGET_S = 600.0   # per-cell wall-clock guard
MIN_SLICE_M = 100          # slices with fewer completed replicas are unusable
FAIL_ABORT_FRACTION = 0.01

CURVE_LABELS = {"monotone": "m", "concave": "c", "non-concave": "+"}


def g9(x: float) -> str:
    """Nine-significant-digit float formatting used by all file output."""
    return format(float(x), ".9g")


@dataclass(frozen=True)
class AxisRange:
    """Evenly spaced axis values start, start+step, ..., count of them."""

    start: float
    step: float
    count: int

    def values(self) -> Tuple[float, ...]:
        if self.count < 1:
            raise InvalidArgumentError(f"axis count must be >= 1, got {self.count}")
        return tuple(self.start + i * self.step for i in range(self.count))


Axis = Union[AxisRange, Sequence[float]]


def _axis_values(axis: Axis, name: str) -> Tuple[float, ...]:
    vals = axis.values() if isinstance(axis, AxisRange) else tuple(float(v) for v in axis)
    if len(vals) == 0:
        raise InvalidArgumentError(f"{name} axis is empty")
    return vals


@dataclass(frozen=True)
class GridSpec:
    """A product grid over (p, rho, gamma) with a replica budget.

    Axes are AxisRange instances or explicit value sequences.  ``n`` is
    the jump count for speed grids; ``N_list`` holds log2 jump counts
    for scaling grids (exactly one of the two must be set).  Cell order,
    and with it the seeding layout, is the p-major, then rho, then gamma
    product order returned by points().
    """

    p: Axis
    rho: Axis
    gamma: Axis = (0.0,)
    env_kind: str = "static"
    n: Optional[int] = None
    N_list: Optional[Sequence[int]] = None
    M: int = 2000
    master_seed: int = 0
    boundary: str = "torus"
    walker_rate: float = 1.0
    budget_seconds: float = DEFAULT_BUDGET_S

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", _axis_values(self.p, "p"))
        object.__setattr__(self, "rho", _axis_values(self.rho, "rho"))
        object.__setattr__(self, "gamma", _axis_values(self.gamma, "gamma"))
        if (self.n is None) == (self.N_list is None):
            raise InvalidArgumentError("set exactly one of n (speed) or N_list (scaling)")
        if self.n is not None and self.n < 1:
            raise InvalidArgumentError(f"n must be >= 1, got {self.n}")
        if self.N_list is not None:
            ns = tuple(int(N) for N in self.N_list)
            if any(N < 1 or N > 62 for N in ns):
                raise InvalidArgumentError(f"N_list entries must be in [1, 62], got {ns}")
            if len(set(ns)) != len(ns):
                raise InvalidArgumentError(f"N_list has duplicates: {ns}")
            object.__setattr__(self, "N_list", ns)
        if self.M < 2:
            raise InvalidArgumentError(f"M must be >= 2, got {self.M}")
        if not (self.budget_seconds > 0.0):
            raise InvalidArgumentError("budget_seconds must be positive")
        pts = tuple(
            ModelParams(p=p, rho=r, gamma=g, env=self.env_kind,
                        boundary=self.boundary, walker_rate=self.walker_rate)
            for p in self.p for r in self.rho for g in self.gamma
        )
        if len(set(pts)) != len(pts):
            raise InvalidArgumentError("grid points are not distinct")
        object.__setattr__(self, "_points", pts)

    def points(self) -> Tuple[ModelParams, ...]:
        return self._points

    @property
    def streams_per_cell(self) -> int:
        width = len(self.N_list) if self.N_list is not None else 1
        return width * self.M


def cell_key(params: ModelParams, n: Optional[int], seed: int) -> Tuple[str, ...]:
    """Resume key: a cell is identified by its parameters and master seed.

    Components are the 9-significant-digit strings written to CSV, so
    keys built from a re-read file match keys built from a GridSpec.
    """
    return (params.env, g9(params.p), g9(params.rho), g9(params.gamma),
            "" if n is None else str(int(n)), str(int(seed)))


@dataclass(frozen=True)
class PhaseCell:
    """A phase-diagram point: scaling exponent and its plotting symbol."""

    p: float
    rho: float
    gamma: float
    alpha_star: float
    symbol: str
    v_n: float
    stderr: float
    abort_count: int

    def __post_init__(self) -> None:
        want = classify_exponent(self.alpha_star)
        if self.symbol != want:
            raise InvalidArgumentError(
                f"symbol {self.symbol!r} inconsistent with alpha_star={self.alpha_star}"
            )


@dataclass(frozen=True)
class SpeedCell:
    """One grid point of a speed sweep."""

    params: ModelParams
    n: int
    estimate: Optional[SpeedEstimate]  # None when < 2 replicas completed
    completed: int
    aborts: int
    abort_flag: str                    # "" or "budget"
    failed: bool                       # aborts exceed 1% of the request
    seed: int


@dataclass(frozen=True)
class ScalingCell:
    """One grid point of a scaling sweep.

    ``slice_M`` counts completed replicas per N slice in N_list order;
    ``log2_nbar`` carries the environment-reliability horizon for
    exclusion cells (None where the bound does not apply).
    """

    params: ModelParams
    N_list: Tuple[int, ...]
    estimate: Optional[ScalingEstimate]
    phase: Optional[PhaseCell]
    slice_M: Tuple[int, ...]
    aborts: int
    abort_flag: str
    failed: bool
    seed: int
    log2_nbar: Optional[float]


@dataclass(frozen=True)
class CurveCell:
    """A (rho, gamma) point of the speed-curve shape diagram."""

    rho: float
    gamma: float
    label: Optional[str]             # "m", "c" or "+"; None when failed
    cells: Tuple[SpeedCell, ...]     # the underlying p-curve, ascending p
    failed: bool


def _run_slices(params: ModelParams, n_list: Sequence[int], M: int, seed: int,
                base: int, budget: float):
    """Chunked replica runs for one cell under a single deadline.

    Slices run cheapest first so a budget abort costs the expensive
    tail, but each replica's stream index is fixed by slice position in
    ``n_list``, so completed results do not depend on that ordering or
    on chunk boundaries.  Returns (chunks per slice, completed per
    slice, aborted flag).
    """
    t0 = time.monotonic()
    deadline = t0 + budget
    chunks: List[List[EndpointSample]] = [[] for _ in n_list]
    done = [0] * len(n_list)
    total = len(n_list) * M
    aborted = False
    for i in sorted(range(len(n_list)), key=lambda j: n_list[j]):
        if aborted:
            break
        chunk = 1
        s0 = time.monotonic()
        while done[i] < M:
            k = min(chunk, M - done[i])
            chunks[i].append(run(params, n_list[i], k, seed=seed,
                                 stream_base=base + i * M + done[i]))
            done[i] += k
            now = time.monotonic()
            if now >= deadline:
                aborted = sum(done) < total
                break
            per = (now - s0) / done[i]
            room = int((deadline - now) / (4.0 * per)) if per > 0.0 else CHUNK_CAP
            chunk = max(1, min(CHUNK_CAP, room))
    return chunks, done, aborted


def collect_slices(params: ModelParams, N_list: Sequence[int], M: int,
                   seed: int, budget_seconds: float = DEFAULT_BUDGET_S):
    """Replica ensembles for one standalone cell, one ensemble per N.

    Stream indices match a single-point scaling grid (cell index 0), so
    estimates derived from these ensembles agree bit for bit with
    run_scaling_sweep on the same point.  Returns (chunk lists per
    slice, completed counts, aborted flag).
    """
    n_list = tuple(1 << int(N) for N in N_list)
    chunks, done, aborted = _run_slices(params, n_list, M, seed, 0, budget_seconds)
    return chunks, tuple(done), aborted


def _map_cells(fn: Callable, tasks: Sequence, threads: int) -> list:
    """Run fn over tasks on a pool; output order follows task order."""
    if threads <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    out = [None] * len(tasks)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = {pool.submit(fn, t): j for j, t in enumerate(tasks)}
        for fut in as_completed(futures):
            out[futures[fut]] = fut.result()
    return out


def _speed_cell(grid: GridSpec, index: int, params: ModelParams) -> SpeedCell:
    chunks, done, aborted = _run_slices(
        params, (grid.n,), grid.M, grid.master_seed,
        index * grid.streams_per_cell, grid.budget_seconds)
    completed = done[0]
    aborts = grid.M - completed
    est = estimate_speed(chunks[0]) if completed >= 2 else None
    return SpeedCell(params=params, n=grid.n, estimate=est, completed=completed,
                     aborts=aborts, abort_flag="budget" if aborted else "",
                     failed=aborts > FAIL_ABORT_FRACTION * grid.M,
                     seed=grid.master_seed)


def run_speed_sweep(grid: GridSpec, *, threads: int = 1,
                    skip: frozenset = frozenset()) -> List[Optional[SpeedCell]]:
    """M replicas of n jumps at every grid point; one SpeedCell each.

    The returned list is aligned with grid.points(); entries whose
    cell_key is in ``skip`` (already present in a resumed output file)
    are None.
    """
    if grid.n is None:
        raise InvalidArgumentError("speed sweep needs a grid with n set")
    tasks = [(i, pt) for i, pt in enumerate(grid.points())
             if cell_key(pt, grid.n, grid.master_seed) not in skip]
    got = iter(_map_cells(lambda t: _speed_cell(grid, *t), tasks, threads))
    live = {i for i, _ in tasks}
    return [next(got) if i in live else None for i in range(len(grid.points()))]


def _cell_reliability(params: ModelParams) -> Optional[float]:
    if params.env != "sse" or not (0.5 < params.p < 1.0) or params.gamma <= 0.0:
        return None
    return reliable_steps(params.p, params.rho, params.gamma).log2_nbar


def _scaling_cell(grid: GridSpec, index: int, params: ModelParams) -> ScalingCell:
    n_list = tuple(1 << N for N in grid.N_list)
    chunks, done, aborted = _run_slices(
        params, n_list, grid.M, grid.master_seed,
        index * grid.streams_per_cell, grid.budget_seconds)
    aborts = len(n_list) * grid.M - sum(done)
    usable = [c for c, d in zip(chunks, done) if d >= MIN_SLICE_M]
    est = phase = None
    if len(usable) >= 3:
        try:
            est = estimate_scaling(usable)
        except InvalidArgumentError:
            est = None  # e.g. every slice had zero spread
    if est is not None:
        top = max(usable, key=lambda c: c[0].n)
        sp = estimate_speed(top)
        phase = PhaseCell(p=params.p, rho=params.rho, gamma=params.gamma,
                          alpha_star=est.alpha_star,
                          symbol=classify_exponent(est.alpha_star),
                          v_n=sp.v_n, stderr=sp.stderr, abort_count=aborts)
    return ScalingCell(params=params, N_list=grid.N_list, estimate=est,
                       phase=phase, slice_M=tuple(done), aborts=aborts,
                       abort_flag="budget" if aborted else "",
                       failed=(aborts > FAIL_ABORT_FRACTION * len(n_list) * grid.M
                               or phase is None),
                       seed=grid.master_seed,
                       log2_nbar=_cell_reliability(params))


def run_scaling_sweep(grid: GridSpec, *, threads: int = 1,
                      skip: frozenset = frozenset()) -> List[Optional[ScalingCell]]:
    """Independent ensembles per N slice at every grid point.

    Each cell gets a ScalingEstimate over its usable slices and a
    PhaseCell carrying the exponent symbol; alignment and ``skip`` work
    as in run_speed_sweep (scaling keys use n=None).
    """
    if grid.N_list is None:
        raise InvalidArgumentError("scaling sweep needs a grid with N_list set")
    if len(grid.N_list) < 3:
        raise InvalidArgumentError(f"scaling sweep needs >= 3 slices, got {len(grid.N_list)}")
    tasks = [(i, pt) for i, pt in enumerate(grid.points())
             if cell_key(pt, None, grid.master_seed) not in skip]
    got = iter(_map_cells(lambda t: _scaling_cell(grid, *t), tasks, threads))
    live = {i for i, _ in tasks}
    return [next(got) if i in live else None for i in range(len(grid.points()))]


def speed_curve_diagram(grid: GridSpec, *, threads: int = 1) -> List[CurveCell]:
    """Classify the shape of p -> v over every (rho, gamma) grid point.

    Labels: "m" for monotone increasing, "c" for concave only, "+" for
    neither.  Monotone cells nest inside concave ones; that nesting is
    asserted on the outputs.  A curve with any failed p-cell is marked
    failed and left unlabelled.
    """
    if grid.n is None:
        raise InvalidArgumentError("curve diagram needs a grid with n set")
    if len(grid.p) < 10:
        raise InvalidArgumentError(f"curve diagram needs >= 10 p points, got {len(grid.p)}")
    cells = run_speed_sweep(grid, threads=threads)
    n_rho, n_gamma = len(grid.rho), len(grid.gamma)
    out = []
    for ir, r in enumerate(grid.rho):
        for ig, g in enumerate(grid.gamma):
            col = [cells[(ip * n_rho + ir) * n_gamma + ig]
                   for ip in range(len(grid.p))]
            ok = all(not c.failed and c.estimate is not None for c in col)
            label = None
            if ok:
                pts = [(c.params.p, c.estimate.v_n, c.estimate.stderr) for c in col]
                label = CURVE_LABELS[classify_curve(pts)]
                if label == "m" and not curve_flags(pts)[1]:
                    raise AssertionError("monotone label without concavity")
            out.append(CurveCell(rho=r, gamma=g, label=label,
                                 cells=tuple(col), failed=not ok))
    return out
