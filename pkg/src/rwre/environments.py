"""Occupancy environments observed by the walker.

Three kinds share one query interface:

* :class:`StaticField` — a frozen Bernoulli(rho) field on a finite window.
* :class:`IsfCache` — independent two-state flip chains per site, evaluated
  lazily through the exact two-state transition kernel, so only queried
  sites ever cost anything.
* :class:`SseState` — simple symmetric exclusion on a finite window, run as
  an explicit event chain with per-particle clocks.

Site values are 0 (vacant) or 1 (occupied).  All initial fields are drawn
from the stream's per-site hash, so environments of different kinds built on
the same stream start from the identical configuration.

Snapshots serialize to the flat debug line ``t=<clock> cells=<0/1 string>
origin=<index>`` where ``origin`` is the index of lattice site 0 inside the
cell string.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .errors import ContractViolationError, InvalidArgumentError, WindowOverflowError
from .rng import RngStream, bulk_site_occupancy

VACANT = 0
OCCUPIED = 1


def window_half_width(n: int) -> int:
    """Half-width of the simulated window for a run of n jumps.

    The window [-W, W] must contain every site whose state can influence the
    walk; 3n/2 leaves a comfortable factor over the walker's reachable range.
    """
    if n < 1:
        raise InvalidArgumentError(f"jump count must be >= 1, got {n}")
    return (3 * n + 1) // 2


def init_bernoulli(rng: RngStream, lo: int, hi: int, rho: float) -> np.ndarray:
    """Frozen Bernoulli(rho) occupancy for sites lo..hi inclusive.

    Values come from the stream's per-site hash: they depend only on
    (seed, stream_index, site), not on the order sites are materialised in.
    """
    if hi < lo:
        raise InvalidArgumentError(f"empty window [{lo}, {hi}]")
    if not (0.0 <= rho <= 1.0):
        raise InvalidArgumentError(f"rho={rho} outside [0, 1]")
    return bulk_site_occupancy(rng.site_key, lo, hi, rho)


def _serialize(clock: float, cells: np.ndarray, lo: int) -> str:
    bits = "".join("1" if c else "0" for c in cells)
    return f"t={clock:.17g} cells={bits} origin={-lo}"


class StaticField:
    """A frozen occupancy field on the window [lo, hi]."""

    def __init__(self, cells: np.ndarray, lo: int):
        cells = np.asarray(cells, dtype=np.uint8)
        if cells.ndim != 1 or cells.size == 0:
            raise InvalidArgumentError("cells must be a non-empty 1-d array")
        if not np.all((cells == 0) | (cells == 1)):
            raise InvalidArgumentError("cells must be 0/1 valued")
        if not (lo <= 0 <= lo + cells.size - 1):
            raise InvalidArgumentError("window must contain the origin")
        self.cells = cells
        self.lo = int(lo)
        self.hi = int(lo) + cells.size - 1

    @classmethod
    def build(cls, rng: RngStream, half_width: int, rho: float) -> "StaticField":
        return cls(init_bernoulli(rng, -half_width, half_width, rho), -half_width)

    def query(self, site: int, t: float = 0.0) -> int:
        if not (self.lo <= site <= self.hi):
            raise WindowOverflowError(f"site {site} outside window [{self.lo}, {self.hi}]")
        return int(self.cells[site - self.lo])

    def serialize(self) -> str:
        return _serialize(0.0, self.cells, self.lo)


def _isf_checks(delta: float, gamma: float, rho: float) -> None:
    if not (0.0 < rho <= 1.0):
        raise InvalidArgumentError(f"isf kernel requires 0 < rho <= 1, got {rho} "
                                   "(the 1 -> 0 flip rate is undefined at rho = 0)")
    if not (gamma >= 0.0):
        raise InvalidArgumentError(f"gamma={gamma} must be >= 0")
    if not (delta >= 0.0):
        raise InvalidArgumentError(f"time gap must be >= 0, got {delta}")


def _isf_stay(value: int, delta: float, gamma: float, rho: float) -> float:
    """Probability the two-state chain shows ``value`` again after ``delta``."""
    decay = math.exp(-(gamma / rho) * delta) if gamma > 0.0 else 1.0
    if value == OCCUPIED:
        return rho + (1.0 - rho) * decay
    return (1.0 - rho) + rho * decay


def isf_kernel(delta: float, gamma: float, rho: float) -> np.ndarray:
    """Two-state occupancy transition matrix over a time gap delta.

    Row i gives the distribution of the later state starting from state i.
    The chain flips 1 -> 0 at rate gamma*(1-rho)/rho and 0 -> 1 at rate
    gamma, which keeps Bernoulli(rho) invariant and relaxes at rate
    gamma/rho.
    """
    _isf_checks(delta, gamma, rho)
    p00 = _isf_stay(VACANT, delta, gamma, rho)
    p11 = _isf_stay(OCCUPIED, delta, gamma, rho)
    return np.array([[p00, 1.0 - p00], [1.0 - p11, p11]], dtype=np.float64)


class IsfCache:
    """Lazy independent spin flip environment.

    Stores, per touched site, the last observed (value, time) pair and
    propagates it through :func:`isf_kernel` on the next query.  A site
    touched for the first time takes its time-0 value from the stream's
    per-site hash and is then propagated to the query time, so the notional
    initial field is shared with the other environment kinds.
    """

    def __init__(self, rng: RngStream, rho: float, gamma: float,
                 lo: Optional[int] = None, hi: Optional[int] = None):
        if not (0.0 < rho <= 1.0):
            raise InvalidArgumentError(f"rho={rho} outside (0, 1]")
        if not (gamma >= 0.0):
            raise InvalidArgumentError(f"gamma={gamma} must be >= 0")
        if (lo is None) != (hi is None):
            raise InvalidArgumentError("window bounds must be given together")
        self.rng = rng
        self.rho = float(rho)
        self.gamma = float(gamma)
        self.lo = lo
        self.hi = hi
        self.clock = 0.0
        self._cache: dict[int, tuple[int, float]] = {}

    def query(self, site: int, t: float) -> int:
        if self.lo is not None and not (self.lo <= site <= self.hi):
            raise WindowOverflowError(f"site {site} outside window [{self.lo}, {self.hi}]")
        if t < 0.0:
            raise InvalidArgumentError(f"query time must be >= 0, got {t}")
        cached = self._cache.get(site)
        if cached is None:
            value, since = self.rng.site_occupied(site, self.rho), 0.0
        else:
            value, since = cached
            if t < since:
                raise ContractViolationError(
                    f"site {site} already observed at t={since}, cannot rewind to t={t}"
                )
        stay = _isf_stay(value, t - since, self.gamma, self.rho)
        value = value if self.rng.bernoulli(stay) else 1 - value
        self._cache[site] = (value, t)
        if t > self.clock:
            self.clock = t
        return value

    def serialize(self) -> str:
        """Materialise the whole window at the current clock, then format it.

        Filling the gaps consumes randomness from the stream; the snapshot is
        the environment at ``clock``, consistent with every earlier query.
        """
        if self.lo is None:
            raise ContractViolationError("serialization needs explicit window bounds")
        cells = np.array([self.query(s, self.clock) for s in range(self.lo, self.hi + 1)],
                         dtype=np.uint8)
        return _serialize(self.clock, cells, self.lo)


def isf_query(cache: IsfCache, site: int, t: float) -> int:
    return cache.query(site, t)


class SseState:
    """Simple symmetric exclusion on the window [lo, hi].

    Every particle carries two exponential clocks of rate gamma (one per
    direction); a ring fires, the particle attempts the move and is rejected
    when the target is occupied.  This is statistically identical to
    exchanging the endpoints of each lattice edge at rate gamma.  In
    ``torus`` mode the window wraps and the particle count is conserved; in
    ``resample`` mode the window has walls and each of the two outermost
    cells is redrawn from Bernoulli(rho) at rate gamma.
    """

    def __init__(self, cells: np.ndarray, lo: int, rho: float, gamma: float,
                 boundary: str, rng: RngStream):
        if boundary not in ("torus", "resample"):
            raise InvalidArgumentError(f"unknown boundary mode {boundary!r}")
        if not (gamma >= 0.0):
            raise InvalidArgumentError(f"gamma={gamma} must be >= 0")
        cells = np.asarray(cells, dtype=np.uint8)
        if cells.ndim != 1 or cells.size < 2:
            raise InvalidArgumentError("cells must hold at least two sites")
        self.cells = cells.copy()
        self.lo = int(lo)
        self.hi = int(lo) + cells.size - 1
        self.rho = float(rho)
        self.gamma = float(gamma)
        self.boundary = boundary
        self.rng = rng
        self.clock = 0.0
        self._positions = list(np.nonzero(self.cells)[0])

    @classmethod
    def build(cls, rng: RngStream, half_width: int, rho: float, gamma: float,
              boundary: str = "torus") -> "SseState":
        cells = init_bernoulli(rng, -half_width, half_width, rho)
        return cls(cells, -half_width, rho, gamma, boundary, rng)

    @property
    def particle_count(self) -> int:
        return len(self._positions)

    def advance(self, t_target: float) -> None:
        """Run the event chain forward to ``t_target``."""
        if t_target < self.clock:
            raise ContractViolationError(
                f"cannot advance backwards: clock={self.clock}, target={t_target}"
            )
        if self.gamma == 0.0:
            self.clock = t_target
            return
        width = self.cells.size
        resample = self.boundary == "resample"
        while True:
            k = len(self._positions)
            total = 2.0 * self.gamma * k + (2.0 * self.gamma if resample else 0.0)
            if total <= 0.0:
                self.clock = t_target
                return
            gap = self.rng.exponential(total)
            if self.clock + gap > t_target:
                self.clock = t_target
                return
            self.clock += gap
            slots = 2 * k + (2 if resample else 0)
            j = int(self.rng.uniform53() * slots)
            if j >= slots:  # u53 can be exactly 1.0
                j = slots - 1
            if j < 2 * k:
                idx = j >> 1
                x = self._positions[idx]
                y = x + 1 if (j & 1) else x - 1
                if resample:
                    if y < 0 or y >= width:
                        continue  # blocked at the wall
                else:
                    if y < 0:
                        y += width
                    elif y >= width:
                        y -= width
                if self.cells[y] == VACANT:
                    self.cells[x] = VACANT
                    self.cells[y] = OCCUPIED
                    self._positions[idx] = y
            else:
                cell = 0 if (j - 2 * k) == 0 else width - 1
                new = self.rng.bernoulli(self.rho)
                old = int(self.cells[cell])
                if new != old:
                    self.cells[cell] = new
                    if new == OCCUPIED:
                        self._positions.append(cell)
                    else:
                        self._positions.remove(cell)

    def query(self, site: int, t: float) -> int:
        if not (self.lo <= site <= self.hi):
            raise WindowOverflowError(f"site {site} outside window [{self.lo}, {self.hi}]")
        if t < self.clock:
            raise ContractViolationError(
                f"state already at t={self.clock}, cannot query the past t={t}"
            )
        self.advance(t)
        return int(self.cells[site - self.lo])

    def serialize(self) -> str:
        return _serialize(self.clock, self.cells, self.lo)


def sse_advance(state: SseState, t_target: float) -> None:
    state.advance(t_target)


def env_query(env, site: int, t: float) -> int:
    """Uniform occupancy query across environment kinds.

    Static fields are pure reads; spin flip caches propagate lazily; the
    exclusion state advances its event chain first.  A site outside the
    environment's window raises :class:`WindowOverflowError`, which a
    simulation run reports as an aborted replica.
    """
    if isinstance(env, (StaticField, IsfCache, SseState)):
        return env.query(site, t)
    raise InvalidArgumentError(f"unknown environment object {type(env).__name__}")
