"""Closed-form theory for the walk in a static Bernoulli environment.

These functions are the analytic reference the Monte Carlo side is validated
against: the asymptotic speed in a frozen field, the fully averaged (fast
mixing) speed, the trap-strength exponent with its regime classification, and
the desk-scale reliability heuristic for slowly updating environments.

Everything here is exact arithmetic on model parameters; nothing draws random
numbers.  Formulas are stated for the canonical half-square
``0.5 <= p < 1``, ``0.5 <= rho <= 1`` and extended to the rest of the unit
square through the two distributional symmetries of the model
(mirror both parameters, or mirror rho alone and negate displacement).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional

from .errors import InvalidArgumentError


class RegimeLabel(Enum):
    DIFFUSIVE = "diffusive"
    SUPER_DIFFUSIVE = "super-diffusive"
    SUB_DIFFUSIVE = "sub-diffusive"
    SINAI_RECURRENT = "sinai-recurrent"


#: Scaling orders attached to regime labels.
ORDER_SQRT = "sqrt(t)"
ORDER_INV_S = "t^(1/s)"
ORDER_T_OVER_LOG = "t/log(t)"
ORDER_T_S = "t^s"
ORDER_LOG_SQUARED = "(log t)^2"


@dataclass(frozen=True)
class Regime:
    """Asymptotic fluctuation regime of the static-environment walk."""

    label: RegimeLabel
    order: str
    s: Optional[float]


class Pow2(NamedTuple):
    """A positive value stored as mantissa * 2**exp2 with mantissa in [1, 2).

    Keeps quantities like trap crossing times finite in log space far beyond
    float range.
    """

    mantissa: float
    exp2: int

    def __float__(self) -> float:
        if self.exp2 > 1023:
            return math.inf
        return math.ldexp(self.mantissa, self.exp2)

    @property
    def log2(self) -> float:
        return math.log2(self.mantissa) + self.exp2

    @classmethod
    def from_log2(cls, lg: float) -> "Pow2":
        e = math.floor(lg)
        return cls(2.0 ** (lg - e), int(e))

    @classmethod
    def from_float(cls, x: float) -> "Pow2":
        if x <= 0 or not math.isfinite(x):
            raise InvalidArgumentError(f"Pow2 requires a positive finite value, got {x}")
        m, e = math.frexp(x)  # m in [0.5, 1)
        return cls(m * 2.0, e - 1)


def _check_p_rho(p: float, rho: float) -> None:
    if not (0.0 < p < 1.0):
        raise InvalidArgumentError(f"p={p} outside (0, 1)")
    if not (0.0 <= rho <= 1.0):
        raise InvalidArgumentError(f"rho={rho} outside [0, 1]")


def static_speed(p: float, rho: float) -> float:
    """Asymptotic speed of the walk in a frozen Bernoulli(rho) field.

    Zero throughout the trapping band ``rho <= p`` (canonical parameters);
    ballistic above it.  Parameters outside the canonical half-square are
    folded in through the model symmetries, so the returned speed can be
    negative there.
    """
    _check_p_rho(p, rho)
    if p < 0.5:
        # mirror both parameters: X(p, rho) = X(1-p, 1-rho) in law
        return static_speed(1.0 - p, 1.0 - rho)
    if rho < 0.5:
        # mirror rho alone: X(p, rho) = -X(p, 1-rho) in law
        return -static_speed(p, 1.0 - rho)
    if rho <= p:
        return 0.0
    return (2.0 * p - 1.0) * (rho - p) / (rho * (1.0 - p) + p * (1.0 - rho))


def averaged_speed(p: float, rho: float) -> float:
    """Speed in the fully averaged medium (environment refreshed every jump)."""
    _check_p_rho(p, rho)
    return (2.0 * rho - 1.0) * (2.0 * p - 1.0)


def kks_exponent(p: float, rho: float) -> float:
    """Trap-strength exponent s = log((1-rho)/rho) / log((1-p)/p).

    Defined for p and rho both strictly above 1/2.  Returns +inf at rho = 1
    (no vacant sites, no traps).
    """
    _check_p_rho(p, rho)
    if p <= 0.5 or rho <= 0.5:
        raise InvalidArgumentError(
            f"kks_exponent requires p > 1/2 and rho > 1/2, got ({p}, {rho})"
        )
    if rho == 1.0:
        return math.inf
    return math.log((1.0 - rho) / rho) / math.log((1.0 - p) / p)


_S_TOL = 1e-12


def classify_regime(p: float, rho: float) -> Regime:
    """Fluctuation regime of the static-environment walk at (p, rho).

    The rho = 1/2 line is the recurrent (log t)^2 case.  p = 1/2 makes the
    environment irrelevant (every site steps +-1 with probability 1/2), so
    the walk is plain diffusive.  Elsewhere the exponent s decides: s > 2
    diffusive; s = 2 is grouped with the anomalous band below it; s in (1, 2]
    super-diffusive of order t^(1/s); s = 1 super-diffusive of order
    t/log(t); s in (1/2, 1) super-diffusive of order t^s; s = 1/2 diffusive;
    s in (0, 1/2) sub-diffusive of order t^s.
    """
    _check_p_rho(p, rho)
    if p < 0.5:
        p, rho = 1.0 - p, 1.0 - rho
    if rho < 0.5:
        rho = 1.0 - rho
    if rho == 0.5:
        return Regime(RegimeLabel.SINAI_RECURRENT, ORDER_LOG_SQUARED, None)
    if p == 0.5:
        return Regime(RegimeLabel.DIFFUSIVE, ORDER_SQRT, None)
    s = kks_exponent(p, rho)
    if s > 2.0 + _S_TOL:
        return Regime(RegimeLabel.DIFFUSIVE, ORDER_SQRT, s)
    if s > 1.0 + _S_TOL:
        return Regime(RegimeLabel.SUPER_DIFFUSIVE, ORDER_INV_S, s)
    if s >= 1.0 - _S_TOL:
        return Regime(RegimeLabel.SUPER_DIFFUSIVE, ORDER_T_OVER_LOG, s)
    if s > 0.5 + _S_TOL:
        return Regime(RegimeLabel.SUPER_DIFFUSIVE, ORDER_T_S, s)
    if s >= 0.5 - _S_TOL:
        return Regime(RegimeLabel.DIFFUSIVE, ORDER_SQRT, s)
    return Regime(RegimeLabel.SUB_DIFFUSIVE, ORDER_T_S, s)


class LeafBoundaries(NamedTuple):
    """Densities where the exponent s crosses 2 (upper) and 1/2 (lower)."""

    rho_s2: float
    rho_s_half: float


def leaf_boundaries(p: float) -> LeafBoundaries:
    """Critical densities of the regime leaf at bias p.

    ``rho_s2`` solves s(p, rho) = 2 (diffusive boundary) and ``rho_s_half``
    solves s(p, rho) = 1/2 (lower edge of the zero-speed anomalous band).
    """
    if not (0.5 <= p < 1.0):
        raise InvalidArgumentError(f"leaf_boundaries requires 0.5 <= p < 1, got {p}")
    q = 1.0 - p
    rho_s2 = p * p / (p * p + q * q)
    sp = math.sqrt(p)
    sq = math.sqrt(q)
    rho_s_half = sp / (sp + sq)
    return LeafBoundaries(rho_s2, rho_s_half)


def trap_crossing_expectation(p: float, L: int) -> Pow2:
    """Expected crossing time of a vacant trap of length L, as a Pow2.

    Equals the geometric sum 1 + r + ... + r**(L-1) with r = p/(1-p);
    computed in log space once the direct evaluation would overflow.
    """
    if not (0.5 <= p < 1.0):
        raise InvalidArgumentError(f"trap_crossing_expectation requires 0.5 <= p < 1, got {p}")
    if L < 1:
        raise InvalidArgumentError(f"trap length must be >= 1, got {L}")
    if p == 0.5:
        return Pow2.from_float(float(L))
    r = p / (1.0 - p)
    log2_r = math.log2(r)
    if L * log2_r < 960.0:
        value = (r ** L - 1.0) / (r - 1.0)
        return Pow2.from_float(value)
    # log2((r^L - 1)/(r - 1)) with the -1 folded in via log1p; the correction
    # underflows to zero for truly huge traps, which is exactly right.
    corr = math.log1p(-(r ** (-L))) / math.log(2.0) if L * log2_r < 2000.0 else 0.0
    lg = L * log2_r + corr - math.log2(r - 1.0)
    return Pow2.from_log2(lg)


class ReliableSteps(NamedTuple):
    """Desk-scale reliability bound for a slowly updating environment.

    ``l_star`` is the shortest trap the environment dissolves faster than the
    walk crosses it; ``log2_nbar`` is the log2 of the number of jumps after
    which such traps are typically encountered, i.e. the horizon beyond which
    a finite-gamma run no longer mimics the static law.  ``saturated`` marks
    that no trap length up to the cap satisfied the dissolution criterion.
    """

    l_star: Optional[int]
    log2_nbar: Optional[float]
    saturated: bool


def reliable_steps(p: float, rho: float, gamma: float, cap: int = 10_000) -> ReliableSteps:
    """Smallest environment-limited trap length and the matching jump horizon.

    Scans trap lengths L = 1, 2, ... for the first with expected crossing
    time at least (L/gamma)**2, the square of the environment's refresh time
    across the trap.  The horizon is nbar = ceil(L* * (1-rho)**(-L*)), the
    waiting time in jumps until a trap of that length is met, reported as
    log2.
    """
    if not (0.5 < p < 1.0):
        raise InvalidArgumentError(f"reliable_steps requires 0.5 < p < 1, got {p}")
    if not (0.0 <= rho <= 1.0):
        raise InvalidArgumentError(f"rho={rho} outside [0, 1]")
    if not (gamma > 0.0):
        raise InvalidArgumentError(f"reliable_steps requires gamma > 0, got {gamma}")
    if cap < 1:
        raise InvalidArgumentError(f"cap must be >= 1, got {cap}")
    l_star = None
    for L in range(1, cap + 1):
        lhs = trap_crossing_expectation(p, L).log2
        rhs = 2.0 * math.log2(L / gamma) if L / gamma > 0 else -math.inf
        if lhs >= rhs:
            l_star = L
            break
    if l_star is None:
        return ReliableSteps(None, None, True)
    if rho >= 1.0:
        return ReliableSteps(l_star, math.inf, False)
    log2_wait = math.log2(float(l_star)) + l_star * (-math.log2(1.0 - rho))
    if log2_wait < 52.0:
        nbar = math.ceil(l_star * (1.0 - rho) ** (-l_star))
        return ReliableSteps(l_star, math.log2(nbar), False)
    return ReliableSteps(l_star, log2_wait, False)
