"""Model parameters for the walker and its environment."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import InvalidArgumentError

ENV_KINDS = ("static", "isf", "sse")
BOUNDARY_MODES = ("torus", "resample")


@dataclass(frozen=True)
class ModelParams:
    """Parameters of the walk in a random environment.

    Attributes
    ----------
    p : float
        Probability of stepping right from an occupied site (and of stepping
        left from a vacant one).  Any value in (0, 1) is allowed; the regime
        classification helpers assume the canonical convention ``p > 0.5``
        and everything else is reachable from it by the model symmetries.
    rho : float
        Site occupation density in [0, 1].
    gamma : float
        Environment update rate.  Must be 0 for the static environment and
        is normalised to 0.0 there.
    env : str
        One of ``static``, ``isf`` (independent spin flip) or ``sse``
        (simple symmetric exclusion).
    boundary : str
        Boundary mode for the exclusion environment: ``torus`` conserves the
        particle count, ``resample`` redraws the two outermost cells from
        Bernoulli(rho) at rate gamma each.  Ignored for other environments.
    walker_rate : float
        Total jump rate of the walker (default 1.0).
    """

    p: float
    rho: float
    gamma: float = 0.0
    env: str = "static"
    boundary: str = "torus"
    walker_rate: float = 1.0

    def __post_init__(self) -> None:
        if self.env not in ENV_KINDS:
            raise InvalidArgumentError(f"unknown environment kind {self.env!r}")
        if self.boundary not in BOUNDARY_MODES:
            raise InvalidArgumentError(f"unknown boundary mode {self.boundary!r}")
        if not (0.0 < self.p < 1.0):
            raise InvalidArgumentError(f"p={self.p} outside (0, 1)")
        if not (0.0 <= self.rho <= 1.0):
            raise InvalidArgumentError(f"rho={self.rho} outside [0, 1]")
        if not (self.gamma >= 0.0):
            raise InvalidArgumentError(f"gamma={self.gamma} must be >= 0")
        if not (self.walker_rate > 0.0):
            raise InvalidArgumentError(f"walker_rate={self.walker_rate} must be > 0")
        if self.env == "static" and self.gamma != 0.0:
            # A frozen field has no update rate; record it as zero.
            object.__setattr__(self, "gamma", 0.0)
        if self.env != "static" and self.gamma == 0.0:
            # gamma = 0 freezes the dynamic environments; allowed, but the
            # static kind is the canonical way to express that.
            pass

    @property
    def in_canonical_domain(self) -> bool:
        """True when p lies in the canonical half-interval [0.5, 1)."""
        return 0.5 <= self.p < 1.0

    def with_(self, **changes) -> "ModelParams":
        return replace(self, **changes)


def require_canonical(params: ModelParams) -> ModelParams:
    """Reject parameters outside the canonical p half-interval.

    The regime classification formulas are stated for ``0.5 <= p < 1``;
    walks with p < 0.5 are reachable through the model symmetries.
    """
    if not params.in_canonical_domain:
        raise InvalidArgumentError(
            f"p={params.p} outside the canonical half-interval [0.5, 1)"
        )
    return params
