"""Error kinds shared across the package."""


class InvalidArgumentError(ValueError):
    """An argument violates a documented precondition."""


class ContractViolationError(RuntimeError):
    """A caller broke a usage contract (e.g. queried an environment in the past)."""


class WindowOverflowError(RuntimeError):
    """The walker left the simulated lattice window; the replica must abort."""
