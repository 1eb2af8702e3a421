"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A numeric argument is outside its valid domain (alpha <= 0, p not in [0,1], ...)."""


class DistributionError(ValueError):
    """A probability vector fails validation (negative mass, does not sum to 1, ...)."""


class InconsistentObservationError(ValueError):
    """An observed outcome has probability zero under the current belief."""


class FleetExhaustedError(RuntimeError):
    """No agent of any class is left to deploy; the mission is over."""


class ScenarioError(ValueError):
    """A scenario file or mission configuration is malformed."""
