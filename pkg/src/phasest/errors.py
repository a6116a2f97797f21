"""Exception types shared across the package."""


class PhasestError(Exception):
    """Base class for domain errors raised by phasest."""


class ImpossibleOutcome(PhasestError):
    """A Bayesian update was requested for an outcome with probability <= 0."""

    def __init__(self, prob: float):
        super().__init__(f"outcome has probability {prob!r} <= 0 under the model")
        self.prob = prob


class EstimateUndefined(PhasestError):
    """The circular mean is undefined because the first harmonic vanishes."""


class DensityInvalid(PhasestError):
    """A density or probability computed from one left its valid range."""


class OrderBudgetExceeded(PhasestError):
    """An update would grow the harmonic order beyond the configured cap."""

    def __init__(self, order: int, cap: int):
        super().__init__(f"harmonic order {order} exceeds the cap {cap}")
        self.order = order
        self.cap = cap


class BudgetExhausted(PhasestError):
    """No measurement fits in the remaining time budget; the session is over."""


class UncertaintyUndefined(PhasestError):
    """Batch sharpness is <= 0, so the circular uncertainty is undefined."""

    def __init__(self, sharpness: float):
        super().__init__(
            f"mean sharpness {sharpness!r} <= 0: uncertainty undefined"
        )
        self.sharpness = sharpness
