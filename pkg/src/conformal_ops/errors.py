class ContractViolation(ValueError):
    """An argument broke a documented precondition (dimension, family, index range)."""


class ResonantWeight(ArithmeticError):
    """A recurrence denominator vanishes for the requested weights.

    ``factor`` is the human-readable factor that vanished, ``which`` is the
    weight it involves (``"lambda"`` or ``"mu"``) and ``step`` the recurrence
    index (r for the first system, t for the second) at which it is needed.
    """

    def __init__(self, factor: str, which: str, step: int, value):
        self.factor = factor
        self.which = which
        self.step = step
        self.value = value
        super().__init__(f"resonant weight {which}={value}: factor {factor} = 0")


class InconsistentSystem(ArithmeticError):
    """The overdetermined recurrence disagreed with itself."""
