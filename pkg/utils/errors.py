"""
Domain exceptions shared by the numerical packages and the harness
"""


class ConfigError(ValueError):
    """An experiment configuration field is missing or out of range"""

    def __init__(self, field: str, reason: str):
        self.field = field
        self.reason = reason
        super().__init__(f"{field}: {reason}")


class NumericalInvariantError(RuntimeError):
    """A computed state broke an invariant the scheme guarantees (NaN, max principle, ...)"""

    def __init__(self, invariant: str, detail: str):
        self.invariant = invariant
        self.detail = detail
        super().__init__(f"{invariant} violated: {detail}")
