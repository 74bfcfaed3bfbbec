"""Exception types raised by the package."""


class DomainError(ValueError):
    """Input outside the domain where the model is defined.

    ``violations`` lists every violated bound, not just the first one found.
    """

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class UnsupportedInput(ValueError):
    """Input the closed-form routine does not cover (use the grid oracle)."""


class ResourceError(RuntimeError):
    """A simulation exceeded a configured resource cap."""
