"""Shared exception types."""


class UnstableConfigurationError(ValueError):
    """A configuration violated the stability precondition (some grain count >= degree)."""


class BudgetExceededError(RuntimeError):
    """A computation was refused or aborted because it exceeded a configured budget."""
