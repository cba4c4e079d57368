"""Shared exception types."""


class NumericalInvariantError(RuntimeError):
    """A solver-side numerical invariant failed (inadequate grid, bad spectrum, ...)."""
