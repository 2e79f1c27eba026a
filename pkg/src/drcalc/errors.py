"""Shared error types."""


class ResourceLimitError(RuntimeError):
    """A configured work budget (pair budget, unknown cap, ...) was exceeded."""


class StructuralError(ValueError):
    """Input data violates a structural requirement (gradings, degrees, ...)."""
