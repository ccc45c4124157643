"""Exceptions shared across modules."""


class Inconclusive(RuntimeError):
    """A bounded search ran out of budget; this is not a negative answer."""
