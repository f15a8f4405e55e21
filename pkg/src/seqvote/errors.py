"""Exception types shared across the package."""

from __future__ import annotations


class InvalidInstanceError(ValueError):
    """An operation was applied to a malformed or out-of-contract instance."""

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class InstanceParseError(ValueError):
    """An instance document does not match the JSON schema."""


class FormulaSyntaxError(ValueError):
    """A formula string does not match the grammar."""


class ResourceLimitError(RuntimeError):
    """A search exceeded its configured node budget."""


class NoFastAlgorithmError(ValueError):
    """No fast decision procedure covers the requested rule and variant."""
