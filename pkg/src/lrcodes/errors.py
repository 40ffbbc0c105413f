"""Exception hierarchy; each class maps to one CLI exit status."""

from __future__ import annotations


class LRCodesError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 4
    kind = "internal"


class SpecError(LRCodesError, ValueError):
    """Malformed or inconsistent input (group specs, subsets, configs)."""

    exit_code = 2
    kind = "config"


class CapExceededError(LRCodesError):
    """A configured size cap would be exceeded."""

    exit_code = 3
    kind = "cap"


class InvariantError(LRCodesError):
    """An internal consistency check failed."""

    exit_code = 4
    kind = "invariant"
