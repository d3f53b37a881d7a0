"""Exception types shared across the package."""

from __future__ import annotations


class TreegamesError(Exception):
    """Base class for errors raised by this package."""


class GameValidationError(TreegamesError):
    """A game object violates a structural constraint.

    Carries the full list of violations so callers can report them all at
    once instead of fixing one at a time.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class NotATreeError(TreegamesError):
    """An operation that requires a tree was given a non-tree graph."""


class NoEquilibriumError(TreegamesError):
    """No equilibrium exists on the requested grid.

    With the guarantee-level grid this indicates an internal bug (existence
    is guaranteed); with a user-supplied coarser grid it is a legitimate
    outcome.
    """


class RationalPayoffsRequiredError(TreegamesError):
    """The exact engine was given a game with non-rational payoffs."""


class GameFileError(TreegamesError):
    """A game or equilibrium document is malformed."""


class SizeGuardExceeded(TreegamesError):
    """A brute-force enumeration would exceed its hard size limit."""
