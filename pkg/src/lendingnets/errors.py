"""Exception types shared across the toolkit."""

from __future__ import annotations


class ToolkitError(Exception):
    """Base class for every error raised by this package."""


class NetStructureError(ToolkitError):
    """A net value violates a structural constraint (bad arc, unknown id, ...)."""


class FiringError(ToolkitError):
    """A transition was fired at a marking where it is not enabled."""

    def __init__(self, transition: str, place: str, message: str | None = None):
        self.transition = transition
        self.place = place
        if message is None:
            message = (
                f"transition {transition!r} is not enabled: place {place!r} "
                "has no token and does not admit lending"
            )
        super().__init__(message)


class CompositionError(ToolkitError):
    """Two nets cannot be composed; lists the violated compatibility conditions."""

    def __init__(self, problems):
        self.problems = tuple(problems)
        super().__init__("incompatible nets: " + "; ".join(self.problems))


class ContractError(ToolkitError):
    """Invalid contract value, or contracts that cannot be composed."""


class DocumentError(ToolkitError):
    """Syntax or semantic error in a textual net or contract document."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class IncompleteExplorationError(ToolkitError):
    """The requested answer needs a complete reachability graph."""
