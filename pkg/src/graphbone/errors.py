"""Exception taxonomy shared by the library and the CLI.

Three failure families map onto distinct CLI exit codes: malformed input
text (ParseError), invalid configuration (ConfigError), and violated
internal contracts (ContractError).  Library code raises these directly;
only the CLI translates them into exit codes.
"""

from __future__ import annotations

__all__ = [
    "GraphboneError",
    "ParseError",
    "SchemaError",
    "ConfigError",
    "ContractError",
]


class GraphboneError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(GraphboneError):
    """Malformed input text: edge lists, metadata documents, bad ids."""

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        prefix = ""
        if path is not None:
            prefix += str(path)
        if line is not None:
            prefix += f":{line}"
        if prefix:
            message = f"{prefix}: {message}"
        super().__init__(message)


class SchemaError(ParseError):
    """Input that parses but references unknown names (e.g. vertex types)."""


class ConfigError(GraphboneError):
    """Invalid configuration value or unusable flag combination."""


class ContractError(GraphboneError):
    """An internal invariant failed; this signals a bug, not bad input."""
