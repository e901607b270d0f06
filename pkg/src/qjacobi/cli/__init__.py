"""Command-line interface: expression grammar, subcommands and verification suites."""

from .grammar import ParseError, parse

__all__ = ["ParseError", "parse"]
