"""Shared exception types; the CLI maps these onto its exit-code contract."""


class KinemaError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(KinemaError):
    """Malformed input text (JSON/CSV syntax, wrong shapes, unknown keys)."""


class ValidationError(KinemaError):
    """Structurally well-formed input that violates a domain invariant."""


class CompileError(KinemaError):
    """Animation program rejected (unknown references, level violation)."""
