"""Exception hierarchy shared by every module of the lab."""


class MMLError(Exception):
    """Base class for all errors raised by this package."""


class SizingError(MMLError, ValueError):
    """A table or grid was requested with an unusable size."""


class DomainError(MMLError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class PoleError(MMLError, ZeroDivisionError):
    """Evaluation was requested at a pole (or at a zero of a denominator)."""


class BracketError(MMLError, ValueError):
    """A root-finding bracket does not contain a sign change."""


class ConfigurationError(MMLError, ValueError):
    """A numerical configuration cannot reach its own error target."""


class GuardrailError(MMLError, RuntimeError):
    """A desk-scale guardrail refused an oversized experiment."""
