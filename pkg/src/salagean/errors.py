class SalageanError(Exception):
    """Base class for errors raised by this package."""


class NonUnitConstantTerm(SalageanError, ValueError):
    """A real power was requested of a series whose constant term is not 1."""


class InversionDivergence(SalageanError, ArithmeticError):
    """The reciprocal ``1 / (1 + z*phi)`` does not behave like a bounded series."""


class BadMeasure(SalageanError, ValueError):
    """Atom weights are negative or do not sum to one."""


class DomainError(SalageanError, ValueError):
    """An argument lies outside the domain where a formula is defined."""
