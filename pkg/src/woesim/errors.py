"""Semantic exceptions shared across the package."""


class WoesimError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(WoesimError, ValueError):
    """A configuration violates its invariants (probabilities, names, shapes)."""


class SchemaError(WoesimError, ValueError):
    """An input file does not conform to the expected schema."""


class EnumerationLimitError(WoesimError):
    """Joint-cell enumeration would exceed the configured bound."""


class TargetUnreachable(WoesimError):
    """Config synthesis could not reach the requested strength target."""


class InsufficientEvents(WoesimError):
    """The planned event count floors to zero and clamping was not allowed."""


class DegeneratePlan(WoesimError):
    """A sampling plan without room for both classes (n1 >= n or n < 2)."""


class NoEvents(WoesimError):
    """A sample contains no event observations."""


class NoNonevents(WoesimError):
    """A sample contains no nonevent observations."""


class DegenerateDesign(WoesimError):
    """Responses contain a single class, so the estimator is undefined."""


class InsufficientPoints(WoesimError):
    """Too few (or non-distinct) points for a curve fit."""


class CurveFitError(WoesimError):
    """Every curve-fit start diverged."""


class EmptyCell(WoesimError):
    """A summary cell holds no valid iteration records."""
