"""Exception hierarchy shared by every module of the package."""


class VesError(ValueError):
    """Base class for all input and numerical errors raised by ``ves``."""


class NonFinite(VesError):
    def __init__(self, name, value):
        self.name = name
        self.value = value
        super().__init__(f"{name}: must be finite (got {value!r})")


class ConstraintViolation(VesError):
    """A parameter falls outside its admissible domain.

    ``name`` is the parameter (or combination, e.g. ``theta+omega*psi``),
    ``requirement`` a short human readable rule such as ``"in (0,1)"``.
    """

    def __init__(self, name, value, requirement):
        self.name = name
        self.value = value
        self.requirement = requirement
        super().__init__(f"{name}: {requirement} (got {value!r})")


class NegativeInput(VesError):
    pass


class NonPositiveInput(VesError):
    pass


class NonPositiveLabor(VesError):
    pass


class NoTurningPoint(VesError):
    pass


class GridError(VesError):
    pass


class ConfigError(VesError):
    pass


class NumericalError(VesError):
    pass


class NonPositiveObservation(VesError):
    pass


class InsufficientData(VesError):
    pass


class NoConvergence(VesError):
    """Raised when the fit budget runs out; ``result`` holds the best point found."""

    def __init__(self, message, result):
        self.result = result
        super().__init__(message)


class ParseError(VesError):
    """Malformed parameter or data file; carries the 1-based line number."""

    def __init__(self, message, line=None, key=None):
        self.line = line
        self.key = key
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")
