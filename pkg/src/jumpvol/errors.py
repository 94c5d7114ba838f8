"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A parameter is outside its admissible range."""


class NumericalError(RuntimeError):
    """A numerical routine failed to reach the requested accuracy."""


class DiagnosticError(RuntimeError):
    """A diagnostic procedure has too little usable data to report."""
