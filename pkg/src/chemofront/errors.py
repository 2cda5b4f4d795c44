"""Exception hierarchy.

``NumericalFailure`` subclasses are the ones the command line maps to exit
status 2; everything else deriving from ``ChemofrontError`` is a usage or
input problem.
"""


class ChemofrontError(Exception):
    pass


class ParameterError(ChemofrontError, ValueError):
    pass


class ConfigError(ChemofrontError, ValueError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class DomainError(ChemofrontError, ValueError):
    pass


class GridMismatchError(ChemofrontError, ValueError):
    pass


class NumericalFailure(ChemofrontError):
    pass


class NoPlateauError(NumericalFailure):
    """Raised when the plateau condition fails.

    ``bound`` is ``"lower"`` when the colony dies out everywhere and
    ``"upper"`` when the plateau would not fit inside the dish.
    """

    def __init__(self, message, bound=None):
        self.bound = bound
        super().__init__(message)


class NoEquilibriumError(NumericalFailure):
    pass


class ComplexRootsError(NumericalFailure):
    pass


class BlowUpError(NumericalFailure):
    def __init__(self, message, step=None, node=None, manifest=None):
        self.step = step
        self.node = node
        self.manifest = manifest
        super().__init__(message)


class WindowError(NumericalFailure):
    pass


class NoContourError(NumericalFailure):
    pass


class ReportError(ChemofrontError):
    pass
