"""Exceptions raised by the library."""


class Error(Exception):
    """Base class of all library errors."""


class NumericalError(Error):
    """Computation failed to produce a trustworthy result."""


class IllConditionedError(NumericalError):
    pass


class AsymmetricMatrixError(NumericalError):
    pass


class NonFiniteError(NumericalError):
    pass


class NonPositiveSemidefiniteError(NumericalError):
    pass


class DegenerateSpectrumError(NumericalError):
    """Every eigenvalue vanishes, i.e. the quantity is locally constant."""


class ConvergenceError(NumericalError):
    pass


class DivergenceError(NumericalError):
    pass


class InsufficientSamplesError(NumericalError):
    pass


class ZeroVarianceError(NumericalError):
    pass


class WorkflowError(NumericalError):
    """Failure of a propagation stage, labelled with the stage name."""

    def __init__(self, stage: str, cause: Exception) -> None:
        super().__init__('{} stage failed: {}'.format(stage, cause))
        self.stage, self.cause = stage, cause


class FormatError(Error, ValueError):
    """Malformed binary or text input."""


class TruncatedFileError(FormatError):
    pass


class ConfigurationError(Error, ValueError):
    pass
