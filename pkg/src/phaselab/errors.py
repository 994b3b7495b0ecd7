"""Exception hierarchy shared by all phaselab modules."""


class PhaselabError(Exception):
    """Base class for every error raised by this package."""


class ConfigurationError(PhaselabError, ValueError):
    """Invalid parameters, malformed configuration, or mismatched layouts."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class AdmissibilityError(ConfigurationError):
    """A measurement arc violates the Dirichlet-eigenvalue disk criterion."""


class SingularityError(PhaselabError, ValueError):
    """Evaluation at (or numerically at) a source point."""


class DomainError(PhaselabError, ValueError):
    """Evaluation point outside the domain where a field is defined."""


class SolverError(PhaselabError, RuntimeError):
    """Linear system singular to working precision, or a failed solve."""

    def __init__(self, message, condition=None, source_index=None):
        super().__init__(message)
        self.condition = condition
        self.source_index = source_index


class TruncationError(PhaselabError, RuntimeError):
    """A modal series did not converge within its truncation order."""


class DegenerateDataError(PhaselabError, ValueError):
    """Phaseless data vanish where phase recovery needs them nonzero."""


class DataInconsistencyError(PhaselabError, ValueError):
    """Phaseless data violate an identity that exact data must satisfy."""


class BranchAmbiguityError(PhaselabError, RuntimeError):
    """Phase continuity cannot decide the sign of the phase difference."""

    def __init__(self, message, columns=()):
        super().__init__(message)
        self.columns = tuple(columns)
