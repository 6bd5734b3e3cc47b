"""Exception hierarchy shared by all modules."""


class FHError(Exception):
    """Base class for every error raised by :mod:`fhtoeplitz`."""


class ParameterOutOfRange(FHError, ValueError):
    def __init__(self, field, constraint, value=None):
        self.field = field
        self.constraint = constraint
        self.value = value
        msg = f"{field} violates {constraint}"
        if value is not None:
            msg += f" (got {value!r})"
        super().__init__(msg)


class NotOnUnitCircle(FHError, ValueError):
    pass


class EvaluationAtSingularity(FHError, ValueError):
    pass


class GridTooCoarse(FHError, RuntimeError):
    pass


class LengthMismatch(FHError, ValueError):
    pass


class DimensionMismatch(FHError, ValueError):
    pass


class ConvergenceFailure(FHError, RuntimeError):
    def __init__(self, index, message=""):
        self.index = index
        super().__init__(message or f"eigensolver did not converge at index {index}")


class CertificationError(FHError, RuntimeError):
    """An eigendecomposition failed its residual or trace certificate."""


class SingularDesign(FHError, ValueError):
    pass


class SymbolVanishesOnCircle(FHError, ValueError):
    pass


class NonIntegerWinding(FHError, RuntimeError):
    pass


class UnwrapFailure(FHError, RuntimeError):
    pass


class TooCloseToBoundary(FHError, ValueError):
    pass


class WrongWinding(FHError, ValueError):
    pass


class ConfigError(FHError, ValueError):
    pass
