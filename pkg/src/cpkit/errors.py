"""Exception and warning types.

Errors split into two families so the command line can map them to exit
codes: :class:`DataError` for bad input (exit 3) and :class:`NumericalError`
for quantities that are undefined on the given input (exit 4).
"""


class CPKitError(Exception):
    pass


class DataError(CPKitError, ValueError):
    pass


class NumericalError(CPKitError, ArithmeticError):
    pass


class ParseError(DataError):
    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class NotAnEdge(DataError):
    pass


class OrderingViolation(DataError):
    pass


class InvalidProbability(DataError):
    pass


class InvalidKernel(DataError):
    pass


class SymmetricInit(DataError):
    pass


class EmptyGraph(DataError):
    pass


class InsufficientSamples(DataError):
    pass


class UnreachablePair(NumericalError):
    pass


class DegenerateVariance(NumericalError):
    pass


class DegenerateSplit(NumericalError):
    pass


class DegenerateEnsemble(NumericalError):
    pass


class LogOfZero(NumericalError):
    pass


class CPKitWarning(UserWarning):
    pass


class ZeroDegreeSetWarning(CPKitWarning):
    pass


class ConstantDegreesWarning(CPKitWarning):
    pass


class DegenerateEnsembleWarning(CPKitWarning):
    pass


class InputCleanupWarning(CPKitWarning):
    """Duplicate edges or self-loops were dropped while building a graph."""
