"""Exception hierarchy shared by every tracenorm module."""


class TraceNormError(Exception):
    """Base class for all library errors."""


class NotPrime(TraceNormError, ValueError):
    pass


class TableLimitExceeded(TraceNormError, ValueError):
    pass


# Alias kept for the extension-builder naming.
LimitExceeded = TableLimitExceeded


class SearchExhausted(TraceNormError, RuntimeError):
    """No irreducible polynomial or primitive element found. Always a bug."""


class NotASubfieldCardinality(TraceNormError, ValueError):
    pass


class RootNotFound(TraceNormError, RuntimeError):
    pass


class NotInSubfieldImage(TraceNormError, RuntimeError):
    pass


class FieldSpecError(TraceNormError, ValueError):
    pass


class ZeroArgument(TraceNormError, ValueError):
    pass


class RoundingFailure(TraceNormError, ArithmeticError):
    pass


class NotDivisible(TraceNormError, ArithmeticError):
    pass


class ZeroU(TraceNormError, ValueError):
    pass


class BudgetExceeded(TraceNormError, RuntimeError):
    def __init__(self, needed: int, budget: int, what: str = "enumeration"):
        super().__init__(f"{what} needs {needed} evaluations, budget is {budget}")
        self.needed = needed
        self.budget = budget


class NotSpecialU(TraceNormError, ValueError):
    pass


class CharacteristicDividesDegree(TraceNormError, ValueError):
    pass


class BadHypothesis(TraceNormError, ValueError):
    """Inputs violate a theorem's hypotheses (e.g. a = 0 where a != 0 is required)."""
