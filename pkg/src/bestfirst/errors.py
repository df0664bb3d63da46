class BestFirstError(Exception):
    pass


class ParseError(BestFirstError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class GrammarError(BestFirstError):
    """Raised when a grammar fails validation; carries the violation list."""

    def __init__(self, violations):
        super().__init__("; ".join(str(v) for v in violations))
        self.violations = list(violations)


class Unproductive(BestFirstError):
    def __init__(self, names):
        self.names = list(names)
        super().__init__("unproductive non-terminal(s): " + ", ".join(self.names))


class InvalidK(BestFirstError):
    pass


class InvalidProbability(BestFirstError):
    pass


class CostOverflow(BestFirstError):
    pass


class Exhausted(BestFirstError):
    """The enumerated language (or sub-language) has no further programs."""


class EmptyQueue(BestFirstError):
    pass


class MonotonicityViolation(BestFirstError):
    pass


class MemoryCapExceeded(BestFirstError):
    pass


class LevelBeyondBound(BestFirstError):
    pass


class UnknownGrammar(BestFirstError):
    pass


class UnknownAlgorithm(BestFirstError):
    pass


class InvariantViolation(BestFirstError):
    pass
