"""Exception hierarchy shared by every stage of the pipeline."""


class FrMagicError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(FrMagicError):
    """Malformed program or query text.

    Carries the 1-based ``line`` and ``column`` of the offending token and
    the tokens that would have been accepted there.
    """

    def __init__(self, message, line=0, column=0, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(expected)
        where = f"line {line}, column {column}: " if line else ""
        if self.expected:
            message = f"{message} (expected {', '.join(self.expected)})"
        super().__init__(where + message)


class ArityClash(FrMagicError):
    """The same predicate symbol is used with two different arities."""

    def __init__(self, predicate, first, second):
        self.predicate = predicate
        self.arities = (first, second)
        super().__init__(
            f"predicate {predicate!r} used with arity {first} and arity {second}"
        )


class ReservedPrefix(FrMagicError):
    """An input predicate already starts with the magic prefix."""

    def __init__(self, predicate):
        self.predicate = predicate
        super().__init__(f"predicate {predicate!r} uses the reserved prefix 'magic_'")


class NoOrdering(FrMagicError):
    """No component ordering satisfies the path conditions."""


class UnsafeRule(FrMagicError):
    """A rule has variables that positive-body matching cannot bind."""

    def __init__(self, rule, variables):
        self.rule = rule
        self.variables = tuple(variables)
        super().__init__(
            f"unsafe rule {rule}: variable(s) {', '.join(self.variables)} "
            "not bound by the positive body"
        )


class LimitExceeded(FrMagicError):
    """Grounding exceeded the configured rule or iteration budget."""

    def __init__(self, message, component=None, size=0, iterations=0):
        self.component = component
        self.size = size
        self.iterations = iterations
        super().__init__(message)


class CapReached(FrMagicError):
    """Stable-model enumeration stopped at the requested cap."""

    def __init__(self, models):
        self.models = list(models)
        super().__init__(f"stopped after {len(self.models)} stable model(s)")


class TooLarge(FrMagicError):
    """The brute-force oracle refuses programs with too many atoms."""


class PreconditionViolation(FrMagicError):
    """An operation was called with inputs outside its contract."""


class SpecInvalid(FrMagicError):
    """A Turing-machine description violates its structural invariants."""


class NotFrSafe(FrMagicError):
    """The query reaches a rule with a variable missing from a head atom."""

    def __init__(self, violations):
        self.violations = tuple(violations)
        lines = "\n".join(f"  {v}" for v in self.violations)
        super().__init__(f"query is not fr-safe:\n{lines}")


class NotStratified(FrMagicError):
    """A dependency cycle passes through negation."""

    def __init__(self, cycle):
        self.cycle = tuple(cycle)
        walk = ", ".join(f"{q} -{s}-> {h}" for q, h, s in self.cycle)
        super().__init__(f"program is not stratified: {walk}")
