"""
Exceptions raised by the CLL_R toolkit.

Every error carries a ``kind`` slug. Management commands report failures as a
single ``error:<kind>: <message>`` line and exit with status 2.
"""


class CllrError(Exception):
    """Base class for all toolkit errors."""

    kind = "error"


class ParseError(CllrError):
    """Input text does not match the term or formula grammar."""

    kind = "syntax"

    def __init__(self, message, line=None, column=None, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(expected))
        if line is not None:
            message = f"{message} at line {line}, column {column}"
        if self.expected:
            message = f"{message} (expected one of: {', '.join(self.expected)})"
        super().__init__(message)


class UnknownAction(CllrError):
    kind = "unknown-action"

    def __init__(self, action, alphabet):
        self.action = action
        self.alphabet = tuple(alphabet)
        super().__init__(f"Action '{action}' is not in the alphabet {{{', '.join(self.alphabet)}}}")


class UnguardedRecursion(CllrError):
    kind = "unguarded"

    def __init__(self, variable, binding):
        self.variable = variable
        self.binding = binding
        super().__init__(f"Variable {variable} occurs unguarded in the equation for {binding}")


class DuplicateBoundVariable(CllrError):
    kind = "duplicate-variable"

    def __init__(self, variable):
        self.variable = variable
        super().__init__(f"Variable {variable} is bound more than once in the same recursive specification")


class UnboundInitialVariable(CllrError):
    kind = "unbound-variable"

    def __init__(self, variable):
        self.variable = variable
        super().__init__(f"Initial variable {variable} has no equation")


class FreeVariableError(CllrError):
    """A process (closed term) was required but the term has free variables."""

    kind = "free-variable"

    def __init__(self, variables):
        self.variables = tuple(sorted(variables))
        super().__init__(f"Term is not closed; free variables: {', '.join(self.variables)}")


class StateBoundExceeded(CllrError):
    kind = "state-bound"

    def __init__(self, bound):
        self.bound = bound
        super().__init__(f"Exploration exceeded the bound of {bound} states")


class PreconditionNotStronglyGuarded(CllrError):
    kind = "precondition"

    def __init__(self, variable, mode):
        self.variable = variable
        self.mode = mode
        super().__init__(f"Variable {variable} must be strongly guarded in the equation body (found {mode.label})")


class EmptyDisjunction(CllrError):
    kind = "empty-fold"

    def __init__(self):
        super().__init__("General disjunction of an empty list is undefined")


class EmptyConjunction(CllrError):
    kind = "empty-fold"

    def __init__(self):
        super().__init__("General conjunction of an empty list is undefined")


class EmptyAlphabet(CllrError):
    kind = "alphabet"

    def __init__(self):
        super().__init__("Formulas need a nonempty alphabet")


class AlphabetTooLarge(CllrError):
    kind = "alphabet"

    def __init__(self, size, cap):
        self.size = size
        self.cap = cap
        super().__init__(f"Alphabet has {size} actions; encodings are limited to {cap} (ALPHABET_CAP)")


class InputFormatError(CllrError):
    """An input file or option does not follow the expected layout."""

    kind = "format"
