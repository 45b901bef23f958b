"""
errors.py
---------
Exception hierarchy shared by the algebra core, the CLI and the API server.
Every exception carries the concrete witness that triggered it.
"""


class PpCalcError(Exception):
    """Base class for every error raised on bad input or failed validation."""
    pass


class AxiomViolation(PpCalcError):
    """A ringoid table breaks associativity, bilinearity or the identity laws."""

    def __init__(self, kind: str, witness: tuple, detail: str = ""):
        self.kind = kind
        self.witness = witness
        message = f"{kind} fails on {witness}"
        if detail:
            message += f": {detail}"
        super().__init__(message)


class FunctorialityViolation(PpCalcError):
    def __init__(self, witness: tuple, detail: str = ""):
        self.witness = witness
        super().__init__(f"functoriality fails on {witness}" + (f": {detail}" if detail else ""))


class NaturalityViolation(PpCalcError):
    def __init__(self, witness: tuple):
        self.witness = witness
        super().__init__(f"components are not natural at {witness}")


class DomainMismatch(PpCalcError):
    pass


class SortMismatch(PpCalcError):
    pass


class SideMismatch(PpCalcError):
    pass


class ArityError(PpCalcError):
    pass


class ScopeError(PpCalcError):
    """A ring-only operation was called on a multi-object ringoid."""
    pass


class NotAPair(PpCalcError):
    """ψ ≤ φ fails; `counterexample` is the free realization (module, tuple) of ψ."""

    def __init__(self, counterexample, message: str = "bottom formula does not imply top formula"):
        self.counterexample = counterexample
        super().__init__(message)


class Rejected(PpCalcError):
    """A pp formula does not define a morphism of pairs."""

    def __init__(self, condition: int, counterexample, message: str = ""):
        self.condition = condition
        self.counterexample = counterexample
        super().__init__(message or f"morphism condition ({condition}) fails")


class NotMono(PpCalcError):
    pass


class NotEpi(PpCalcError):
    pass


class OracleDisagreement(PpCalcError):
    """Two independent exact oracles returned different answers. Always a defect."""
    pass


class DslSyntaxError(PpCalcError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class DocumentError(PpCalcError):
    pass


class UnknownFixture(PpCalcError):
    pass
