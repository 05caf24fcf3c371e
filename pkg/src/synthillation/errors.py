"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class SynthillationError(Exception):
    """Base class for domain errors (the CLI maps these to exit status 1)."""


class RankError(SynthillationError):
    """A GF(2) matrix is singular or not of full row rank."""


class ParseError(SynthillationError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}" if line is not None else message)


class NotInD3Error(SynthillationError):
    """A phase function is not a level-3 diagonal gate."""


class WidthExceeded(SynthillationError):
    """Exact enumeration requested above its variable-count bound."""


class NonCliffordResidue(SynthillationError):
    pass


class NotQuasitransversal(SynthillationError):
    def __init__(self, monomial: tuple[int, ...], coeff: int):
        self.monomial = monomial
        self.coeff = coeff
        names = "*".join(f"x{i + 1}" for i in monomial) or "1"
        super().__init__(f"residual term {coeff}*{names} is not Clifford")


class SearchTooLarge(SynthillationError):
    pass


class CodeConstructionError(SynthillationError):
    pass


class NotHomogeneousCubic(CodeConstructionError):
    pass
