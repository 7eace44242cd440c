# app/core/errors.py
from typing import Any, Optional, Tuple


EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class AlgebraError(Exception):
    """Base error for the operator engine"""

    exit_code = EXIT_FAILED

    def __init__(self, detail: str = "Operator engine error"):
        super().__init__(detail)
        self.detail = detail


class ParseError(AlgebraError):
    """Malformed operator, polynomial or parameter text"""

    exit_code = EXIT_USAGE

    def __init__(self, detail: str, line: int = 1, column: int = 1):
        super().__init__(f"{detail} (line {line}, column {column})")
        self.line = line
        self.column = column


class NotInvariantError(AlgebraError):
    """An operator image leaves the finite-dimensional flag space"""

    def __init__(self, witness: Tuple[int, int], image: Optional[Tuple[int, int]] = None,
                 detail: Optional[str] = None):
        super().__init__(detail or f"Monomial {witness} is mapped outside the space (to {image})")
        self.witness = witness
        self.image = image


class NotTriangularError(AlgebraError):
    """A matrix has a nonzero entry below the diagonal in grading order"""

    def __init__(self, position: Tuple[int, int], detail: Optional[str] = None):
        super().__init__(detail or f"Nonzero grading-raising entry at {position}")
        self.position = position


class DegenerateChainError(AlgebraError):
    """Triangular back-substitution hit a repeated diagonal value with a nonzero chain"""

    def __init__(self, index: int, value: Any, detail: Optional[str] = None):
        super().__init__(
            detail or f"Eigenvalue {value} at basis index {index} has a generalized eigenvector"
        )
        self.index = index
        self.value = value


class UnknownModelError(AlgebraError):
    """Requested operator name is not in the registry"""

    exit_code = EXIT_USAGE

    def __init__(self, name: str):
        super().__init__(f"Unknown model operator: {name}")
        self.name = name


class SizeGuardError(AlgebraError):
    """Envelope basis is larger than the configured guard"""

    def __init__(self, size: int, guard: int):
        super().__init__(f"Envelope basis of size {size} exceeds the guard {guard}; use --force")
        self.size = size
        self.guard = guard


class UsageError(AlgebraError):
    """Invalid command-line usage"""

    exit_code = EXIT_USAGE
