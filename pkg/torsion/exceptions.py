from typing import Optional, Tuple


class TorsionError(Exception):
    """Root of all pipeline errors; optionally tagged with a (j, k) cell."""

    def __init__(self, message: str, cell: Optional[Tuple[Optional[int], int]] = None):
        self.message = message
        self.cell = cell
        if cell is not None:
            j, k = cell
            message = f"{message} (k={k})" if j is None else f"{message} (j={j}, k={k})"
        super().__init__(message)

    def with_cell(self, j: Optional[int], k: int) -> "TorsionError":
        return type(self)(self.message, cell=(j, k))


class InvalidSpec(TorsionError):
    pass


class NotCoprime(InvalidSpec):
    pass


class UnknownEdge(TorsionError):
    pass


class DegenerateParams(TorsionError):
    pass


class DegenerateTet(TorsionError):
    pass


class NotRealizable(TorsionError):
    pass


class ZeroLengthEdge(TorsionError):
    pass


class DegenerateK(TorsionError):
    pass


class BlockStructureViolation(TorsionError):
    pass


class RankDeficient(TorsionError):
    pass


class SingularMinor(TorsionError):
    pass
