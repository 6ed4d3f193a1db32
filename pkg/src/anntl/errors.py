"""Exception hierarchy shared by all modules.

Every domain error carries a short ``code`` naming the violated condition so the
command line can report it without parsing messages.
"""

from __future__ import annotations


class AnnularError(Exception):
    """Base class for domain errors (command line exit code 1)."""

    code = "AnnularError"

    def __init__(self, message: str = "", position: int | None = None):
        super().__init__(message or self.code)
        self.message = message or self.code
        self.position = position

    def __str__(self) -> str:
        where = f" at position {self.position}" if self.position is not None else ""
        return f"{self.code}{where}: {self.message}"


def _make(name: str, doc: str) -> type[AnnularError]:
    return type(name, (AnnularError,), {"code": name, "__doc__": doc})


NotPerfectMatching = _make("NotPerfectMatching", "Pairs do not cover every boundary point exactly once.")
CrossingStrings = _make("CrossingStrings", "Strings cannot be drawn without crossings.")
ParityViolation = _make("ParityViolation", "A string joins points of incompatible shading.")
LoopsWithThroughStrings = _make(
    "LoopsWithThroughStrings", "Non-contractible loops cannot coexist with through strings."
)
ShadingMismatch = _make("ShadingMismatch", "Inner and outer core shadings disagree.")
ObjectMismatch = _make("ObjectMismatch", "Source and target objects do not match.")
IndexOutOfRange = _make("IndexOutOfRange", "Generator index is out of range for the object.")
WrongObjectForSign = _make("WrongObjectForSign", "Generator is not defined at this signed zero object.")
UnrealizableIndexSet = _make("UnrealizableIndexSet", "Index set cannot be realized by nested caps.")
NotTypeI = _make("NotTypeI", "Tangle or word is not of Type I.")
PreconditionViolated = _make("PreconditionViolated", "Input does not satisfy the algorithm's precondition.")
WordSyntaxError = _make("SyntaxError", "Word text does not match the grammar.")
NotAComplex = _make("NotAComplex", "Consecutive boundary maps do not compose to zero.")
