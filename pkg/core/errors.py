"""Exception hierarchy shared by the core modules and the command line."""

from __future__ import annotations


class EndTraceError(ValueError):
    """Base class for every domain error raised by endtrace."""


class UnknownFamilyError(EndTraceError):
    pass


class FamilyParameterError(EndTraceError):
    pass


class GeneratorError(EndTraceError):
    """A generator broke local finiteness, monotonicity or distance correctness."""


class HorizonError(EndTraceError):
    pass


class LevelError(EndTraceError):
    pass


class LoopSpecError(EndTraceError):
    pass


class DisconnectedGraphError(EndTraceError):
    pass


class ContainmentError(EndTraceError):
    pass


class PathError(EndTraceError):
    pass


class AlphabetMismatchError(EndTraceError):
    pass


class HomomorphismError(EndTraceError):
    pass


class PairingError(EndTraceError):
    pass


class PairingCapExceeded(EndTraceError):
    """Raised instead of answering when a word has more pairings than the cap."""

    def __init__(self, count: int, cap: int):
        super().__init__(f"Word admits {count} pairings, above the configured cap of {cap}.")
        self.count = count
        self.cap = cap


class MatrixError(EndTraceError):
    pass
