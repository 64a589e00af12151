"""Exception types shared across the package.

Every failure a colorer can hit at run time is a typed exception carrying
enough context (vertex, edge, instance) for the harness to count it.
Silent miscoloring is never an option: if an algorithm cannot continue it
raises one of the ``ColoringAbort`` subclasses below.
"""


class StrandColorError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParams(StrandColorError, ValueError):
    pass


# -- stream model ---------------------------------------------------------

class StreamError(StrandColorError, ValueError):
    """Base class for stream parsing/validation failures."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ParseError(StreamError):
    pass


class SelfLoop(StreamError):
    pass


class DegreeExceeded(StreamError):
    pass


class ModeViolation(StreamError):
    pass


# -- randomness / codes ---------------------------------------------------

class PrefixOnly(StrandColorError):
    """A lazily sampled permutation was asked for something besides a prefix."""


class CodeSearchFailed(StrandColorError):
    pass


class OutOfRange(StrandColorError, IndexError):
    pass


# -- core structures ------------------------------------------------------

class ColorNotFree(StrandColorError):
    pass


class MissingEntry(StrandColorError, KeyError):
    pass


class UnderflowRef(StrandColorError):
    pass


# -- colorer aborts -------------------------------------------------------

class ColoringAbort(StrandColorError):
    """A colorer could not proceed. Subclasses mirror the algorithms' abort lines."""

    def __init__(self, message, vertex=None, edge=None):
        super().__init__(message)
        self.vertex = vertex
        self.edge = edge


class BlockOverflow(ColoringAbort):
    pass


class PointerOverflow(ColoringAbort):
    pass


class EmptyIntersection(ColoringAbort):
    pass


class IndexOverflow(ColoringAbort):
    pass


class NoSaturatingMatching(ColoringAbort):
    """Hall's condition failed; ``witness`` is a violating set of left items.

    Raised by the matching routine itself and, with ``vertex`` set to the
    arriving vertex, by the advice-driven vertex-arrival colorer.
    """

    def __init__(self, witness, message=None, vertex=None):
        self.witness = list(witness)
        super().__init__(message or f"no saturating matching; Hall witness {self.witness!r}",
                         vertex=vertex)


class Unroutable(ColoringAbort):
    pass


class NoFreeInstance(ColoringAbort):
    pass


class OverflowPaletteExhausted(ColoringAbort):
    pass


class LevelExhausted(ColoringAbort):
    pass


class PoolMemoryCap(ColoringAbort):
    pass


class PermutationExhausted(ColoringAbort):
    pass


class PaletteExhausted(ColoringAbort):
    """Greedy found no free color; only possible if the declared degree is wrong."""
