"""Exception types shared across the package."""


class StudioError(Exception):
    """Base class for all domain errors raised by this package."""


class InvalidGenome(StudioError):
    """A genome violates a structural invariant (cycles, bad node kinds, ...)."""

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class UnknownNode(StudioError):
    pass


class UnknownConnection(StudioError):
    pass


class DisabledConnection(StudioError):
    pass


class PaletteMismatch(StudioError):
    pass


class EmptySelection(StudioError):
    pass


class EmptyGraph(StudioError):
    pass


class TooLarge(StudioError):
    pass


class TooSmall(StudioError):
    pass


class Infeasible(StudioError):
    pass


class Saturated(StudioError):
    pass


class AllZeros(StudioError):
    pass


class DegenerateSample(StudioError):
    pass


class EmptyCorpus(StudioError):
    pass


class UnknownGenome(StudioError):
    pass


class UnknownImage(StudioError):
    pass


class InvalidSlot(StudioError):
    pass


class EmptyTitle(StudioError):
    pass


class StoreCorrupt(StudioError):
    pass
