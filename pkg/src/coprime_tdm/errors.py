"""Exception hierarchy shared by every module of the package."""


class CoprimeTDMError(ValueError):
    """Base class for all errors raised by :mod:`coprime_tdm`."""


class InvalidParam(CoprimeTDMError):
    pass


class NotCoprime(CoprimeTDMError):
    pass


class GridMismatch(CoprimeTDMError):
    pass


class GridResolution(CoprimeTDMError):
    """A requested instant or shift does not land on an integer tick."""


class LagOutOfRange(CoprimeTDMError):
    pass


class SlotCollision(CoprimeTDMError):
    pass


class TooFast(CoprimeTDMError):
    """Neighbouring samples on one switch leave no room for a transition."""


class NoFeasibleShift(CoprimeTDMError):
    """Every candidate shift produces a coincident sample.

    The scored candidates are kept on ``candidates`` for diagnostics.
    """

    def __init__(self, message, candidates=()):
        super().__init__(message)
        self.candidates = tuple(candidates)


class UndefinedSpectrum(CoprimeTDMError):
    pass
