"""Exception types raised by the library."""


class BilinSphereError(Exception):
    """Base class for all library errors."""


class NotSkew(BilinSphereError, ValueError):
    pass


class ZeroMatrix(BilinSphereError, ValueError):
    """The drift matrix vanishes, so no normal form with a > 0 exists."""


class BracketVanishes(BilinSphereError, ValueError):
    """[A, B] is (numerically) zero; controllability is not guaranteed."""


class DegenerateB3(BilinSphereError, ValueError):
    """b3 of the conjugated control matrix is zero; call ensure_b3_nonzero first."""


class DegenerateRotation(BilinSphereError, ValueError):
    pass


class LatitudeOutOfRange(BilinSphereError, ValueError):
    pass


class NotOnSphere(BilinSphereError, ValueError):
    pass


class NonFiniteState(BilinSphereError, ArithmeticError):
    pass


class InternalValidation(BilinSphereError, RuntimeError):
    """A constructed plan failed its own playback check. Indicates a bug."""
