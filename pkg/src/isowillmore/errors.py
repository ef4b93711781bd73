"""Exception types raised across the package."""


class IsoWillmoreError(Exception):
    """Base class for all package errors."""


class PoleAt(IsoWillmoreError, ZeroDivisionError):
    def __init__(self, z):
        super().__init__(f"pole at z={z!r}")
        self.z = z


class InvalidPotential(IsoWillmoreError, ValueError):
    pass


class InvalidElement(IsoWillmoreError, ValueError):
    pass


class NonUnitLambda(IsoWillmoreError, ValueError):
    pass


class BoundaryPoint(IsoWillmoreError, ArithmeticError):
    """The hyperbolic divisor vanishes: the point lies on the ideal boundary."""

    def __init__(self, z=None, msg="point lies on the ideal boundary"):
        super().__init__(f"{msg} (z={z!r})" if z is not None else msg)
        self.z = z


class BranchPoint(IsoWillmoreError, ArithmeticError):
    def __init__(self, z=None, conf=None):
        super().__init__(f"branch point near z={z!r} (conformal factor {conf!r})")
        self.z = z
        self.conf = conf


class DegenerateFrame(IsoWillmoreError, ArithmeticError):
    pass


class NotOnBoundary(IsoWillmoreError, ValueError):
    pass


class RootCountMismatch(IsoWillmoreError, ArithmeticError):
    def __init__(self, found, expected=2):
        super().__init__(f"found {found} sign changes, expected {expected}")
        self.found = found


class ToleranceNotMet(IsoWillmoreError, ArithmeticError):
    def __init__(self, value, error, tol):
        super().__init__(f"quadrature tolerance {tol:g} not met: value={value!r} err={error:g}")
        self.value = value
        self.error = error


class NoBracket(IsoWillmoreError, ValueError):
    pass


class BoundViolated(IsoWillmoreError, ArithmeticError):
    pass


class UnknownName(IsoWillmoreError, KeyError):
    pass


class BadK(IsoWillmoreError, ValueError):
    pass


class NoFormula(IsoWillmoreError, KeyError):
    pass


class EmptyGrid(IsoWillmoreError, ValueError):
    pass
