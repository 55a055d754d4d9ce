"""Exception hierarchy shared by every module."""


class FlexPolyError(Exception):
    """Base class for all library errors."""


class ContractViolation(FlexPolyError, ValueError):
    """Inputs have the wrong shape or break a stated precondition."""


class SignatureError(FlexPolyError):
    """A Gram matrix does not have the requested inertia or rank."""


class DomainError(FlexPolyError, ValueError):
    """An argument lies outside the domain of an elliptic-function routine."""


class NoCoefficientsError(FlexPolyError):
    """The curve has a single coordinate, so there are no pairwise coefficients."""


class NotSingleFamilyError(FlexPolyError):
    """Pairwise coefficient blocks disagree on the elliptic modulus."""


class NoRealModulusError(FlexPolyError):
    """The modulus invariant gives no real modulus in (0, 1)."""


class FitError(FlexPolyError):
    """Regenerated coefficients do not reproduce the input."""


class DegenerateAltitudeError(FlexPolyError):
    """A recovered altitude is zero or infinite."""


class SpecError(FlexPolyError, ValueError):
    """A construction spec is malformed or inconsistent."""


class NotRealisableHereError(FlexPolyError):
    """The assembled pair is not realisable in the requested space."""


class WitnessError(FlexPolyError):
    """No witness point could be produced for the requested combination."""
