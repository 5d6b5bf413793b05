"""Exception hierarchy. Every error raised by the package derives from NullBundleError."""


class NullBundleError(ValueError):
    pass


class ZeroVector(NullBundleError):
    pass


class OrientationUndecidable(NullBundleError):
    pass


class BadDirection(NullBundleError):
    pass


class DegenerateMetric(NullBundleError):
    pass


class OutOfDomain(NullBundleError):
    pass


class ZeroSpatialPart(NullBundleError):
    pass


class NotNull(NullBundleError):
    pass


class NonPositiveScale(NullBundleError):
    pass


class EmptySampling(NullBundleError):
    pass


class ProportionalSections(NullBundleError):
    """The partial ternary operation is undefined: the paired sections are proportional somewhere."""


class ZeroDivisor(NullBundleError):
    pass


class MixedOrientation(NullBundleError):
    """A scaling or product would move a section across both halves of the split cone."""


class PastConeUnsupported(NullBundleError):
    pass


class NonNullCurve(NullBundleError):
    pass


class NotRegular(NullBundleError):
    pass


class LeftDomain(NullBundleError):
    pass


class StepTooLarge(NullBundleError):
    pass


class ParseError(NullBundleError):
    pass
