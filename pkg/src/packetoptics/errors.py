"""Exception hierarchy shared by the numerical modules and the CLI."""


class PacketOpticsError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(PacketOpticsError, ValueError):
    """Invalid or incomplete parameters (bad grid size, missing k0, ...)."""


class DegenerateInputError(PacketOpticsError, ValueError):
    """Input that has no meaningful result, e.g. normalizing a zero field."""


class FieldFormatError(PacketOpticsError, ValueError):
    """A field file that does not follow the ``x,re,im`` CSV layout."""


class NumericalGuardError(PacketOpticsError, RuntimeError):
    """A numerical sanity guard tripped; the result cannot be trusted."""


class WraparoundError(NumericalGuardError):
    """Density reached the periodic domain edges."""


class TotalEvanescenceError(NumericalGuardError):
    """The propagated field decayed to numerical zero."""


class UndersampledKernelWarning(UserWarning):
    """The quadratic-phase kernel advances more than pi per grid sample."""


class FraunhoferValidityWarning(UserWarning):
    """The quadratic phase dropped by the far-field approximation is not small."""
