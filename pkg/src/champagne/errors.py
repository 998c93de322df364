"""Exception types shared across the package."""


class ChampagneError(Exception):
    """Base class for errors raised by this package."""


class KernelDomainError(ChampagneError, ValueError):
    """An evaluation or operation was requested outside its valid domain."""


class ExtrapolationError(KernelDomainError):
    """A tabulated kernel was queried outside its sample range."""


class QuadratureError(ChampagneError, RuntimeError):
    """Numerical integration failed to converge to the requested tolerance."""


class CertificationError(ChampagneError, RuntimeError):
    """A decay-property certificate could not be established."""


class ConfigError(ChampagneError, ValueError):
    """A ball configuration violates a structural requirement."""


class SimulationError(ChampagneError, RuntimeError):
    """A Monte Carlo estimate could not be produced as requested."""
