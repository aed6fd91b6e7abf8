"""Exception types shared across the package."""


class ZtelError(Exception):
    """Base class for all package errors."""


class NotUnimodular(ZtelError):
    """Integer matrix has determinant other than +1 or -1."""


class ResourceLimit(ZtelError):
    """A search exceeded its configured element budget."""


class EtaTooFast(ZtelError):
    """Control table grows faster than the 3^s envelope can dominate."""


class Unfittable(ZtelError):
    """No basic neighborhood candidate covers the given point set."""


class InvalidPair(ZtelError):
    """Lower control function exceeds the upper one somewhere."""


class NotContracting(ZtelError):
    """Function fails the phi(x) <= x/2 requirement on the check grid."""


class PreconditionFailed(ZtelError):
    """A documented operation precondition does not hold."""


class NotConverging(ZtelError):
    """Input sequence fails its own convergence precondition."""


class ConfigError(ZtelError):
    """Experiment configuration is malformed or inconsistent."""
