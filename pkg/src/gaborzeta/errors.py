"""Exception hierarchy.

Every error a computation can raise derives from :class:`ComputationError`;
the CLI maps these to exit code 1.
"""


class ComputationError(Exception):
    pass


class DegenerateLattice(ComputationError, ValueError):
    pass


class CapExceeded(ComputationError):
    """A truncation would need more terms or a larger radius than allowed."""


class SlowConvergence(ComputationError):
    pass


class PoleProximity(ComputationError, ValueError):
    pass


class Unsupported(ComputationError, ValueError):
    pass


class NotIntegerDensity(ComputationError, ValueError):
    pass


class NotEvenDensity(NotIntegerDensity):
    pass
