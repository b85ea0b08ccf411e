"""Exception hierarchy for the self-force computation pipeline."""


class TachyonError(Exception):
    """Base class for all errors raised by this package."""


class InvalidBeta(TachyonError):
    """The requested speed is outside the supported superluminal range,
    or coincides numerically with a singular velocity."""


class PrecisionExhausted(TachyonError):
    """The escalation ceiling was reached before the result stabilised.

    Usually signals that the input sits too close to a singular velocity
    for the configured precision cap, or that the requested computation
    is ill-posed.
    """


class NearSingularBeta(PrecisionExhausted):
    """A nearly-merged root pair of the null condition could not be
    separated within the precision cap."""


class SingularCone(TachyonError):
    """The test point lies (numerically) on the Cerenkov cone of the
    source point: the Doppler factor K vanished and the field expression
    is singular there."""


class NoConvergence(TachyonError):
    """An iterative solve lost its root basin and did not converge."""


class ZeroZ(TachyonError):
    """The radial force coefficient is zero to the achieved precision;
    no equilibrium radius can be derived from it."""


class RootIsolationError(TachyonError):
    """Internal consistency failure during root isolation (e.g. more than
    one tangency root detected in an interval that should hold exactly
    one). Indicates a broken assumption rather than bad user input."""
