"""Roots of the null condition for circular superluminal motion.

A point charge moving on the unit circle with speed beta > 1 intersects
its own light cone wherever the dimensionless delay tau = t - t' solves

    2 - 2*cos(beta*tau) = tau**2,        0 < tau <= 2.

This module finds every such root, counts them, and computes the
singular velocities at which two roots merge tangentially (where the
root count jumps by two and the Doppler factor K of the merged pair
vanishes).

Root isolation strategy.  With f(tau) = 2 - 2*cos(beta*tau) - tau**2,
the derivative is f'(tau) = 2*(beta*sin(beta*tau) - tau).  On every
half-period of sin(beta*tau) with sin <= 0 we have f' <= -2*tau < 0, so
f is strictly decreasing and has no interior extrema there.  On a
half-period with sin > 0 write g(tau) = beta*sin(beta*tau) - tau; g is
strictly concave (g'' = -beta**3 sin < 0), negative at both endpoints
(except at tau = 0 where it vanishes with positive slope), and has its
unique maximum where cos(beta*tau) = 1/beta**2.  Hence g has zero, one
(first arch only) or two transversal zeros per arch, each bracketable by
bisection between the arch boundary and the concave maximum.  Those
zeros are the only extrema of f, f is monotone between consecutive
extrema, and each monotone segment holds at most one root.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass

import mpmath
from mpmath import mpf

from .errors import InvalidBeta, NearSingularBeta, RootIsolationError
from .precision import (
    DEFAULT_CONTEXT,
    PrecisionContext,
    Scalar,
    scalar,
    stabilize,
    working_digits,
)

# Speeds this close to 1 (or below) are rejected: the single root then
# sits at tau -> 0+ with K -> 0- and every force diverges.
BETA_GUARD = 1e-6

# Adjacent roots closer than this are flagged as a nearly-merged pair.
NEAR_DOUBLE_GAP = mpf("1e-4")

# Refined roots below 1e-3/beta are discarded as the excluded
# self-contribution at the particle's present location (tau = 0 solves
# the null condition trivially but carries no field).
ZERO_EXCLUSION_NUMERATOR = mpf("1e-3")


class Multiplicity(enum.Enum):
    SIMPLE = "simple"
    NEAR_DOUBLE = "near_double"


@dataclass(frozen=True)
class NullRoot:
    """One light-cone self-intersection.

    tau: dimensionless delay, 0 < tau <= 2.
    phi: source angle swept during the delay, phi = beta*tau.
    """

    tau: Scalar
    phi: Scalar
    multiplicity_hint: Multiplicity = Multiplicity.SIMPLE


@dataclass(frozen=True)
class SingularVelocity:
    """Speed at which two null roots merge tangentially.

    phi solves 2 - 2*cos(phi) - phi*sin(phi) = 0 in (2k*pi, (2k+1)*pi)
    and beta = sqrt(phi / sin(phi)).
    """

    index: int
    phi: Scalar
    beta: Scalar


def f_null(tau, beta) -> Scalar:
    """Null-condition residual 2 - 2*cos(beta*tau) - tau**2."""
    tau = scalar(tau)
    beta = scalar(beta)
    return 2 - 2 * mpmath.cos(beta * tau) - tau * tau


def f_null_dtau(tau, beta) -> Scalar:
    """d/dtau of the null-condition residual."""
    tau = scalar(tau)
    beta = scalar(beta)
    return 2 * beta * mpmath.sin(beta * tau) - 2 * tau


def h_tangency(phi) -> Scalar:
    """Tangency condition 2 - 2*cos(phi) - phi*sin(phi).

    Simultaneous zeros of the null condition and its tau-derivative
    reduce to zeros of this single function of phi = beta*tau.
    """
    phi = scalar(phi)
    return 2 - 2 * mpmath.cos(phi) - phi * mpmath.sin(phi)


def _h_tangency_dphi(phi: Scalar) -> Scalar:
    return mpmath.sin(phi) - phi * mpmath.cos(phi)


def _validate_beta(beta) -> Scalar:
    b = scalar(beta)
    if not b > 1 + BETA_GUARD:
        raise InvalidBeta(f"beta must exceed 1 (and 1 + {BETA_GUARD:g}); got {b}")
    return b


class _SignAmbiguous(Exception):
    """Internal: a sign decision fell below the evaluation noise floor."""


def _newton_bisect(fun, dfun, lo, hi, f_lo, f_hi, rel_width):
    """Refine the single root of ``fun`` inside [lo, hi].

    Newton steps from the midpoint, falling back to bisection whenever a
    step leaves the bracket or fails to shrink it. The bracket invariant
    sign(fun(lo)) != sign(fun(hi)) is maintained throughout; convergence
    is declared when the bracket width drops below rel_width * |root|.
    """
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    x = (lo + hi) / 2
    max_iter = 40 + 4 * mpmath.mp.prec
    for _ in range(max_iter):
        width = hi - lo
        if width <= rel_width * max(abs(x), rel_width):
            return x
        fx = fun(x)
        if fx == 0:
            return x
        if mpmath.sign(fx) == mpmath.sign(f_lo):
            lo = x
        else:
            hi = x
        dfx = dfun(x)
        if dfx != 0:
            step = fx / dfx
            candidate = x - step
        else:
            candidate = lo  # force bisection
        if lo < candidate < hi:
            x = candidate
        else:
            x = (lo + hi) / 2
    return x


def _critical_points(b: Scalar, dps: int) -> list[Scalar]:
    """All extrema of f(tau) = f_null(tau, b) inside (0, 2), ascending.

    Raises _SignAmbiguous if the concave maximum of g sits within noise
    of zero while f there is also within noise of zero, i.e. the
    double-extremum pathology cannot be resolved at this precision.
    """
    noise = mpf(10) ** (-dps + 6)
    rel_width = mpf(10) ** (-dps + 5)
    two = mpf(2)
    pi = mpmath.pi()
    x_peak = mpmath.acos(1 / (b * b))  # phase of g's concave maximum
    crits: list[Scalar] = []
    m = 0
    while True:
        arch_lo = 2 * m * pi / b
        if arch_lo >= two:
            break
        arch_hi = min((2 * m + 1) * pi / b, two)
        tau_peak = (2 * m * pi + x_peak) / b

        def g(t):
            return b * mpmath.sin(b * t) - t

        def dg(t):
            return b * b * mpmath.cos(b * t) - 1

        if tau_peak >= arch_hi:
            # Domain clip before the peak: g rises monotonically across
            # the remaining piece, so at most one crossing.
            g_hi = g(arch_hi)
            if abs(g_hi) < noise:
                if abs(f_null(arch_hi, b)) < noise:
                    raise _SignAmbiguous
                g_hi = mpf(0)
            if m > 0 and g_hi > 0:
                g_lo = g(arch_lo)
                crits.append(
                    _newton_bisect(g, dg, arch_lo, arch_hi, g_lo, g_hi, rel_width)
                )
            m += 1
            continue

        g_peak = g(tau_peak)
        if abs(g_peak) < noise:
            # Tangency of f' itself. Harmless (f stays monotone to within
            # noise**2) unless f is simultaneously near zero there.
            if abs(f_null(tau_peak, b)) < noise:
                raise _SignAmbiguous
            m += 1
            continue
        if g_peak > 0:
            if m > 0:
                # Rising crossing of g on [arch start, peak]: local
                # minimum of f. The first arch has g > 0 from the start
                # (g(0) = 0 with slope beta**2 - 1 > 0), so no minimum.
                g_lo = g(arch_lo)
                crits.append(
                    _newton_bisect(g, dg, arch_lo, tau_peak, g_lo, g_peak, rel_width)
                )
            # Falling crossing on [peak, arch end]: local maximum of f.
            g_hi = g(arch_hi)
            if abs(g_hi) < noise and arch_hi == two:
                if abs(f_null(arch_hi, b)) < noise:
                    raise _SignAmbiguous
                g_hi = mpf(0)
            if g_hi < 0:
                crits.append(
                    _newton_bisect(g, dg, tau_peak, arch_hi, g_peak, g_hi, rel_width)
                )
            # g_hi >= 0 can only happen on a clipped arch; the maximum
            # then lies beyond tau = 2 and is irrelevant.
        m += 1
    return crits


def _isolate_at(b: Scalar, dps: int) -> list[Scalar]:
    """Roots of f_null(., b) in (0, 2] at dps working digits.

    Raises _SignAmbiguous when any segment-boundary sign falls below the
    noise floor (nearly tangent root pair at this precision).
    """
    noise = mpf(10) ** (-dps + 6)
    rel_width = mpf(10) ** (-dps + 5)
    two = mpf(2)
    crits = _critical_points(b, dps)
    bounds = [mpf(0)] + crits + [two]
    # f > 0 just above tau = 0 for beta > 1; assign the origin a plus
    # sign instead of evaluating f(0) = 0.
    signs = [1]
    values = [mpf(0)]
    for t in bounds[1:]:
        ft = f_null(t, b)
        if abs(ft) < noise * max(1, t * t):
            raise _SignAmbiguous
        signs.append(1 if ft > 0 else -1)
        values.append(ft)
    roots: list[Scalar] = []
    for i in range(len(bounds) - 1):
        if signs[i] == signs[i + 1]:
            continue
        root = _newton_bisect(
            lambda t: f_null(t, b),
            lambda t: f_null_dtau(t, b),
            bounds[i],
            bounds[i + 1],
            values[i] if i > 0 else mpf(1),
            values[i + 1],
            rel_width,
        )
        if root >= ZERO_EXCLUSION_NUMERATOR / b:
            roots.append(root)
    return roots


def find_roots(beta, ctx: PrecisionContext = DEFAULT_CONTEXT) -> list[NullRoot]:
    """Every light-cone self-intersection delay for speed ``beta``.

    Returns the roots ascending in tau, refined at the working precision,
    escalating internally (up to the cap) whenever a sign decision near a
    nearly-merged pair falls below the noise floor. Adjacent roots closer
    than NEAR_DOUBLE_GAP are flagged so downstream force code can
    pre-escalate its own precision.
    """
    b = _validate_beta(beta)
    taus: list[Scalar] | None = None
    for dps in ctx.escalation_ladder():
        with working_digits(dps):
            try:
                taus = _isolate_at(b, dps)
                break
            except _SignAmbiguous:
                taus = None
                continue
    if taus is None:
        raise NearSingularBeta(
            f"beta = {b} is too close to a singular velocity to separate "
            f"its root pair within the {ctx.cap_digits}-digit cap"
        )
    if len(taus) % 2 == 0:
        raise RootIsolationError(
            f"even root count {len(taus)} at beta = {b}; the null condition "
            "must have an odd number of transversal roots"
        )
    with working_digits(ctx.working_digits):
        hints = [Multiplicity.SIMPLE] * len(taus)
        for i in range(len(taus) - 1):
            if taus[i + 1] - taus[i] < NEAR_DOUBLE_GAP:
                hints[i] = Multiplicity.NEAR_DOUBLE
                hints[i + 1] = Multiplicity.NEAR_DOUBLE
        return [
            NullRoot(tau=t, phi=b * t, multiplicity_hint=hint)
            for t, hint in zip(taus, hints)
        ]


def root_count(beta, ctx: PrecisionContext = DEFAULT_CONTEXT) -> int:
    """Number of null roots N(beta); odd wherever defined."""
    return len(find_roots(beta, ctx))


def _refine_tangency_phi(k: int, dps: int) -> Scalar:
    """The unique zero of h_tangency in (2k*pi, (2k+1)*pi) at dps digits.

    h < 0 just above the left endpoint and h = 4 at the right endpoint.
    Uniqueness of the sign change is asserted by a fine scan; more than
    one crossing would invalidate the singular-velocity table, so it is
    reported as an internal error rather than silently accepted.
    """
    with working_digits(dps):
        pi = mpmath.pi()
        lo = 2 * k * pi
        hi = (2 * k + 1) * pi
        samples = 64
        step = (hi - lo) / samples
        prev_sign = -1  # h < 0 just above 2k*pi
        crossings = 0
        bracket = None
        for i in range(1, samples + 1):
            t = lo + i * step
            ht = h_tangency(t) if i < samples else mpf(4)
            s = 1 if ht > 0 else -1
            if s != prev_sign:
                crossings += 1
                if bracket is None:
                    bracket = (t - step, t)
                prev_sign = s
        if crossings != 1 or bracket is None:
            raise RootIsolationError(
                f"expected exactly one tangency root in interval k={k}, "
                f"scan found {crossings} sign changes"
            )
        rel_width = mpf(10) ** (-dps + 5)
        return _newton_bisect(
            h_tangency,
            _h_tangency_dphi,
            bracket[0],
            bracket[1],
            h_tangency(bracket[0]),
            h_tangency(bracket[1]),
            rel_width,
        )


def singular_betas(
    count: int, ctx: PrecisionContext = DEFAULT_CONTEXT
) -> list[SingularVelocity]:
    """First ``count`` singular velocities, each stabilised to the target.

    beta_k = sqrt(phi_k / sin(phi_k)) for the tangency root phi_k in
    (2k*pi, (2k+1)*pi); the values increase with k and their spacing
    approaches pi.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    table: list[SingularVelocity] = []
    for k in range(1, count + 1):

        def beta_at(dps: int, k: int = k) -> Scalar:
            phi = _refine_tangency_phi(k, dps)
            with working_digits(dps):
                return mpmath.sqrt(phi / mpmath.sin(phi))

        beta_k, _achieved = stabilize(beta_at, ctx)
        phi_k = _refine_tangency_phi(k, ctx.working_digits)
        table.append(SingularVelocity(index=k, phi=phi_k, beta=beta_k))
    return table


@functools.lru_cache(maxsize=None)
def _cached_singular_betas(count: int, ctx: PrecisionContext) -> tuple[Scalar, ...]:
    return tuple(sv.beta for sv in singular_betas(count, ctx))


def singular_betas_below(
    beta_max, ctx: PrecisionContext = DEFAULT_CONTEXT
) -> tuple[Scalar, ...]:
    """Cached singular velocities up to (at least) ``beta_max``.

    The k-th singular velocity exceeds (2k+0.5)*pi/... in practice it
    grows by roughly pi per index, so index beta_max/pi + 2 is always
    enough headroom.
    """
    b = scalar(beta_max)
    if b <= 4.6:
        return ()
    count = int(mpmath.ceil(b / mpmath.pi)) + 2
    table = _cached_singular_betas(count, ctx)
    return tuple(x for x in table if x <= b + 1)


def nearest_singular_distance(beta, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Scalar:
    """Distance from ``beta`` to the closest computed singular velocity."""
    b = scalar(beta)
    with working_digits(ctx.working_digits):
        candidates = singular_betas_below(b + 2, ctx)
        if not candidates:
            return mpf("inf")
        return min(abs(b - s) for s in candidates)
