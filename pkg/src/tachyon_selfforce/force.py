"""Total self-force, its radial coefficient Z and azimuthal ratio epsilon.

Sign conventions, fixed once: the test point sits at (1,0,0) moving in
the +y direction, so outward radial is +x and tangential-positive means
along the velocity. Attraction toward the center is F_radial < 0, i.e.
Z = -F_radial > 0. The azimuthal/radial ratio epsilon is positive when
an attractive force is accompanied by a drag opposing the motion (and a
repulsive one by a push along it).

Model weights: the time-symmetric (Feynman-Wheeler) force averages the
retarded and advanced contribution of every root pair with weight 1/2
per side; the causal model sums unit-weight retarded contributions only.
The mirror symmetry of each pair makes the two models' radial forces
identical and cancels the time-symmetric azimuthal force exactly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from mpmath import mpf

from .errors import InvalidBeta
from .fields import lienard_wiechert, lorentz_force
from .kinematics import Side, vertex
from .nullshell import (
    Multiplicity,
    _validate_beta,
    find_roots,
    nearest_singular_distance,
)
from .precision import (
    DEFAULT_CONTEXT,
    PrecisionContext,
    Scalar,
    Vec3,
    stabilize_components,
    working_digits,
)

# Working digits used as soon as a nearly-merged root pair is present;
# the per-root fields then diverge and cancel, so evaluation starts far
# above the default before the stability ladder takes over.
NEAR_DOUBLE_START_DIGITS = 320


class Model(enum.Enum):
    FEYNMAN_WHEELER = "feynman_wheeler"
    CAUSAL = "causal"


@dataclass(frozen=True)
class ForceResult:
    """Self-force on the test charge, in normalized units.

    F_radial is outward-positive, F_azimuthal positive along the test
    velocity, Z = -F_radial, epsilon = F_azimuthal / F_radial (causal
    model only; the time-symmetric azimuthal force cancels identically).
    """

    beta: Scalar
    model: Model
    F_radial: Scalar
    F_azimuthal: Scalar
    Z: Scalar
    epsilon: Scalar | None
    n_roots: int
    achieved_digits: int

    def physical_radial_force(self, scale) -> Scalar:
        return self.F_radial * scale.force_factor()

    def physical_azimuthal_force(self, scale) -> Scalar:
        return self.F_azimuthal * scale.force_factor()


def _force_components(beta: Scalar, model: Model, roots) -> tuple[Scalar, Scalar]:
    """Sum the per-root Lorentz forces at ambient precision."""
    test_velocity = Vec3(0, beta, 0)
    fx = mpf(0)
    fy = mpf(0)
    for root in roots:
        retarded = lorentz_force(
            lienard_wiechert(vertex(beta, root, Side.RETARDED)), test_velocity
        )
        if model is Model.FEYNMAN_WHEELER:
            advanced = lorentz_force(
                lienard_wiechert(vertex(beta, root, Side.ADVANCED)), test_velocity
            )
            fx += (retarded.x + advanced.x) / 2
            fy += (retarded.y + advanced.y) / 2
        else:
            fx += retarded.x
            fy += retarded.y
    return fx, fy


def self_force(
    beta, model: Model, ctx: PrecisionContext = DEFAULT_CONTEXT
) -> ForceResult:
    """Total self-force at speed ``beta`` under the given model.

    The whole evaluation (root finding included) is wrapped in the
    precision-escalation ladder; a speed that coincides with a computed
    singular velocity to within 10**-cap_digits is rejected outright
    since the merged root pair has K = 0 and no finite field.
    """
    b = _validate_beta(beta)
    with working_digits(ctx.working_digits):
        if nearest_singular_distance(b, ctx) <= mpf(10) ** (-ctx.cap_digits):
            raise InvalidBeta(
                f"beta = {b} coincides with a singular velocity at the "
                "configured precision cap; the self-force is undefined there"
            )

    start = ctx.working_digits
    probe_roots = find_roots(b, ctx)
    if any(r.multiplicity_hint is Multiplicity.NEAR_DOUBLE for r in probe_roots):
        start = max(start, min(NEAR_DOUBLE_START_DIGITS, ctx.cap_digits))

    n_roots = len(probe_roots)

    def components(digits: int) -> tuple[Scalar, Scalar]:
        nonlocal n_roots
        roots = find_roots(b, ctx.with_working(digits))
        n_roots = len(roots)
        with working_digits(digits):
            return _force_components(b, model, roots)

    (f_radial, f_azimuthal), achieved = stabilize_components(
        components, ctx, start_digits=start
    )
    with working_digits(ctx.working_digits):
        epsilon = f_azimuthal / f_radial if model is Model.CAUSAL else None
        return ForceResult(
            beta=b,
            model=model,
            F_radial=f_radial,
            F_azimuthal=f_azimuthal,
            Z=-f_radial,
            epsilon=epsilon,
            n_roots=n_roots,
            achieved_digits=achieved,
        )


def z_of_beta(beta, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Scalar:
    """Dimensionless radial force coefficient Z(beta); Z > 0 means
    attraction toward the orbit center."""
    return self_force(beta, Model.FEYNMAN_WHEELER, ctx).Z


def epsilon_of_beta(beta, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Scalar:
    """Azimuthal-to-radial force ratio under causal electrodynamics."""
    result = self_force(beta, Model.CAUSAL, ctx)
    assert result.epsilon is not None
    return result.epsilon
