"""Retarded/advanced fields at the test point, and their oracle.

The electric field of one source vertex (normalized q = c = 1, with
s = +1 retarded / -1 advanced and all source quantities evaluated at the
source time) is

    E = (nhat - s*vel) * (1 - |vel|**2) / (K**3 * R**2)
      + nhat x ((nhat - s*vel) x acc) / (K**3 * R),
    B = s * nhat x E.

Note 1 - |vel|**2 < 0 for superluminal motion, and K passes through zero
on the Cerenkov cone where the expression is genuinely singular.

The potentials are phi = 1/(K*R), A = vel/(K*R). The finite-difference
machinery below differentiates those potentials numerically (re-solving
the light-cone delay at displaced test points and times) to provide an
independent check of the closed-form field: E = -grad(phi) - dA/dt and
B = curl(A).
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mpf

from .errors import NoConvergence, SingularCone
from .kinematics import LightconeVertex, Side, vertex
from .nullshell import NullRoot
from .precision import (
    DEFAULT_CONTEXT,
    PrecisionContext,
    Scalar,
    Vec3,
    scalar,
    working_digits,
)

DEFAULT_FD_STEP = mpf("1e-10")


@dataclass(frozen=True)
class FieldSample:
    """E and B of one vertex at the test point."""

    E: Vec3
    B: Vec3
    side: Side
    source_root: NullRoot


@dataclass(frozen=True)
class Potentials:
    """Scalar and vector potential of one vertex at the test point."""

    phi: Scalar
    A: Vec3


def _cone_guard(K: Scalar) -> None:
    # Fields scale as 1/K**3; below half the working digits the value is
    # numerically meaningless rather than merely imprecise.
    if abs(K) < mpf(10) ** (-(mpmath.mp.dps // 2)):
        raise SingularCone(
            f"test point lies on the Cerenkov cone of the source (K = {K})"
        )


def lienard_wiechert(v: LightconeVertex) -> FieldSample:
    """Closed-form E and B of one retarded or advanced source vertex."""
    _cone_guard(v.K)
    s = v.side.sign
    beta_sq = v.src_velocity.dot(v.src_velocity)
    u = v.nhat - v.src_velocity * s
    k3 = v.K**3
    velocity_term = u * ((1 - beta_sq) / (k3 * v.R * v.R))
    radiation_term = v.nhat.cross(u.cross(v.src_accel)) / (k3 * v.R)
    E = velocity_term + radiation_term
    B = v.nhat.cross(E) * s
    return FieldSample(E=E, B=B, side=v.side, source_root=v.root)


def potentials(v: LightconeVertex) -> Potentials:
    """Scalar and vector potential of one source vertex."""
    _cone_guard(v.K)
    kr = v.K * v.R
    return Potentials(phi=1 / kr, A=v.src_velocity / kr)


def lorentz_force(sample: FieldSample, test_velocity: Vec3) -> Vec3:
    """Force per unit charge on the test point, E + v x B."""
    return sample.E + test_velocity.cross(sample.B)


def _source_state(beta: Scalar, src_time: Scalar) -> tuple[Vec3, Vec3]:
    angle = beta * src_time
    c = mpmath.cos(angle)
    s = mpmath.sin(angle)
    return Vec3(c, s), Vec3(-beta * s, beta * c)


def retarded_time_near(
    test_point: Vec3,
    test_time,
    beta,
    seed_tau,
    side: Side,
) -> Scalar:
    """Light-cone delay of an (off-circle) test event near a known root.

    Solves |test_point - x_src(t')| = +-(test_time - t') for the delay
    d = |test_time - t'| > 0 by damped Newton iteration from
    ``seed_tau``. F(d) = R(d) - d has derivative -K, so steps blow up
    near a cone tangency; steps are halved until the residual decreases
    and the final residual is verified, raising NoConvergence when the
    seed basin is lost.
    """
    b = scalar(beta)
    t0 = scalar(test_time)
    s = side.sign
    d = scalar(seed_tau)
    if d <= 0:
        raise NoConvergence("seed delay must be positive")

    def residual(delay: Scalar) -> tuple[Scalar, Scalar]:
        src_pos, src_vel = _source_state(b, t0 - s * delay)
        Rvec = test_point - src_pos
        R = Rvec.norm()
        K = 1 - s * Rvec.dot(src_vel) / R
        return R - delay, K

    tol = mpf(10) ** (-mpmath.mp.dps + 5)
    F, K = residual(d)
    for _ in range(60 + mpmath.mp.prec // 4):
        if abs(F) <= tol * max(d, 1):
            return d
        if K == 0:
            raise NoConvergence("cone tangency: zero derivative at iterate")
        step = F / K  # Newton: d_new = d - F/F' with F' = -K
        accepted = False
        for _ in range(80):
            candidate = d + step
            if candidate > 0:
                F_new, K_new = residual(candidate)
                if abs(F_new) < abs(F):
                    d, F, K = candidate, F_new, K_new
                    accepted = True
                    break
            step /= 2
        if not accepted:
            raise NoConvergence(
                f"light-cone solve stalled at delay {d} (residual {F})"
            )
    raise NoConvergence(f"light-cone solve did not converge (residual {F})")


def _potentials_at(
    test_point: Vec3,
    test_time: Scalar,
    beta: Scalar,
    seed_tau: Scalar,
    side: Side,
) -> Potentials:
    d = retarded_time_near(test_point, test_time, beta, seed_tau, side)
    s = side.sign
    src_pos, src_vel = _source_state(beta, scalar(test_time) - s * d)
    Rvec = test_point - src_pos
    R = Rvec.norm()
    nhat = Rvec / R
    K = 1 - s * nhat.dot(src_vel)
    _cone_guard(K)
    kr = K * R
    return Potentials(phi=1 / kr, A=src_vel / kr)


def fields_by_finite_difference(
    beta,
    root: NullRoot,
    side: Side,
    step=DEFAULT_FD_STEP,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
    *,
    richardson: bool = True,
) -> FieldSample:
    """E and B from central differences of the potentials.

    Independent of the closed-form field expression: each displaced
    evaluation re-solves the light-cone delay, rebuilds the geometry and
    differentiates phi and A directly. One Richardson extrapolation
    level upgrades the O(step**2) central differences to O(step**4).
    Working precision must comfortably exceed the digits lost to
    differencing (about 2*log10(1/step) plus the target accuracy).
    """
    b = scalar(beta)
    h0 = scalar(step)
    x0 = Vec3(1, 0)
    t0 = mpf(0)

    with working_digits(ctx.working_digits):

        def derivative_block(h: Scalar) -> tuple[Vec3, Vec3]:
            axes = (Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1))
            grad_phi = []
            grad_A = []  # grad_A[j][k] = d A_k / d x_j
            for e in axes:
                plus = _potentials_at(x0 + e * h, t0, b, root.tau, side)
                minus = _potentials_at(x0 - e * h, t0, b, root.tau, side)
                grad_phi.append((plus.phi - minus.phi) / (2 * h))
                grad_A.append(
                    (
                        (plus.A.x - minus.A.x) / (2 * h),
                        (plus.A.y - minus.A.y) / (2 * h),
                        (plus.A.z - minus.A.z) / (2 * h),
                    )
                )
            later = _potentials_at(x0, t0 + h, b, root.tau, side)
            earlier = _potentials_at(x0, t0 - h, b, root.tau, side)
            dA_dt = (later.A - earlier.A) / (2 * h)
            E = Vec3(-grad_phi[0], -grad_phi[1], -grad_phi[2]) - dA_dt
            B = Vec3(
                grad_A[1][2] - grad_A[2][1],
                grad_A[2][0] - grad_A[0][2],
                grad_A[0][1] - grad_A[1][0],
            )
            return E, B

        E1, B1 = derivative_block(h0)
        if not richardson:
            return FieldSample(E=E1, B=B1, side=side, source_root=root)
        E2, B2 = derivative_block(h0 / 2)
        E = (E2 * 4 - E1) / 3
        B = (B2 * 4 - B1) / 3
        return FieldSample(E=E, B=B, side=side, source_root=root)


def field_sample(beta, root: NullRoot, side: Side) -> FieldSample:
    """Convenience: closed-form field for one root and side."""
    return lienard_wiechert(vertex(beta, root, side))
