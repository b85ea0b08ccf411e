"""Source-point geometry on the superluminal circle.

Everything is computed in normalized units: orbit radius r = 1, speed of
light c = 1, charge q = 1. The worldline is

    x(t) = (cos(beta*t), sin(beta*t), 0),

the test point sits at angle 0 and time 0 (position (1,0,0), velocity
beta*(0,1,0)) without loss of generality, and a null root with angle
phi = beta*tau places the retarded source at angle -phi and the advanced
source at the mirror image +phi. Physical units enter only through
:class:`PhysicalScale` at the API boundary, where forces pick up the
factor q**2 / r**2.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import mpmath
from mpmath import mpf

from .errors import InvalidBeta, ZeroZ
from .nullshell import NullRoot, _validate_beta
from .precision import Scalar, Vec3, X_HAT, scalar


class Side(enum.Enum):
    RETARDED = "retarded"
    ADVANCED = "advanced"

    @property
    def sign(self) -> int:
        """+1 for retarded, -1 for advanced; the sign flipping the
        velocity term and the magnetic-field orientation."""
        return 1 if self is Side.RETARDED else -1


class Dynamics(enum.Enum):
    """Which sign convention of the tachyon equation of motion admits a
    circular orbit: EQ1 for attractive radial force (Z > 0), EQ2 for the
    sign-flipped form when the force is repulsive (Z < 0)."""

    EQ1 = "eq1"
    EQ2 = "eq2"


@dataclass(frozen=True)
class CircularWorldline:
    """Circular superluminal orbit, normalized to r = c = 1."""

    beta: Scalar

    def __post_init__(self) -> None:
        object.__setattr__(self, "beta", _validate_beta(self.beta))


@dataclass(frozen=True)
class PhysicalScale:
    """Dimensional constants for converting normalized results."""

    r: Scalar = mpf(1)
    q: Scalar = mpf(1)
    m0: Scalar = mpf(1)
    c: Scalar = mpf(1)

    def __post_init__(self) -> None:
        for name in ("r", "q", "m0", "c"):
            value = scalar(getattr(self, name))
            if not value > 0:
                raise ValueError(f"{name} must be strictly positive")
            object.__setattr__(self, name, value)

    def force_factor(self) -> Scalar:
        """Normalized force -> physical force multiplier, q**2 / r**2."""
        return self.q * self.q / (self.r * self.r)


@dataclass(frozen=True)
class LightconeVertex:
    """Full kinematic data at one retarded or advanced source point.

    Rvec points from the source to the test point; R = |Rvec| equals tau
    by the null condition; K is the Doppler denominator of the
    Lienard-Wiechert potentials, equal for the two members of a mirror
    pair.
    """

    side: Side
    root: NullRoot
    src_position: Vec3
    src_velocity: Vec3
    src_accel: Vec3
    Rvec: Vec3
    R: Scalar
    nhat: Vec3
    K: Scalar


def vertex(beta, root: NullRoot, side: Side) -> LightconeVertex:
    """Build the source-point geometry for one null root.

    K is computed from its geometric definition 1 - sign * nhat.velocity
    rather than the circular-orbit closed form 1 - beta*sin(phi)/tau;
    the two agree and the geometric route generalizes to off-circle test
    points (used by the finite-difference field oracle).
    """
    b = scalar(beta)
    phi = root.phi
    c = mpmath.cos(phi)
    s = mpmath.sin(phi)
    b2 = b * b
    if side is Side.RETARDED:
        src_position = Vec3(c, -s)
        src_velocity = Vec3(b * s, b * c)
        src_accel = Vec3(-b2 * c, b2 * s)
    else:
        src_position = Vec3(c, s)
        src_velocity = Vec3(-b * s, b * c)
        src_accel = Vec3(-b2 * c, -b2 * s)
    Rvec = X_HAT - src_position
    R = Rvec.norm()
    nhat = Rvec / R
    K = 1 - side.sign * nhat.dot(src_velocity)
    return LightconeVertex(
        side=side,
        root=root,
        src_position=src_position,
        src_velocity=src_velocity,
        src_accel=src_accel,
        Rvec=Rvec,
        R=R,
        nhat=nhat,
        K=K,
    )


def equilibrium_radius(
    beta,
    scale: PhysicalScale,
    Z,
    *,
    achieved_digits: int | None = None,
) -> tuple[Scalar, Dynamics]:
    """Orbit radius balancing the radial self-force, and which equation
    of motion it solves.

    radius = sqrt(beta**2 - 1) * q**2 * |Z| / (m0 * c**2 * beta**2).
    Positive Z (attraction) solves the standard form (EQ1); negative Z
    requires the sign-flipped form (EQ2). Z indistinguishable from zero
    at the achieved precision has no derivable radius.
    """
    b = scalar(beta)
    if not b > 1:
        raise InvalidBeta(f"beta must exceed 1; got {b}")
    z = scalar(Z)
    threshold = mpf(10) ** (-achieved_digits) if achieved_digits else mpf(0)
    if abs(z) <= threshold:
        raise ZeroZ("radial force coefficient is zero to the achieved precision")
    radius = (
        mpmath.sqrt(b * b - 1)
        * scale.q
        * scale.q
        * abs(z)
        / (scale.m0 * scale.c * scale.c * b * b)
    )
    return radius, (Dynamics.EQ1 if z > 0 else Dynamics.EQ2)
