"""Arbitrary-precision scalars, 3-vector algebra and precision escalation.

Scalars are ``mpmath.mpf`` values. mpmath keeps one global binary
precision, so every entry point in this package evaluates inside a
:func:`working_digits` block; values themselves are immutable and keep
whatever precision they were produced at. Decimal digit counts are
converted to binary precision as ``ceil(digits * log2(10)) + 8`` guard
bits.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass, replace
from typing import Callable, Iterator, Sequence

import mpmath
from mpmath import mpf

from .errors import PrecisionExhausted

Scalar = mpmath.mpf

GUARD_BITS = 8
LOG2_10 = math.log2(10)


def bits_for_digits(digits: int) -> int:
    """Binary precision carrying at least ``digits`` decimal digits."""
    return math.ceil(digits * LOG2_10) + GUARD_BITS


@contextmanager
def working_digits(digits: int) -> Iterator[None]:
    """Evaluate the enclosed block at ``digits`` decimal digits."""
    old = mpmath.mp.prec
    mpmath.mp.prec = bits_for_digits(digits)
    try:
        yield
    finally:
        mpmath.mp.prec = old


def scalar(value) -> Scalar:
    """Coerce ints, floats or decimal strings to mpf.

    Existing mpf values pass through untouched: re-wrapping would round
    them to the ambient precision and silently destroy digits.
    """
    if isinstance(value, mpf):
        return value
    return mpf(value)


def format_scalar(value: Scalar, digits: int) -> str:
    """Decimal string with exactly ``digits`` significant digits.

    Output is a pure function of the stored value, never a binary float
    round-trip, so files built from it are reproducible bit for bit.
    """
    return mpmath.nstr(value, digits, strip_zeros=False)


@dataclass(frozen=True)
class PrecisionContext:
    """Precision budget for one numerical operation.

    working_digits: decimal digits carried during evaluation.
    target_digits:  digits that must be stable between escalation steps.
    cap_digits:     escalation ceiling.
    """

    working_digits: int = 64
    target_digits: int = 40
    cap_digits: int = 2000

    def __post_init__(self) -> None:
        if self.target_digits < 1:
            raise ValueError("target_digits must be positive")
        if self.working_digits < self.target_digits + 10:
            raise ValueError(
                "working_digits must be at least target_digits + 10 "
                f"(got working={self.working_digits}, target={self.target_digits})"
            )
        if self.cap_digits < self.working_digits:
            raise ValueError(
                "cap_digits must be at least working_digits "
                f"(got cap={self.cap_digits}, working={self.working_digits})"
            )

    def with_working(self, digits: int) -> "PrecisionContext":
        return replace(self, working_digits=digits)

    def escalation_ladder(self, start: int | None = None) -> Iterator[int]:
        """Working precisions to try: start, then doubling, capped."""
        p = self.working_digits if start is None else start
        p = min(p, self.cap_digits)
        while True:
            yield p
            if p >= self.cap_digits:
                return
            p = min(2 * p, self.cap_digits)


DEFAULT_CONTEXT = PrecisionContext()


def _relative_difference(a: Scalar, b: Scalar, floor: Scalar) -> Scalar:
    # |a-b| / max(|b|, floor); the floor keeps quantities that pass
    # through zero from dividing by a vanishing reference.
    return abs(a - b) / max(abs(b), floor)


def stabilize(
    computation: Callable[[int], Scalar],
    ctx: PrecisionContext = DEFAULT_CONTEXT,
    *,
    start_digits: int | None = None,
) -> tuple[Scalar, int]:
    """Escalate precision until the scalar result stops moving.

    ``computation(digits)`` must be deterministic for fixed ``digits``.
    The result is accepted once two consecutive rungs of the doubling
    ladder agree to ``10**-target_digits`` relative; the value from the
    higher rung is returned together with the achieved digit count.

    Raises PrecisionExhausted when the cap is reached without agreement,
    or when the cap leaves no room for a second, higher-precision
    evaluation.
    """
    tol = mpf(10) ** (-ctx.target_digits)
    floor = mpf(10) ** (-ctx.cap_digits)
    previous: Scalar | None = None
    previous_digits = 0
    for digits in ctx.escalation_ladder(start_digits):
        if digits == previous_digits:
            break
        with working_digits(digits):
            value = computation(digits)
        if previous is not None:
            with working_digits(digits):
                if _relative_difference(value, previous, floor) <= tol:
                    return value, ctx.target_digits
        previous = value
        previous_digits = digits
    raise PrecisionExhausted(
        f"no agreement to {ctx.target_digits} digits within the "
        f"{ctx.cap_digits}-digit cap"
    )


def stabilize_components(
    computation: Callable[[int], Sequence[Scalar]],
    ctx: PrecisionContext = DEFAULT_CONTEXT,
    *,
    start_digits: int | None = None,
) -> tuple[tuple[Scalar, ...], int]:
    """Vector form of :func:`stabilize`.

    Components are compared against the max-norm of the newest result, so
    a component that cancels to zero (e.g. an azimuthal force under the
    time-symmetric model) does not stall convergence against itself.
    """
    tol = mpf(10) ** (-ctx.target_digits)
    floor = mpf(10) ** (-ctx.cap_digits)
    previous: tuple[Scalar, ...] | None = None
    previous_digits = 0
    for digits in ctx.escalation_ladder(start_digits):
        if digits == previous_digits:
            break
        with working_digits(digits):
            value = tuple(computation(digits))
        if previous is not None:
            if len(previous) != len(value):
                previous = value
                previous_digits = digits
                continue
            with working_digits(digits):
                scale = max(max(abs(v) for v in value), floor)
                if all(abs(v - p) / scale <= tol for v, p in zip(value, previous)):
                    return value, ctx.target_digits
        previous = value
        previous_digits = digits
    raise PrecisionExhausted(
        f"no componentwise agreement to {ctx.target_digits} digits within "
        f"the {ctx.cap_digits}-digit cap"
    )


@dataclass(frozen=True)
class Vec3:
    """Immutable 3-vector over mpf scalars.

    In-plane kinematic vectors keep z = 0; only magnetic fields and cross
    products develop a z component.
    """

    x: Scalar
    y: Scalar
    z: Scalar = mpf(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", scalar(self.x))
        object.__setattr__(self, "y", scalar(self.y))
        object.__setattr__(self, "z", scalar(self.z))

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "Vec3":
        return Vec3(-self.x, -self.y, -self.z)

    def __mul__(self, factor) -> "Vec3":
        f = scalar(factor)
        return Vec3(self.x * f, self.y * f, self.z * f)

    __rmul__ = __mul__

    def __truediv__(self, divisor) -> "Vec3":
        d = scalar(divisor)
        return Vec3(self.x / d, self.y / d, self.z / d)

    def dot(self, other: "Vec3") -> Scalar:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: "Vec3") -> "Vec3":
        return Vec3(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def norm_sq(self) -> Scalar:
        return self.dot(self)

    def norm(self) -> Scalar:
        return mpmath.sqrt(self.norm_sq())


ZERO_VEC = Vec3(mpf(0), mpf(0), mpf(0))
X_HAT = Vec3(mpf(1), mpf(0), mpf(0))
Y_HAT = Vec3(mpf(0), mpf(1), mpf(0))
Z_HAT = Vec3(mpf(0), mpf(0), mpf(1))
