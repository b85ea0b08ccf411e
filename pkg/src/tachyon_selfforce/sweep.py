"""Parameter sweeps of Z(beta) and epsilon(beta).

Grids are evaluated point-by-point (optionally in parallel worker
processes) and emitted as a deterministic ascending stream of rows, so
long high-precision sweeps can be split by beta range and resumed. Grid
points that coincide with a singular velocity are emitted as skipped
rows; per-point precision exhaustion becomes a row status instead of
aborting the sweep.
"""

from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import mpmath
from mpmath import mpf

from .errors import InvalidBeta, PrecisionExhausted
from .force import Model, self_force
from .nullshell import singular_betas, singular_betas_below
from .precision import (
    DEFAULT_CONTEXT,
    PrecisionContext,
    Scalar,
    scalar,
    working_digits,
)


class Spacing(enum.Enum):
    LINEAR = "linear"
    LOG = "log"


class RowStatus(enum.Enum):
    OK = "ok"
    PRECISION_EXHAUSTED = "precision_exhausted"
    SKIPPED_SINGULAR = "skipped_singular"


@dataclass(frozen=True)
class SweepSpec:
    beta_min: Scalar
    beta_max: Scalar
    points: int
    spacing: Spacing = Spacing.LINEAR
    model: Model = Model.FEYNMAN_WHEELER
    ctx: PrecisionContext = DEFAULT_CONTEXT

    def __post_init__(self) -> None:
        object.__setattr__(self, "beta_min", scalar(self.beta_min))
        object.__setattr__(self, "beta_max", scalar(self.beta_max))
        if not 1 < self.beta_min < self.beta_max:
            raise ValueError("need 1 < beta_min < beta_max")
        if self.points < 2:
            raise ValueError("points must be at least 2")


@dataclass(frozen=True)
class SweepRow:
    beta: Scalar
    model: Model
    status: RowStatus
    n_roots: int | None = None
    F_radial: Scalar | None = None
    F_azimuthal: Scalar | None = None
    Z: Scalar | None = None
    epsilon: Scalar | None = None
    achieved_digits: int | None = None


@dataclass(frozen=True)
class RefineSummary:
    sign_changes: int
    max_abs_Z: Scalar | None


def grid_points(spec: SweepSpec) -> list[Scalar]:
    """Evaluation grid, ascending, endpoints included."""
    with working_digits(spec.ctx.working_digits):
        n = spec.points
        if spec.spacing is Spacing.LINEAR:
            step = (spec.beta_max - spec.beta_min) / (n - 1)
            return [spec.beta_min + i * step for i in range(n)]
        ratio = mpmath.log(spec.beta_max / spec.beta_min) / (n - 1)
        return [spec.beta_min * mpmath.exp(i * ratio) for i in range(n)]


def evaluate_point(beta, model: Model, ctx: PrecisionContext) -> SweepRow:
    """One grid point -> one row; failures become row statuses."""
    b = scalar(beta)
    with working_digits(ctx.working_digits):
        singular_cutoff = mpf(10) ** (-ctx.cap_digits)
        for s in singular_betas_below(b + 2, ctx):
            if abs(b - s) <= singular_cutoff:
                return SweepRow(beta=b, model=model, status=RowStatus.SKIPPED_SINGULAR)
    try:
        result = self_force(b, model, ctx)
    except InvalidBeta:
        return SweepRow(beta=b, model=model, status=RowStatus.SKIPPED_SINGULAR)
    except PrecisionExhausted:
        return SweepRow(beta=b, model=model, status=RowStatus.PRECISION_EXHAUSTED)
    return SweepRow(
        beta=b,
        model=model,
        status=RowStatus.OK,
        n_roots=result.n_roots,
        F_radial=result.F_radial,
        F_azimuthal=result.F_azimuthal,
        Z=result.Z,
        epsilon=result.epsilon,
        achieved_digits=result.achieved_digits,
    )


def _evaluate_packed(args) -> SweepRow:
    beta, model, ctx = args
    return evaluate_point(beta, model, ctx)


def run_sweep(spec: SweepSpec, workers: int = 1):
    """Yield one row per grid point, ascending in beta.

    Rows are a pure function of the spec: the worker count changes wall
    time only. Workers are separate processes (each owns its own global
    mpmath precision state).
    """
    betas = grid_points(spec)
    if workers <= 1:
        for b in betas:
            yield evaluate_point(b, spec.model, spec.ctx)
        return
    jobs = [(b, spec.model, spec.ctx) for b in betas]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(_evaluate_packed, jobs)


# Geometric ladder used to approach a singular velocity from above:
# four points per decade of offset, max_depth decades deep.
REFINE_POINTS_PER_DECADE = 4


def refine_near_singularity(
    k: int,
    window,
    max_depth: int,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
    model: Model = Model.FEYNMAN_WHEELER,
    workers: int = 1,
) -> tuple[list[SweepRow], RefineSummary]:
    """Sample (beta_k, beta_k + window] densely toward the singularity.

    Offsets shrink geometrically from ``window`` over ``max_depth``
    decades; adjacent evaluated rows whose Z values have opposite sign
    are then bisected (in beta, up to max_depth extra levels per pair) to
    localize and count crossings. Returns the rows ascending in beta and
    a summary with the number of adjacent sign changes and the largest
    |Z| seen.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if max_depth < 1:
        raise ValueError("max_depth must be at least 1")
    if ctx.cap_digits < 400:
        raise ValueError("refinement near a singularity needs cap_digits >= 400")
    w = scalar(window)
    if not w > 0:
        raise ValueError("window must be positive")

    beta_k = singular_betas(k, ctx)[-1].beta
    with working_digits(ctx.working_digits):
        n_points = REFINE_POINTS_PER_DECADE * max_depth
        ratio = mpf(10) ** (-mpf(1) / REFINE_POINTS_PER_DECADE)
        offsets = [w * ratio**j for j in range(n_points)]
        betas = sorted(beta_k + off for off in offsets)

    if workers > 1:
        jobs = [(b, model, ctx) for b in betas]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_evaluate_packed, jobs))
    else:
        rows = [evaluate_point(b, model, ctx) for b in betas]

    # Bisect between adjacent opposite-sign rows to pin down crossings.
    def z_sign(row: SweepRow) -> int | None:
        if row.status is not RowStatus.OK or row.Z is None or row.Z == 0:
            return None
        return 1 if row.Z > 0 else -1

    frontier = rows
    for _ in range(max_depth):
        inserted = False
        frontier_sorted = sorted(frontier, key=lambda r: r.beta)
        new_rows: list[SweepRow] = []
        for left, right in zip(frontier_sorted, frontier_sorted[1:]):
            sl, sr = z_sign(left), z_sign(right)
            if sl is None or sr is None or sl == sr:
                continue
            with working_digits(ctx.working_digits):
                mid = (left.beta + right.beta) / 2
            if mid == left.beta or mid == right.beta:
                continue
            new_rows.append(evaluate_point(mid, model, ctx))
            inserted = True
        frontier = frontier_sorted + new_rows
        if not inserted:
            break
    rows = sorted(frontier, key=lambda r: r.beta)

    signs = [s for s in (z_sign(r) for r in rows) if s is not None]
    sign_changes = sum(1 for a, b in zip(signs, signs[1:]) if a != b)
    magnitudes = [abs(r.Z) for r in rows if r.status is RowStatus.OK and r.Z is not None]
    summary = RefineSummary(
        sign_changes=sign_changes,
        max_abs_Z=max(magnitudes) if magnitudes else None,
    )
    return rows, summary
