"""Self-force of a classical charged tachyon on a circular superluminal
orbit, under time-symmetric (Feynman-Wheeler) and causal (retarded-only)
electrodynamics, computed in arbitrary precision."""

from .errors import (
    InvalidBeta,
    NearSingularBeta,
    NoConvergence,
    PrecisionExhausted,
    RootIsolationError,
    SingularCone,
    TachyonError,
    ZeroZ,
)
from .fields import (
    FieldSample,
    Potentials,
    fields_by_finite_difference,
    lienard_wiechert,
    lorentz_force,
    potentials,
    retarded_time_near,
)
from .force import ForceResult, Model, epsilon_of_beta, self_force, z_of_beta
from .kinematics import (
    CircularWorldline,
    Dynamics,
    LightconeVertex,
    PhysicalScale,
    Side,
    equilibrium_radius,
    vertex,
)
from .nullshell import (
    Multiplicity,
    NullRoot,
    SingularVelocity,
    f_null,
    find_roots,
    h_tangency,
    root_count,
    singular_betas,
)
from .precision import (
    DEFAULT_CONTEXT,
    PrecisionContext,
    Scalar,
    Vec3,
    format_scalar,
    scalar,
    stabilize,
    stabilize_components,
    working_digits,
)
from .sweep import (
    RefineSummary,
    RowStatus,
    Spacing,
    SweepRow,
    SweepSpec,
    refine_near_singularity,
    run_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "CircularWorldline",
    "DEFAULT_CONTEXT",
    "Dynamics",
    "FieldSample",
    "ForceResult",
    "InvalidBeta",
    "LightconeVertex",
    "Model",
    "Multiplicity",
    "NearSingularBeta",
    "NoConvergence",
    "NullRoot",
    "PhysicalScale",
    "Potentials",
    "PrecisionContext",
    "PrecisionExhausted",
    "RefineSummary",
    "RootIsolationError",
    "RowStatus",
    "Scalar",
    "Side",
    "SingularCone",
    "SingularVelocity",
    "Spacing",
    "SweepRow",
    "SweepSpec",
    "TachyonError",
    "Vec3",
    "ZeroZ",
    "epsilon_of_beta",
    "equilibrium_radius",
    "f_null",
    "fields_by_finite_difference",
    "find_roots",
    "format_scalar",
    "h_tangency",
    "lienard_wiechert",
    "lorentz_force",
    "potentials",
    "refine_near_singularity",
    "retarded_time_near",
    "root_count",
    "run_sweep",
    "scalar",
    "self_force",
    "singular_betas",
    "stabilize",
    "stabilize_components",
    "vertex",
    "working_digits",
    "z_of_beta",
]
