"""Computing with one-dimensional polyhedral metric currents.

Library surface: ambient spaces and the Kuratowski embedding (geometry),
molecules and polyhedral 1-currents with boundary / mass / restriction /
pushforward / evaluation (currents), exact Kantorovich-Rubinstein norms
with dual certificates (transport), optimal and lifted tent primitives
(primitives), cycle completion (cyclefill), Smirnov path/loop
decompositions (decompose), and the SBV curve representation pipeline
(sbv). The CLI lives in onecurrent.cli.
"""

from .config import get_tolerance, set_tolerance
from .currents import (
    AffineMap,
    MassMeasure,
    MetricForm,
    Molecule,
    Piece,
    PolyhedralCurrent,
    boundary,
    canonicalize,
    evaluate,
    kr_norm_of_boundary,
    mass,
    pushforward,
    pushforward_molecule,
    restrict,
)
from .cyclefill import fill_flat, fill_lifted, x0_restriction
from .decompose import FlowGraph, WeightedCurve, curve_current, smirnov_decompose
from .errors import (
    CheckFailure,
    NoTraceError,
    OneCurrentError,
    SolverError,
    SpaceError,
    ValidationError,
)
from .geometry import (
    AmbientSpace,
    Segment,
    distance,
    kuratowski_embed,
    segment_length,
)
from .primitives import LiftedSpace, lift_current, optimal_primitive, tent_primitive
from .sbv import (
    CurveRepresentation,
    MonotoneCadlag,
    SbvCurve,
    area_check,
    beta,
    fragment_of,
    sbv_boundary,
    sbv_current_a,
    sbv_represent,
    transport_param,
)
from .transport import TransportPlan, dipole_decomposition, f0_norm, kr_norm, kr_norm_1d, solve_plan

__version__ = "0.1.0"
