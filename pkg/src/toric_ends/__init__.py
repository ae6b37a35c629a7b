"""Exact classification data for tight contact structures on toric ends."""

from .farey import (
    INFINITY,
    CFTarget,
    FareyPath,
    GL2Z,
    QuadraticTarget,
    QuadraticValue,
    RationalTarget,
    Slope,
    apply_matrix,
    clockwise_between,
    farey_edge,
    farey_sequence,
    next_toward,
    parse_slope,
    quadratic_cf_target,
)
from .blocks import Block, BlockDecomposition, block_slice_count, decompose, n_of_r
from .invariants import (
    AllNegative,
    AllPositive,
    Alternating,
    AlternatingForm,
    AttainedInvariant,
    EulerClass,
    EventuallySign,
    IrrationalInvariant,
    NegFinite,
    Periodic,
    PosFinite,
    RationalNonAttainedInvariant,
    SignData,
    admissible,
    count_invariants,
    equivalent,
    euler_class,
    invariant_from_signs,
    signs_from_chars,
)
from .ends import (
    EndDescription,
    ExtendsByConstruction,
    InfiniteDivision,
    InfiniteRotativity,
    MinimallyTwisting,
    NestedAnnuli,
    NonMinimallyTwisting,
    NoTightExtension,
    TorusRecord,
    Unknown,
    classify,
    division_at_infinity,
    extension_obstruction,
    is_minimally_twisting,
    non_extendable_family,
    slope_at_infinity,
    validate,
)
from .reduce import (
    OpenToricAnnulus,
    SolidTorusClass,
    SolidTorusEnd,
    classify_solid_torus,
    normalize_rotativity,
    solid_torus_factor,
    t2xr_equivalent,
)

__all__ = [name for name in dir() if not name.startswith("_")]
