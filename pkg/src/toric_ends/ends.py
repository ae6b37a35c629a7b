"""Symbolic toric end descriptions, their validation, and classification.

An end description records a convex boundary torus, the limit slope of the
factorization, the basic-slice signs, the division numbers along the way,
and any full-twist (rotative) layers at the boundary.  Classification
normalizes the boundary to slope -1 with division number 1 by a stored
change of basis, then dispatches on division at infinity, rotativity, and
the target kind.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Union

from .blocks import decompose
from .errors import (
    InsufficientBlocksError,
    ToricEndError,
    ValidationError,
)
from .farey import (
    GL2Z,
    FareyPath,
    QuadraticTarget,
    RationalTarget,
    Slope,
    SlopeTarget,
    _egcd,
)
from .invariants import (
    POSITIVE,
    NEGATIVE,
    DEFAULT_HORIZON,
    AllNegative,
    AllPositive,
    Alternating,
    AlternatingForm,
    AttainedInvariant,
    BothFinite,
    InvariantContext,
    IrrationalInvariant,
    MinimalInvariant,
    PosFinite,
    RationalNonAttainedInvariant,
    SaturatedCounts,
    SignData,
    ZeroCounts,
    _quadratic_period,
    invariant_from_signs,
)

BASE_SLOPE = Slope(-1, 1)


# ---------------------------------------------------------------------------
# description pieces


@dataclass(frozen=True)
class TorusRecord:
    """A convex torus: its slope and half the number of dividing curves."""

    slope: Slope
    division: int = 1

    def __post_init__(self):
        if self.division < 1:
            raise ValueError("division number must be >= 1")


@dataclass(frozen=True)
class ConstantDivision:
    value: int = 1

    def __post_init__(self):
        if self.value < 1:
            raise ValueError("division number must be >= 1")


@dataclass(frozen=True)
class EventuallyConstantDivision:
    after: int
    value: int
    prefix: tuple[int, ...] = ()

    def __post_init__(self):
        if self.value < 1 or any(v < 1 for v in self.prefix):
            raise ValueError("division numbers must be >= 1")


@dataclass(frozen=True)
class StrictlyIncreasingDivision:
    pass


DivisionTail = Union[ConstantDivision, EventuallyConstantDivision, StrictlyIncreasingDivision]


@dataclass(frozen=True)
class InfiniteRotativity:
    sign: int

    def __post_init__(self):
        if self.sign not in (POSITIVE, NEGATIVE):
            raise ValueError("sign must be +1 or -1")


RotativeLayers = Union[tuple, InfiniteRotativity]


@dataclass(frozen=True)
class EndDescription:
    """A factorization of a toric end into convex tori, given symbolically."""

    boundary: TorusRecord
    target: SlopeTarget
    signs: SignData = SignData()
    division_tail: DivisionTail = ConstantDivision(1)
    rotative: RotativeLayers = ()

    def __post_init__(self):
        if isinstance(self.rotative, tuple):
            if any(s not in (POSITIVE, NEGATIVE) for s in self.rotative):
                raise ValueError("rotative layer signs must be +1 or -1")

    def change_of_basis(self) -> GL2Z:
        """The stored normalization: the canonical SL2(Z) element carrying
        the boundary slope to -1."""
        return basis_change(self.boundary.slope)


# ---------------------------------------------------------------------------
# invariant wrappers


@dataclass(frozen=True)
class NestedAnnuli:
    """Descriptor of the nested convex-annuli family attached to an end with
    infinite division number at infinity: Legendrian boundary twisting starts
    at tb = -1 and climbs by one per annulus."""

    tb_start: int = -1
    tb_step: int = 1


@dataclass(frozen=True)
class MinimallyTwisting:
    invariant: MinimalInvariant

    @property
    def context(self) -> InvariantContext:
        return self.invariant.context


@dataclass(frozen=True)
class NonMinimallyTwisting:
    rotativity: int | float
    sign: int
    residual: "EndInvariant | None"
    context: InvariantContext = field(compare=False)


@dataclass(frozen=True)
class InfiniteDivision:
    """Terminal marker: the classification beyond the nested-annuli data is
    an open question, so no equivalence is ever claimed between two of these."""

    descriptor: NestedAnnuli
    context: InvariantContext = field(compare=False)


EndInvariant = Union[MinimallyTwisting, NonMinimallyTwisting, InfiniteDivision]


# ---------------------------------------------------------------------------
# normalization


def basis_change(boundary_slope: Slope) -> GL2Z:
    """The canonical SL2(Z) element sending the boundary slope to -1.

    Composed from a Bezout matrix sending the slope to oo and the fixed
    matrix sending oo to -1; for boundary -1 this is the identity."""
    p, q = boundary_slope.p, boundary_slope.q
    g, x, y = _egcd(p, q)
    assert g == 1
    to_inf = GL2Z(x, y, -q, p)
    inf_to_base = GL2Z(-1, -1, 1, 0)
    return inf_to_base @ to_inf


def normalized_target(e: EndDescription) -> SlopeTarget:
    if e.boundary.slope == BASE_SLOPE:
        return e.target
    return e.target.transform(basis_change(e.boundary.slope))


# ---------------------------------------------------------------------------
# the section-3 invariants of a description


def division_at_infinity(e: EndDescription) -> int | float:
    """Eventual minimum of the division numbers along the factorization."""
    tail = e.division_tail
    if isinstance(tail, ConstantDivision):
        return tail.value
    if isinstance(tail, EventuallyConstantDivision):
        return tail.value
    return math.inf


def is_minimally_twisting(e: EndDescription) -> bool:
    """No rotative layers; path-based descriptions stay inside one arc of
    the circle of slopes, so they never complete a circuit by themselves."""
    return isinstance(e.rotative, tuple) and len(e.rotative) == 0


def _is_attained(target: SlopeTarget) -> bool:
    return isinstance(target, RationalTarget) and target.attained


def _path_slice_count(e: EndDescription) -> int:
    """Number of basic slices of the finite factorization of an attained
    description (0 for the collar whose target equals the boundary)."""
    target = normalized_target(e)
    assert _is_attained(target)
    if target.slope == BASE_SLOPE:
        return 0
    path = FareyPath(BASE_SLOPE, target)
    while not path.complete:
        path.extend_to(len(path) + 16)
    return len(path) - 1


def validate(e: EndDescription) -> list[str]:
    """Structural violations of the description; empty when legal."""
    violations: list[str] = []
    if e.boundary.division != 1:
        violations.append("boundary division must be 1 (higher starting division is out of scope)")
    if isinstance(e.rotative, tuple) and len({s for s in e.rotative}) > 1:
        violations.append("nonminimal sign conflict: rotative layers of both signs")

    target = e.target
    attained = _is_attained(target)
    d_inf = division_at_infinity(e)

    if attained:
        if e.signs.tail is not None:
            violations.append("finite path, infinite tail")
        elif e.boundary.division == 1:
            slices = _path_slice_count(e)
            if len(e.signs.prefix) != slices:
                violations.append(
                    f"sign coverage mismatch: prefix has {len(e.signs.prefix)} signs, "
                    f"path has {slices} basic slices")
    else:
        if e.signs.tail is None:
            violations.append("infinite path requires a sign tail")
        if isinstance(target, RationalTarget) and target.slope == e.boundary.slope:
            violations.append("degenerate target equals the boundary slope")
        if d_inf is math.inf:
            violations.append("division tail inconsistent with target kind: "
                              "infinite division needs an attained slope")
        elif d_inf != 1:
            violations.append("division tail inconsistent with target kind: "
                              "non-attained ends keep division 1")
    return violations


def slope_at_infinity(e: EndDescription) -> SlopeTarget:
    """The limit slope of the factorization, after validating convergence of
    the underlying net of slopes."""
    violations = validate(e)
    if violations:
        raise ValidationError(violations)
    return e.target


# ---------------------------------------------------------------------------
# classification


def classify(e: EndDescription) -> EndInvariant:
    """Dispatch to the complete invariant of the end."""
    violations = validate(e)
    if violations:
        raise ValidationError(violations)

    base_context = InvariantContext(e.boundary.slope, e.boundary.division, e.target, None)
    d_inf = division_at_infinity(e)
    if d_inf is math.inf:
        return InfiniteDivision(NestedAnnuli(), base_context)

    if isinstance(e.rotative, InfiniteRotativity):
        return NonMinimallyTwisting(math.inf, e.rotative.sign, None, base_context)
    if len(e.rotative) > 0:
        residual = classify(replace(e, rotative=()))
        return NonMinimallyTwisting(len(e.rotative), e.rotative[0], residual, base_context)

    target = normalized_target(e)
    if _is_attained(target) and target.slope == BASE_SLOPE:
        # vertically invariant collar: no blocks, empty invariant
        return MinimallyTwisting(AttainedInvariant((), d_inf, base_context))

    path = FareyPath(BASE_SLOPE, target)
    decomp = decompose(path)
    context = InvariantContext(e.boundary.slope, e.boundary.division, e.target, decomp)
    inv = invariant_from_signs(decomp, e.signs, boundary_division=d_inf if _is_attained(target) else 1,
                               context=context)
    return MinimallyTwisting(inv)


# ---------------------------------------------------------------------------
# extension obstructions


@dataclass(frozen=True)
class NoTightExtension:
    reason: str


@dataclass(frozen=True)
class ExtendsByConstruction:
    pass


@dataclass(frozen=True)
class Unknown:
    horizon: int


ObstructionResult = Union[NoTightExtension, ExtendsByConstruction, Unknown]


def _strictly_between(inv: IrrationalInvariant, i: int) -> bool:
    block = inv.context.decomposition().block(i)
    return 0 < inv.f(i) < block.length - 1


def _irrational_obstruction(inv: IrrationalInvariant, horizon: int) -> ObstructionResult:
    decomp = inv.context.decomposition()
    tail = inv.tail
    if isinstance(tail, (SaturatedCounts, ZeroCounts)):
        extreme = (lambda i, c: c == decomp.block(i).length - 1) if isinstance(tail, SaturatedCounts) \
            else (lambda i, c: c == 0)
        if all(extreme(i, c) for i, c in enumerate(inv.counts, start=1)):
            return ExtendsByConstruction()
        return Unknown(horizon)
    target = decomp.path.target  # normalized: block states are images of it
    if isinstance(target, QuadraticTarget):
        k = inv.first_tail_block()
        i0, i1 = _quadratic_period(decomp, target.value, k, len(tail.pattern), horizon)
        if any(_strictly_between(inv, i) for i in range(i0, i1)):
            return NoTightExtension(
                "per-block count is neither maximal nor minimal for infinitely many blocks")
        return Unknown(horizon)
    return Unknown(horizon)


def extension_obstruction(inv, horizon: int = DEFAULT_HORIZON) -> ObstructionResult:
    """Decide whether the classified end can sit inside a tight toric end on
    the full half-open cylinder, where the theory decides it."""
    if isinstance(inv, MinimallyTwisting):
        inv = inv.invariant
    if isinstance(inv, (NonMinimallyTwisting, InfiniteDivision)):
        raise ValueError("extension obstructions apply to minimally twisting invariants")

    if isinstance(inv, AttainedInvariant):
        return ExtendsByConstruction()
    if isinstance(inv, RationalNonAttainedInvariant):
        form = inv.infinite_block
        if isinstance(form, AlternatingForm):
            return NoTightExtension("both infinite-block slice counts are infinite")
        if isinstance(form, BothFinite):
            raise ValueError("inadmissible invariant: both infinite-block counts finite")
        if form.m >= 1:
            kind = "positive" if isinstance(form, PosFinite) else "negative"
            return NoTightExtension(
                f"infinite block has {form.m} {kind} slices and infinitely many of the other sign")
        return ExtendsByConstruction()
    return _irrational_obstruction(inv, horizon)


# ---------------------------------------------------------------------------
# non-extendable families


def _rational_family_description(target: RationalTarget, start: Slope,
                                 finite_slices: int, member: int) -> EndDescription:
    """Members enumerate AlternatingForm, PosFinite(1), NegFinite(1),
    PosFinite(2), ... with zero counts on the finite blocks."""
    base = (NEGATIVE,) * finite_slices
    if member == 0:
        signs = SignData(base, Alternating())
    else:
        m = (member + 1) // 2
        if member % 2 == 1:
            signs = SignData(base + (POSITIVE,) * m, AllNegative())
        else:
            signs = SignData(base + (NEGATIVE,) * m, AllPositive())
    return EndDescription(TorusRecord(start, 1), target, signs)


def non_extendable_family(target: SlopeTarget, k: int, start: Slope = BASE_SLOPE,
                          horizon: int = DEFAULT_HORIZON) -> list[EndInvariant]:
    """k pairwise non-equivalent invariants, each certified NoTightExtension."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return []
    members: list[EndInvariant] = []

    if isinstance(target, RationalTarget):
        if target.attained:
            raise ToricEndError("non-extendable families need a non-attained or irrational target")
        path = FareyPath(start, target)
        decomp = decompose(path)
        blocks = decomp.all_blocks()
        finite_slices = blocks[-1].slice_range[0]
        for member in range(k):
            e = _rational_family_description(target, start, finite_slices, member)
            inv = classify(e)
            result = extension_obstruction(inv, horizon)
            if not isinstance(result, NoTightExtension):
                raise InsufficientBlocksError(
                    f"family member {member} failed certification: {result}")
            members.append(inv)
        return members

    path = FareyPath(start, target)
    decomp = decompose(path)
    lengths: list[int] = []
    product = 1
    while product < k:
        if len(lengths) >= horizon:
            raise InsufficientBlocksError(
                f"cannot distinguish {k} invariants within {horizon} blocks")
        block = decomp.block(len(lengths) + 1)
        lengths.append(block.length)
        product *= block.length
    counts = [0] * len(lengths)
    while len(members) < k:
        prefix: list[int] = []
        for c, block_index in zip(counts, range(1, len(lengths) + 1)):
            slices = lengths[block_index - 1] - 1
            prefix.extend([POSITIVE] * c + [NEGATIVE] * (slices - c))
        e = EndDescription(TorusRecord(start, 1), target,
                           SignData(tuple(prefix), Alternating()))
        inv = classify(e)
        result = extension_obstruction(inv, horizon)
        if not isinstance(result, NoTightExtension):
            raise InsufficientBlocksError(
                f"alternating-tail members toward {target} are not certifiable: {result}")
        members.append(inv)
        # lexicographic increment over per-block count ranges
        for j in range(len(counts) - 1, -1, -1):
            if counts[j] + 1 < lengths[j]:
                counts[j] += 1
                break
            counts[j] = 0
        else:
            if len(members) < k:
                raise InsufficientBlocksError(
                    f"count space exhausted after {len(members)} members")
    return members
