"""Classification invariants built from basic-slice sign data.

The complete invariant of a minimally twisting toric end is, per maximal
continued fraction block, the number of positive basic slices it contains.
Signs may be shuffled freely inside a block without changing the invariant,
so everything here is phrased in terms of per-block counts.  Infinite sign
tails are kept in a small closed rule class (constant, eventually constant,
alternating, periodic) for which per-block counts stay exactly computable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

from .blocks import BlockDecomposition
from .errors import (
    CoverageMismatchError,
    IllegalTailError,
    IncomparableTargetsError,
    InfiniteBlockError,
    MalformedPathError,
    UndecidableAtHorizonError,
    UndecidableError,
)
from .farey import (
    QuadraticTarget,
    RationalTarget,
    Slope,
    SlopeTarget,
)

POSITIVE = 1
NEGATIVE = -1

DEFAULT_HORIZON = 64


# ---------------------------------------------------------------------------
# sign data


@dataclass(frozen=True)
class AllPositive:
    def sign_at(self, j: int) -> int:
        return POSITIVE


@dataclass(frozen=True)
class AllNegative:
    def sign_at(self, j: int) -> int:
        return NEGATIVE


@dataclass(frozen=True)
class EventuallySign:
    """`after` slices of the opposite sign, then `sign` forever.

    With sign=-1 and after=m this is the m-positives-then-all-negatives tail
    whose infinite-block normal form is PosFinite(m)."""

    sign: int
    after: int

    def __post_init__(self):
        if self.sign not in (POSITIVE, NEGATIVE):
            raise ValueError("sign must be +1 or -1")
        if self.after < 0:
            raise ValueError("after must be >= 0")

    def sign_at(self, j: int) -> int:
        return -self.sign if j < self.after else self.sign


@dataclass(frozen=True)
class Alternating:
    first: int = POSITIVE

    def __post_init__(self):
        if self.first not in (POSITIVE, NEGATIVE):
            raise ValueError("first must be +1 or -1")

    def sign_at(self, j: int) -> int:
        return self.first if j % 2 == 0 else -self.first


@dataclass(frozen=True)
class Periodic:
    pattern: tuple[int, ...]

    def __post_init__(self):
        if not self.pattern:
            raise ValueError("pattern must be nonempty")
        if any(s not in (POSITIVE, NEGATIVE) for s in self.pattern):
            raise ValueError("pattern entries must be +1 or -1")
        object.__setattr__(self, "pattern", tuple(self.pattern))

    def sign_at(self, j: int) -> int:
        return self.pattern[j % len(self.pattern)]


SignTail = AllPositive | AllNegative | EventuallySign | Alternating | Periodic


@dataclass(frozen=True)
class SignData:
    """Signs of the basic slices: an explicit prefix plus an optional tail
    rule for infinite factorizations.  Slice j of an infinite path always
    has a sign; a finite path must be covered exactly by the prefix."""

    prefix: tuple[int, ...] = ()
    tail: SignTail | None = None

    def __post_init__(self):
        if any(s not in (POSITIVE, NEGATIVE) for s in self.prefix):
            raise ValueError("prefix entries must be +1 or -1")
        object.__setattr__(self, "prefix", tuple(self.prefix))

    def sign_at(self, j: int) -> int:
        if j < len(self.prefix):
            return self.prefix[j]
        if self.tail is None:
            raise CoverageMismatchError(f"slice {j} is beyond the sign prefix and there is no tail")
        return self.tail.sign_at(j - len(self.prefix))

    def count_positive(self, lo: int, hi: int) -> int:
        return sum(1 for j in range(lo, hi) if self.sign_at(j) > 0)

    def shifted(self, k: int) -> "SignData":
        """The same sign sequence with the first k slices dropped."""
        if k <= len(self.prefix):
            return SignData(self.prefix[k:], self.tail)
        extra = k - len(self.prefix)
        t = self.tail
        if t is None:
            raise CoverageMismatchError("cannot drop slices beyond a finite sign sequence")
        if isinstance(t, (AllPositive, AllNegative)):
            return SignData((), t)
        if isinstance(t, EventuallySign):
            return SignData((), EventuallySign(t.sign, max(0, t.after - extra)))
        if isinstance(t, Alternating):
            return SignData((), Alternating(t.first if extra % 2 == 0 else -t.first))
        rot = extra % len(t.pattern)
        return SignData((), Periodic(t.pattern[rot:] + t.pattern[:rot]))

    def _tail_suffix_counts(self, from_index: int) -> tuple[float, float]:
        """(positive, negative) counts of the tail from a tail index on;
        values may be math.inf."""
        t = self.tail
        if isinstance(t, AllPositive):
            return (math.inf, 0)
        if isinstance(t, AllNegative):
            return (0, math.inf)
        if isinstance(t, EventuallySign):
            opposite = max(0, t.after - from_index)
            if t.sign == POSITIVE:
                return (math.inf, opposite)
            return (opposite, math.inf)
        if isinstance(t, Alternating):
            return (math.inf, math.inf)
        pats = set(t.pattern)
        if pats == {POSITIVE}:
            return (math.inf, 0)
        if pats == {NEGATIVE}:
            return (0, math.inf)
        return (math.inf, math.inf)


def signs_from_chars(prefix: Iterable[str], tail: SignTail | None = None) -> SignData:
    return SignData(tuple(POSITIVE if c == "+" else NEGATIVE for c in prefix), tail)


# ---------------------------------------------------------------------------
# infinite block normal forms (rational non-attained case)


@dataclass(frozen=True)
class PosFinite:
    """Finitely many positive slices (m of them) in the infinite block."""

    m: int


@dataclass(frozen=True)
class NegFinite:
    """Finitely many negative slices (m of them) in the infinite block."""

    m: int


@dataclass(frozen=True)
class AlternatingForm:
    """Both signs occur infinitely often; the alternating model."""


@dataclass(frozen=True)
class BothFinite:
    """Both counts finite: never produced by construction, always inadmissible.
    Exists so that the admissibility check has something to reject."""

    positive: int
    negative: int


InfiniteBlockForm = PosFinite | NegFinite | AlternatingForm | BothFinite


# ---------------------------------------------------------------------------
# per-block count tails (irrational case)


@dataclass(frozen=True)
class SaturatedCounts:
    """f(i) = length(B_i) - 1 for every tail block (all slices positive)."""


@dataclass(frozen=True)
class ZeroCounts:
    """f(i) = 0 for every tail block (all slices negative)."""


@dataclass(frozen=True)
class PatternCounts:
    """Slice signs follow `pattern` with period len(pattern), phase-anchored
    so that slice index `anchor` reads pattern[0].  The pattern is primitive
    and genuinely mixed (single-sign patterns normalize to the forms above)."""

    pattern: tuple[int, ...]
    anchor: int

    def sign_at(self, j: int) -> int:
        return self.pattern[(j - self.anchor) % len(self.pattern)]

    def count_positive(self, lo: int, hi: int) -> int:
        if hi <= lo:
            return 0
        length = len(self.pattern)
        per_cycle = sum(1 for s in self.pattern if s > 0)
        total = (hi - lo) // length * per_cycle
        rem = (hi - lo) % length
        total += sum(1 for j in range(lo, lo + rem) if self.sign_at(j) > 0)
        return total


CountTail = SaturatedCounts | ZeroCounts | PatternCounts


def _primitive_pattern(pattern: tuple[int, ...]) -> tuple[int, ...]:
    n = len(pattern)
    for p in range(1, n + 1):
        if n % p == 0 and all(pattern[i] == pattern[i % p] for i in range(n)):
            return pattern[:p]
    return pattern


def _normalize_count_tail(pattern: tuple[int, ...], anchor: int) -> CountTail:
    pattern = _primitive_pattern(pattern)
    values = set(pattern)
    if values == {POSITIVE}:
        return SaturatedCounts()
    if values == {NEGATIVE}:
        return ZeroCounts()
    return PatternCounts(pattern, anchor)


# ---------------------------------------------------------------------------
# invariant context


def _target_key(target: SlopeTarget):
    if isinstance(target, RationalTarget):
        return ("rational", target.slope, target.attained)
    if isinstance(target, QuadraticTarget):
        return ("quadratic", target.value.a, target.value.b, target.value.c, target.value.d)
    return ("cf", id(target))


class InvariantContext:
    """Boundary data an invariant classifies against: start slope, start
    division number and the slope at infinity.  Two invariants are only
    comparable when these agree.  Also carries the decomposition the
    invariant was computed from, for lazy re-evaluation."""

    def __init__(self, start: Slope, division: int, target: SlopeTarget,
                 decomposition: BlockDecomposition | None):
        self.start = start
        self.division = division
        self.target = target
        self._decomposition = decomposition

    def key(self):
        return (self.start, self.division, _target_key(self.target))

    def __eq__(self, other):
        return isinstance(other, InvariantContext) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"InvariantContext(start={self.start}, div={self.division}, target={self.target})"

    def decomposition(self) -> BlockDecomposition:
        if self._decomposition is None:
            raise UndecidableError("invariant carries no decomposition handle")
        return self._decomposition


def context_of(decomp: BlockDecomposition, division: int = 1) -> InvariantContext:
    return InvariantContext(decomp.path.start, division, decomp.path.target, decomp)


# ---------------------------------------------------------------------------
# the invariants


@dataclass(frozen=True)
class IrrationalInvariant:
    """Per-block positive-slice counts for an irrational slope at infinity:
    an explicit prefix plus a count tail covering every later block."""

    counts: tuple[int, ...]
    tail: CountTail
    context: InvariantContext = field(compare=False)

    def first_tail_block(self) -> int:
        return len(self.counts) + 1

    def f(self, i: int) -> int:
        """The invariant value on block i (1-based)."""
        if i < 1:
            raise IndexError("block indices are 1-based")
        if i <= len(self.counts):
            return self.counts[i - 1]
        block = self.context.decomposition().block(i)
        lo, hi = block.slice_range
        if isinstance(self.tail, SaturatedCounts):
            return hi - lo
        if isinstance(self.tail, ZeroCounts):
            return 0
        return self.tail.count_positive(lo, hi)


@dataclass(frozen=True)
class RationalNonAttainedInvariant:
    """Counts on the n-1 finite blocks plus the infinite block normal form."""

    finite_f: tuple[int, ...]
    infinite_block: InfiniteBlockForm
    context: InvariantContext = field(compare=False)

    @property
    def n(self) -> int:
        return len(self.finite_f) + 1


@dataclass(frozen=True)
class AttainedInvariant:
    """Counts on every block of the finite path, with the division number of
    the boundary torus at infinity."""

    finite_f: tuple[int, ...]
    boundary_division: int
    context: InvariantContext = field(compare=False)

    def __post_init__(self):
        if self.boundary_division < 1:
            raise ValueError("division number must be >= 1")
        target = self.context.target
        if not isinstance(target, RationalTarget) or not target.attained:
            raise ValueError("attained invariants require an attained rational target")


MinimalInvariant = IrrationalInvariant | RationalNonAttainedInvariant | AttainedInvariant


# ---------------------------------------------------------------------------
# construction from sign data


def _finite_block_count(signs: SignData, lo: int, hi: int) -> int:
    return sum(1 for j in range(lo, hi) if signs.sign_at(j) > 0)


def _build_attained(decomp: BlockDecomposition, signs: SignData, division: int,
                    context: InvariantContext) -> AttainedInvariant:
    path = decomp.path
    while not path.complete:
        path.extend_to(len(path) + 16)
    slices = len(path) - 1
    if signs.tail is not None:
        raise IllegalTailError("finite path, infinite tail")
    if len(signs.prefix) != slices:
        raise CoverageMismatchError(
            f"prefix covers {len(signs.prefix)} slices but the path has {slices}")
    blocks = decomp.all_blocks()
    counts = tuple(_finite_block_count(signs, *b.slice_range) for b in blocks)
    return AttainedInvariant(counts, division, context)


def _build_rational_non_attained(decomp: BlockDecomposition, signs: SignData,
                                 context: InvariantContext) -> RationalNonAttainedInvariant:
    if signs.tail is None:
        raise IllegalTailError("infinite path requires a sign tail")
    blocks = decomp.all_blocks()
    finite = blocks[:-1]
    infinite = blocks[-1]
    assert infinite.infinite
    counts = tuple(_finite_block_count(signs, *b.slice_range) for b in finite)
    lo = infinite.slice_range[0]
    covered = signs.prefix[lo:]
    pos = sum(1 for s in covered if s > 0)
    neg = len(covered) - pos
    tpos, tneg = signs._tail_suffix_counts(max(0, lo - len(signs.prefix)))
    total_pos, total_neg = pos + tpos, neg + tneg
    if total_pos == math.inf and total_neg == math.inf:
        form: InfiniteBlockForm = AlternatingForm()
    elif total_neg == math.inf:
        form = PosFinite(int(total_pos))
    else:
        form = NegFinite(int(total_neg))
    return RationalNonAttainedInvariant(counts, form, context)


def _tail_pure_start(signs: SignData) -> int:
    """First slice index from which the tail rule is a pure constant or a
    pure periodic pattern."""
    base = len(signs.prefix)
    if isinstance(signs.tail, EventuallySign):
        return base + signs.tail.after
    return base


def _tail_pattern_at(signs: SignData, anchor: int) -> CountTail:
    """The count tail induced by the sign tail, anchored at slice `anchor`
    (which must lie in the pure regime)."""
    t = signs.tail
    base = len(signs.prefix)
    if isinstance(t, AllPositive):
        return SaturatedCounts()
    if isinstance(t, AllNegative):
        return ZeroCounts()
    if isinstance(t, EventuallySign):
        return SaturatedCounts() if t.sign == POSITIVE else ZeroCounts()
    if isinstance(t, Alternating):
        first = t.first if (anchor - base) % 2 == 0 else -t.first
        return _normalize_count_tail((first, -first), anchor)
    rot = (anchor - base) % len(t.pattern)
    return _normalize_count_tail(t.pattern[rot:] + t.pattern[:rot], anchor)


def _build_irrational(decomp: BlockDecomposition, signs: SignData,
                      context: InvariantContext) -> IrrationalInvariant:
    if signs.tail is None:
        raise IllegalTailError("infinite path requires a sign tail")
    pure = _tail_pure_start(signs)
    k = 1
    while decomp.block(k).slice_range[0] < pure:
        k += 1
    counts = tuple(
        _finite_block_count(signs, *decomp.block(i).slice_range) for i in range(1, k)
    )
    anchor = decomp.block(k).slice_range[0]
    return IrrationalInvariant(counts, _tail_pattern_at(signs, anchor), context)


def invariant_from_signs(decomp: BlockDecomposition, signs: SignData,
                         boundary_division: int = 1,
                         context: InvariantContext | None = None) -> MinimalInvariant:
    """Per-block positive-slice counts of the decomposition under the given
    sign assignment, reduced to the appropriate normal form."""
    if context is None:
        context = context_of(decomp, 1)
    target = decomp.path.target
    if isinstance(target, RationalTarget):
        if target.attained:
            return _build_attained(decomp, signs, boundary_division, context)
        return _build_rational_non_attained(decomp, signs, context)
    return _build_irrational(decomp, signs, context)


# ---------------------------------------------------------------------------
# equality of invariants


def _require_comparable(a_ctx: InvariantContext, b_ctx: InvariantContext):
    if a_ctx != b_ctx:
        raise IncomparableTargetsError(
            "invariants classify different boundary data: "
            f"{a_ctx} vs {b_ctx}")


def _quadratic_period(decomp: BlockDecomposition, value, from_block: int,
                      phase_mod: int, horizon: int) -> tuple[int, int]:
    """Indices (i0, i1) with identical block state, so blocks repeat with
    period i1 - i0 from i0 on.  The state is the normalized image of the
    target under the block witness together with the slice phase."""
    seen: dict = {}
    i = from_block
    while i <= from_block + max(horizon, 8) * 4:
        b = decomp.block(i)
        image = value.mobius(b.witness)
        key = ((image.a, image.b, image.c, image.d), b.slice_range[0] % phase_mod)
        if key in seen:
            return seen[key], i
        seen[key] = i
        i += 1
    raise UndecidableAtHorizonError("no block periodicity detected", horizon)


def _patterns_identical(p1: PatternCounts, p2: PatternCounts, from_slice: int) -> bool:
    period = math.lcm(len(p1.pattern), len(p2.pattern))
    return all(p1.sign_at(j) == p2.sign_at(j) for j in range(from_slice, from_slice + period))


def _equivalent_irrational(a: IrrationalInvariant, b: IrrationalInvariant,
                           horizon: int) -> bool:
    k = max(a.first_tail_block(), b.first_tail_block())
    for i in range(1, k):
        if a.f(i) != b.f(i):
            return False
    ta, tb = a.tail, b.tail
    if isinstance(ta, SaturatedCounts) and isinstance(tb, SaturatedCounts):
        return True
    if isinstance(ta, ZeroCounts) and isinstance(tb, ZeroCounts):
        return True
    # a mixed pattern disagrees with a constant tail somewhere: the blocks
    # partition the slices, so every pattern residue is eventually hit
    if not isinstance(ta, PatternCounts) or not isinstance(tb, PatternCounts):
        return False
    decomp = a.context.decomposition()
    anchor = decomp.block(k).slice_range[0]
    if _patterns_identical(ta, tb, anchor):
        return True
    # the suffix of the path past block i is determined by the image of the
    # target under the block witness, so state repeats are decided against
    # the normalized target the decomposition actually walks toward
    target = decomp.path.target
    if isinstance(target, QuadraticTarget):
        phase = math.lcm(len(ta.pattern), len(tb.pattern))
        i0, i1 = _quadratic_period(decomp, target.value, k, phase, horizon)
        return all(a.f(i) == b.f(i) for i in range(k, i1))
    for i in range(k, k + horizon):
        if a.f(i) != b.f(i):
            return False
    raise UndecidableAtHorizonError(
        "count tails differ as rules but no differing block was found", horizon)


def equivalent(a, b, horizon: int = DEFAULT_HORIZON) -> bool:
    """Equality of classification invariants, the proper-isotopy-rel-boundary
    classification for ends sharing the same boundary data and target."""
    from .ends import InfiniteDivision, MinimallyTwisting, NonMinimallyTwisting

    if isinstance(a, MinimallyTwisting):
        a = a.invariant
    if isinstance(b, MinimallyTwisting):
        b = b.invariant
    if isinstance(a, NonMinimallyTwisting) or isinstance(b, NonMinimallyTwisting):
        if not (isinstance(a, NonMinimallyTwisting) and isinstance(b, NonMinimallyTwisting)):
            _require_comparable(a.context, b.context)
            return False
        _require_comparable(a.context, b.context)
        if (a.rotativity, a.sign) != (b.rotativity, b.sign):
            return False
        if a.residual is None and b.residual is None:
            return True
        if (a.residual is None) != (b.residual is None):
            return False
        return equivalent(a.residual, b.residual, horizon)
    if isinstance(a, InfiniteDivision) or isinstance(b, InfiniteDivision):
        raise UndecidableError(
            "equivalence of infinite-division-at-infinity ends is an open question")

    _require_comparable(a.context, b.context)
    if type(a) is not type(b):
        return False
    if isinstance(a, AttainedInvariant):
        return a.finite_f == b.finite_f and a.boundary_division == b.boundary_division
    if isinstance(a, RationalNonAttainedInvariant):
        return a.finite_f == b.finite_f and a.infinite_block == b.infinite_block
    return _equivalent_irrational(a, b, horizon)


# ---------------------------------------------------------------------------
# admissibility (the F(r) constraints)


def admissible(inv, decomp: BlockDecomposition) -> bool:
    """True iff the invariant satisfies every per-block constraint of the
    decomposition; every admissible invariant is realized by a tight end."""
    from .ends import InfiniteDivision, MinimallyTwisting, NonMinimallyTwisting

    if isinstance(inv, MinimallyTwisting):
        inv = inv.invariant
    if isinstance(inv, NonMinimallyTwisting):
        return inv.residual is None or admissible(inv.residual, decomp)
    if isinstance(inv, InfiniteDivision):
        return True

    if isinstance(inv, IrrationalInvariant):
        for i, c in enumerate(inv.counts, start=1):
            block = decomp.block(i)
            if block.infinite or not 0 <= c <= block.length - 1:
                return False
        return True
    if isinstance(inv, RationalNonAttainedInvariant):
        blocks = decomp.all_blocks()
        if not blocks[-1].infinite or len(blocks) - 1 != len(inv.finite_f):
            return False
        for c, block in zip(inv.finite_f, blocks):
            if not 0 <= c <= block.length - 1:
                return False
        if isinstance(inv.infinite_block, BothFinite):
            return False
        if isinstance(inv.infinite_block, (PosFinite, NegFinite)) and inv.infinite_block.m < 0:
            return False
        return True
    blocks = decomp.all_blocks()
    if any(b.infinite for b in blocks) or len(blocks) != len(inv.finite_f):
        return False
    return all(0 <= c <= b.length - 1 for c, b in zip(inv.finite_f, blocks))


# ---------------------------------------------------------------------------
# counting


def count_invariants(blocks_or_lengths, k: int | None = None) -> int:
    """Number of admissible count assignments on the first k finite blocks:
    the product of the block lengths."""
    if isinstance(blocks_or_lengths, BlockDecomposition):
        if k is None:
            raise ValueError("pass k when counting over a decomposition")
        lengths = []
        for b in blocks_or_lengths.blocks_up_to(k):
            if b.infinite:
                raise InfiniteBlockError("count_invariants needs finite blocks")
            lengths.append(b.length)
        if len(lengths) < k:
            raise IndexError(f"decomposition has only {len(lengths)} blocks")
    else:
        lengths = [int(x) for x in blocks_or_lengths]
        if any(m < 1 for m in lengths):
            raise ValueError("block lengths must be >= 1")
    total = 1
    for m in lengths:
        total *= m
    return total


# ---------------------------------------------------------------------------
# relative Euler class


@dataclass(frozen=True)
class EulerClass:
    """Integer vector in the first homology of the torus fiber."""

    x: int
    y: int

    def __neg__(self) -> "EulerClass":
        return EulerClass(-self.x, -self.y)

    def as_pair(self) -> tuple[int, int]:
        return (self.x, self.y)


def _coherent_vectors(path, count: int) -> list[tuple[int, int]]:
    """Integer vector lifts of the first `count` vertices, chosen so that
    consecutive lifts have determinant +1.  Within one block the lift
    differences are then constant, which is what makes the class invariant
    under within-block sign shuffles."""
    v = path.vertex(0)
    lifts = [(v.p, v.q)]
    for i in range(1, count):
        s = path.vertex(i)
        prev = lifts[-1]
        d = prev[0] * s.q - s.p * prev[1]
        if d == 1:
            lifts.append((s.p, s.q))
        elif d == -1:
            lifts.append((-s.p, -s.q))
        else:
            raise MalformedPathError(f"vertices {i - 1}, {i} are not a Farey edge")
    return lifts


def euler_class(decomp: BlockDecomposition, signs: SignData,
                horizon: int = DEFAULT_HORIZON) -> EulerClass:
    """Sum over basic slices of sign * (v(s_next) - v(s_prev)) with
    v(p/q) = (q, p), truncated at `horizon` slices for infinite paths."""
    path = decomp.path
    if isinstance(path.target, RationalTarget) and path.target.attained:
        while not path.complete:
            path.extend_to(len(path) + 16)
        slices = len(path) - 1
    else:
        slices = horizon
        path.extend_to(slices + 1)
    lifts = _coherent_vectors(path, slices + 1)
    x = y = 0
    for j in range(slices):
        s = signs.sign_at(j)
        (p0, q0), (p1, q1) = lifts[j], lifts[j + 1]
        x += s * (q1 - q0)
        y += s * (p1 - p0)
    return EulerClass(x, y)
