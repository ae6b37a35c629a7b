"""Exact slope arithmetic on the Farey graph and minimal clockwise slope sequences.

Orientation convention used by the whole package: the circle of slopes is
the extended rationals with oo = 1/0 sitting between the positive and the
negative end.  Traversing clockwise means numerically decreasing, so the
clockwise arc from -1 toward -2 runs through -3/2, and the clockwise arc
from -1 toward oo runs through -2, -3, ...  Every comparison below is an
exact integer sign test; floating point never enters path generation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Iterator

from .errors import DegenerateTargetError, MalformedPathError, ToricEndError


# ---------------------------------------------------------------------------
# slopes


@dataclass(frozen=True)
class Slope:
    """An extended rational p/q in lowest terms, q >= 0, with oo = 1/0."""

    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if p == 0 and q == 0:
            raise ValueError("slope 0/0 is not a point of the circle")
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        g = gcd(abs(p), q)
        if g > 1:
            p, q = p // g, q // g
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def is_infinite(self) -> bool:
        return self.q == 0

    def as_fraction(self) -> Fraction:
        if self.q == 0:
            raise ValueError("oo has no finite value")
        return Fraction(self.p, self.q)

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"

    def __repr__(self) -> str:
        return f"Slope({self.p}, {self.q})"


INFINITY = Slope(1, 0)


def parse_slope(text: str) -> Slope:
    """Parse "p/q" (or a bare integer) into a Slope."""
    s = text.strip()
    if "/" in s:
        num, den = s.split("/", 1)
        return Slope(int(num), int(den))
    return Slope(int(s), 1)


def det(a: Slope, b: Slope) -> int:
    """Determinant of the canonical integer vectors of two slopes."""
    return a.p * b.q - b.p * a.q


def farey_edge(a: Slope, b: Slope) -> bool:
    """True iff the two distinct slopes are joined by an arc of the graph."""
    if a == b:
        raise ValueError("farey_edge needs distinct slopes")
    return abs(det(a, b)) == 1


def cw(a: Slope, b: Slope, c: Slope) -> bool:
    """True iff b lies strictly inside the clockwise arc from a to c.

    The sign of det(a,b)*det(b,c)*det(c,a) is independent of the choice of
    vector representatives, so this is a well defined circular orientation.
    """
    return det(a, b) * det(b, c) * det(c, a) < 0


def clockwise_between(a: Slope, b: Slope, x: Slope) -> bool:
    """True iff x lies on the closed clockwise arc from a to b."""
    if a == b:
        raise ValueError("clockwise_between needs distinct endpoints")
    return x == a or x == b or cw(a, x, b)


# ---------------------------------------------------------------------------
# GL2(Z)


@dataclass(frozen=True)
class GL2Z:
    """Integer matrix [[a, b], [c, d]] with determinant +-1."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.det not in (1, -1):
            raise ValueError(f"determinant must be +-1, got {self.det}")

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @classmethod
    def identity(cls) -> "GL2Z":
        return cls(1, 0, 0, 1)

    def apply(self, s: Slope) -> Slope:
        return Slope(self.a * s.p + self.b * s.q, self.c * s.p + self.d * s.q)

    def __matmul__(self, other: "GL2Z") -> "GL2Z":
        return GL2Z(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "GL2Z":
        e = self.det
        return GL2Z(e * self.d, -e * self.b, -e * self.c, e * self.a)

    def canonical(self) -> "GL2Z":
        """Sign-normalized representative: first nonzero entry positive."""
        for x in (self.a, self.b, self.c, self.d):
            if x != 0:
                if x < 0:
                    return GL2Z(-self.a, -self.b, -self.c, -self.d)
                return self
        raise AssertionError("zero matrix")

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)


def apply_matrix(m: GL2Z, s: Slope) -> Slope:
    return m.apply(s)


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r != 0:
        quot = old_r // r
        old_r, r = r, old_r - quot * r
        old_x, x = x, old_x - quot * x
        old_y, y = y, old_y - quot * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def _bezout_partner(s: Slope) -> tuple[int, int]:
    """An integer vector u with det(u, s) = -1, as (u_p, u_q)."""
    g, x, y = _egcd(s.p, s.q)
    assert g == 1
    return (-y, x)


# ---------------------------------------------------------------------------
# exact quadratic irrationals


def _squarefree_split(d: int) -> tuple[int, int]:
    """d = f*f * d0 with d0 squarefree; returns (f, d0)."""
    f, d0, k = 1, d, 2
    while k * k <= d0:
        while d0 % (k * k) == 0:
            d0 //= k * k
            f *= k
        k += 1
    return f, d0


def _surd_sign(a: int, b: int, d: int) -> int:
    """Exact sign of a + b*sqrt(d), d > 1 squarefree (so it is never 0
    unless a = b = 0)."""
    if a >= 0 and b >= 0:
        return 1 if (a or b) else 0
    if a <= 0 and b <= 0:
        return -1 if (a or b) else 0
    lhs, rhs = a * a, b * b * d
    if a > 0:
        return 1 if lhs > rhs else -1
    return -1 if lhs > rhs else 1


@dataclass(frozen=True)
class QuadraticValue:
    """The exact irrational (a + b*sqrt(d)) / c with b != 0, c > 0, d squarefree."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        a, b, c, d = self.a, self.b, self.c, self.d
        if d <= 0:
            raise ValueError("d must be positive")
        if b == 0:
            raise ValueError("b = 0 would make the value rational")
        if c == 0:
            raise ValueError("c must be nonzero")
        f, d0 = _squarefree_split(d)
        if d0 == 1:
            raise ValueError("sqrt(d) is an integer; value is rational")
        b, d = b * f, d0
        if c < 0:
            a, b, c = -a, -b, -c
        g = gcd(gcd(abs(a), abs(b)), c)
        if g > 1:
            a, b, c = a // g, b // g, c // g
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    def sign(self) -> int:
        return _surd_sign(self.a, self.b, self.d)

    def cmp_fraction(self, p: int, q: int) -> int:
        """Exact sign of (value - p/q), q > 0."""
        return _surd_sign(self.a * q - p * self.c, self.b * q, self.d)

    def floor(self) -> int:
        if self.b > 0:
            root = isqrt(self.b * self.b * self.d)
        else:
            root = -isqrt(self.b * self.b * self.d) - 1
        n = (self.a + root) // self.c
        while self.cmp_fraction(n + 1, 1) >= 0:
            n += 1
        while self.cmp_fraction(n, 1) < 0:
            n -= 1
        return n

    def mobius(self, m: GL2Z) -> "QuadraticValue":
        """(A*t + B) / (C*t + D), exactly, for t = this value."""
        num_a = m.a * self.a + m.b * self.c
        num_b = m.a * self.b
        den_a = m.c * self.a + m.d * self.c
        den_b = m.c * self.b
        # multiply by the conjugate of the denominator
        norm = den_a * den_a - den_b * den_b * self.d
        if norm == 0:
            raise ZeroDivisionError("Mobius image of an irrational cannot have zero denominator")
        out_a = num_a * den_a - num_b * den_b * self.d
        out_b = num_b * den_a - num_a * den_b
        return QuadraticValue(out_a, out_b, norm, self.d)

    def __float__(self) -> float:
        return (self.a + self.b * self.d ** 0.5) / self.c

    def __str__(self) -> str:
        return f"({self.a} + {self.b}*sqrt({self.d}))/{self.c}"

    def cf_coefficients(self) -> Iterator[int]:
        """Simple continued fraction coefficients, generated forever."""
        x = self
        while True:
            n = x.floor()
            yield n
            # x <- 1 / (x - n)
            x = QuadraticValue(x.a - n * x.c, x.b, x.c, x.d).mobius(GL2Z(0, 1, 1, 0))


# ---------------------------------------------------------------------------
# lazily memoized continued fraction streams


class CFStream:
    """An infinite simple continued fraction [a0; a1, a2, ...], memoized.

    Coefficients after the first must be >= 1.  The stream must be
    infinite, which makes the represented value irrational.
    """

    def __init__(self, coefficients: Iterable[int]):
        self._it = iter(coefficients)
        self._coeffs: list[int] = []
        self._conv: list[tuple[int, int]] = [(1, 0)]  # h_{-1}/k_{-1}

    def coefficient(self, i: int) -> int:
        while len(self._coeffs) <= i:
            try:
                a = int(next(self._it))
            except StopIteration:
                raise ToricEndError("cf-stream must be infinite") from None
            if self._coeffs and a < 1:
                raise ToricEndError("cf-stream coefficients after the first must be >= 1")
            self._coeffs.append(a)
            h1, k1 = self._conv[-1]
            h0, k0 = self._conv[-2] if len(self._conv) >= 2 else (0, 1)
            self._conv.append((a * h1 + h0, a * k1 + k0))
        return self._coeffs[i]

    def convergent(self, i: int) -> tuple[int, int]:
        self.coefficient(i)
        return self._conv[i + 1]

    def cmp_fraction(self, p: int, q: int) -> int:
        """Exact sign of (value - p/q), q > 0, by interval narrowing."""
        i = 0
        while True:
            h0, k0 = self.convergent(i)
            h1, k1 = self.convergent(i + 1)
            # value lies strictly between consecutive convergents
            lo_num, lo_den, hi_num, hi_den = h0, k0, h1, k1
            if lo_num * hi_den > hi_num * lo_den:
                lo_num, lo_den, hi_num, hi_den = hi_num, hi_den, lo_num, lo_den
            if p * lo_den <= lo_num * q:
                return 1
            if p * hi_den >= hi_num * q:
                return -1
            i += 1

    def mobius_floor(self, m: GL2Z) -> int:
        """floor((a*t + b)/(c*t + d)) for the stream value t, exactly."""
        a, b, c, d = m.entries()
        e0 = self.coefficient(0)
        a, b = a * e0 + b, a
        c, d = c * e0 + d, c
        i = 1
        while True:
            # tail argument ranges over (1, oo)
            if c != 0 and c + d != 0 and (c > 0) == (c + d > 0):
                n1 = (a + b) // (c + d)
                n2 = a // c
                if n1 == n2:
                    return n1
            e = self.coefficient(i)
            a, b = a * e + b, a
            c, d = c * e + d, c
            i += 1

    def mobius(self, m: GL2Z) -> "CFStream":
        """The stream of the image (a*t + b)/(c*t + d)."""
        outer = self

        def emit() -> Iterator[int]:
            a, b, c, d = m.entries()
            e0 = outer.coefficient(0)
            a, b = a * e0 + b, a
            c, d = c * e0 + d, c
            i = 1
            while True:
                if c != 0 and c + d != 0 and (c > 0) == (c + d > 0):
                    n1 = (a + b) // (c + d)
                    n2 = a // c
                    if n1 == n2:
                        yield n1
                        a, b, c, d = c, d, a - n1 * c, b - n1 * d
                        continue
                e = outer.coefficient(i)
                a, b = a * e + b, a
                c, d = c * e + d, c
                i += 1

        return CFStream(emit())


# ---------------------------------------------------------------------------
# slope targets


@dataclass(frozen=True)
class RationalTarget:
    """A rational limit slope together with its attainment flag."""

    slope: Slope
    attained: bool = False

    def det_sign(self, s: Slope) -> int:
        d = s.p * self.slope.q - self.slope.p * s.q
        return (d > 0) - (d < 0)

    @property
    def is_irrational(self) -> bool:
        return False

    def transform(self, m: GL2Z) -> "RationalTarget":
        return RationalTarget(m.apply(self.slope), self.attained)

    def __str__(self) -> str:
        flag = "attained" if self.attained else "non-attained"
        return f"{self.slope} ({flag})"


@dataclass(frozen=True)
class QuadraticTarget:
    """An exact quadratic irrational limit slope."""

    value: QuadraticValue

    @classmethod
    def of(cls, a: int, b: int, c: int, d: int) -> "QuadraticTarget":
        return cls(QuadraticValue(a, b, c, d))

    def det_sign(self, s: Slope) -> int:
        if s.q == 0:
            return 1
        return -self.value.cmp_fraction(s.p, s.q)

    @property
    def is_irrational(self) -> bool:
        return True

    def transform(self, m: GL2Z) -> "QuadraticTarget":
        return QuadraticTarget(self.value.mobius(m))

    def __str__(self) -> str:
        return str(self.value)


class CFTarget:
    """A limit slope given by an explicit continued fraction coefficient stream.

    Two CFTarget objects compare equal only when they are the same object;
    equality of arbitrary coefficient streams is not decidable.
    """

    def __init__(self, coefficients: Iterable[int]):
        self.stream = coefficients if isinstance(coefficients, CFStream) else CFStream(coefficients)

    def det_sign(self, s: Slope) -> int:
        if s.q == 0:
            return 1
        return -self.stream.cmp_fraction(s.p, s.q)

    @property
    def is_irrational(self) -> bool:
        return True

    def transform(self, m: GL2Z) -> "CFTarget":
        return CFTarget(self.stream.mobius(m))

    def __str__(self) -> str:
        head = [self.stream.coefficient(i) for i in range(4)]
        return f"[{head[0]}; {head[1]}, {head[2]}, {head[3]}, ...]"


SlopeTarget = RationalTarget | QuadraticTarget | CFTarget


def on_arc(start: Slope, target: SlopeTarget, x: Slope, include_target: bool = False) -> bool:
    """True iff x lies on the clockwise arc from start toward target.

    Closed at start; the target endpoint is included only when requested
    (and only a rational target can be hit at all).
    """
    if x == start:
        return True
    if isinstance(target, RationalTarget) and x == target.slope:
        return include_target
    ds = target.det_sign(start)
    if ds == 0:
        raise DegenerateTargetError("target equals the start slope")
    return det(start, x) * target.det_sign(x) * (-ds) < 0


# ---------------------------------------------------------------------------
# the clockwise step


def next_toward(current: Slope, target: SlopeTarget) -> Slope:
    """The neighbor of `current` closest to `target` on the clockwise arc.

    Every neighbor of s is [u + k*s] for the Bezout partner u with
    det(u, s) = -1; the neighbors move monotonically around the circle as k
    grows, approaching s from the clockwise side.  With D = det(target, s)
    and N = det(u, target), the neighbor [u + k*s] lies strictly inside the
    clockwise arc from s to the target exactly when k > N/D, so the closest
    one is k = floor(N/D) + 1, and k = N/D itself is the target when that
    ratio is an integer.  Ties cannot occur; the ratio determines k uniquely.
    """
    s = current
    up, uq = _bezout_partner(s)

    if isinstance(target, RationalTarget):
        t = target.slope
        if t == s:
            if target.attained:
                raise ValueError("attained target equals the current slope")
            raise DegenerateTargetError("non-attained rational target equals the current slope")
        num = up * t.q - t.p * uq          # det(u, t)
        den = t.p * s.q - s.p * t.q        # det(t, s)
        ratio = Fraction(num, den)
        if target.attained and ratio.denominator == 1:
            k = int(ratio)
        else:
            k = ratio.numerator // ratio.denominator + 1
    elif isinstance(target, QuadraticTarget):
        # ratio = (up - uq*t) / (q*t - p) as an exact quadratic value
        v = target.value
        ratio = v.mobius(GL2Z(-uq, up, s.q, -s.p))
        k = ratio.floor() + 1
    else:
        k = target.stream.mobius_floor(GL2Z(-uq, up, s.q, -s.p)) + 1

    return Slope(up + k * s.p, uq + k * s.q)


# ---------------------------------------------------------------------------
# paths


class FareyPath:
    """A minimal clockwise vertex sequence from a start slope toward a target.

    Vertices are generated lazily by iterating `next_toward` and are cached,
    so extending a path never changes the vertices already produced.
    """

    def __init__(self, start: Slope, target: SlopeTarget):
        self.start = start
        self.target = target
        self._vertices: list[Slope] = [start]
        self._complete = (
            isinstance(target, RationalTarget)
            and target.attained
            and target.slope == start
        )

    @property
    def complete(self) -> bool:
        return self._complete

    def __len__(self) -> int:
        return len(self._vertices)

    def extend_to(self, n: int) -> int:
        """Materialize up to n vertices; returns how many exist."""
        while len(self._vertices) < n and not self._complete:
            nxt = next_toward(self._vertices[-1], self.target)
            self._vertices.append(nxt)
            if isinstance(self.target, RationalTarget) and nxt == self.target.slope:
                self._complete = True
        return len(self._vertices)

    def vertex(self, i: int) -> Slope:
        if self.extend_to(i + 1) <= i:
            raise IndexError(f"path is complete with {len(self._vertices)} vertices")
        return self._vertices[i]

    def has_vertex(self, i: int) -> bool:
        return self.extend_to(i + 1) > i

    def prefix(self, n: int) -> tuple[Slope, ...]:
        self.extend_to(n)
        return tuple(self._vertices[:n])

    @classmethod
    def from_vertices(cls, vertices: Iterable[Slope], target: SlopeTarget | None = None) -> "FareyPath":
        """Wrap an explicit finite vertex list, validating the path invariants.

        Without an explicit target the path is treated as complete with an
        attained target at its last vertex.
        """
        vs = list(vertices)
        if not vs:
            raise MalformedPathError("a path needs at least one vertex")
        for a, b in zip(vs, vs[1:]):
            if a == b or abs(det(a, b)) != 1:
                raise MalformedPathError(f"consecutive vertices {a}, {b} are not a Farey edge")
        for a, b, c in zip(vs, vs[1:], vs[2:]):
            if not cw(a, b, c):
                raise MalformedPathError(f"vertices {a}, {b}, {c} are not clockwise")
        if target is None:
            target = RationalTarget(vs[-1], True)
        path = cls(vs[0], target)
        path._vertices = vs
        path._complete = isinstance(target, RationalTarget) and target.attained and vs[-1] == target.slope
        return path


def farey_sequence(start: Slope, target: SlopeTarget, n: int) -> FareyPath:
    """The first n vertices of the minimal clockwise sequence (fewer when an
    attained target is reached sooner)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    path = FareyPath(start, target)
    path.extend_to(n)
    return path


def quadratic_cf_target(value: QuadraticValue) -> CFTarget:
    """The same limit slope, re-expressed as a coefficient stream."""
    return CFTarget(value.cf_coefficients())
