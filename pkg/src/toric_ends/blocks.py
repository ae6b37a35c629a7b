"""Maximal continued fraction blocks of a slope path, with SL2(Z) witnesses.

A run of consecutive path vertices is a continued fraction block when some
element of SL2(Z) carries it to -1, -2, ..., -m.  The witness of the run is
pinned down (up to sign) by its first edge, so decomposition walks the path
edge by edge: start a block, extend it while the witness keeps sending
vertices to consecutive negative integers, then start the next block at the
shared boundary vertex.  Greedy forward-maximal blocks are automatically
backward-maximal as well: right after a maximal block the normalized picture
is -1, ..., -m, -m - 1/a with a >= 2, and the triple (-(m-1), -m, -m - 1/a)
normalizes to (-1, -2, -2 - 1/a), never to (-1, -2, -3).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateTargetError, InfiniteBlockError, MalformedPathError
from .farey import GL2Z, FareyPath, RationalTarget, Slope, cw, det


@dataclass(frozen=True)
class Block:
    """A maximal run of path vertices carried to -1, ..., -m by the witness.

    Indices are vertex positions into the path; end_index is inclusive and
    None for the terminal infinite block of a rational non-attained path.
    """

    start_index: int
    end_index: int | None
    witness: GL2Z
    infinite: bool = False

    @property
    def length(self) -> int | None:
        if self.infinite:
            return None
        return self.end_index - self.start_index + 1

    @property
    def slice_range(self) -> tuple[int, int | None]:
        """Global basic-slice (edge) indices covered: [first, last) with
        last = None for the infinite block."""
        if self.infinite:
            return (self.start_index, None)
        return (self.start_index, self.end_index)

    def slice_count(self) -> int:
        if self.infinite:
            raise InfiniteBlockError("infinite blocks have no finite slice count")
        return self.length - 1


def block_slice_count(b: Block) -> int:
    """Basic slices inside a finite block: one less than its length."""
    return b.slice_count()


def witness_for_edge(a: Slope, b: Slope) -> GL2Z:
    """The SL2(Z) element sending the edge (a, b) to (-1, -2), sign-normalized."""
    eps = det(a, b)
    if abs(eps) != 1:
        raise MalformedPathError(f"{a}, {b} is not a Farey edge")
    m = GL2Z(
        eps * (-b.q + 2 * eps * a.q),
        eps * (b.p - 2 * eps * a.p),
        eps * (b.q - eps * a.q),
        eps * (-b.p + eps * a.p),
    )
    return m.canonical()


class BlockDecomposition:
    """Lazily computed maximal blocks of a path, oldest first.

    Blocks partition the path's edges; consecutive blocks share exactly one
    boundary vertex.  For irrational targets the block list is infinite and
    extends on demand; for a rational non-attained target the final block is
    infinite and ends the list.
    """

    def __init__(self, path: FareyPath):
        self.path = path
        self._validate_prefix()
        self._blocks: list[Block] = []
        self._done = False

    def _validate_prefix(self):
        n = self.path.extend_to(3)
        if n < 2:
            raise MalformedPathError("decomposition needs a path with at least 2 vertices")
        vs = [self.path.vertex(i) for i in range(n)]
        for a, b in zip(vs, vs[1:]):
            if abs(det(a, b)) != 1:
                raise MalformedPathError(f"consecutive vertices {a}, {b} are not a Farey edge")
        for a, b, c in zip(vs, vs[1:], vs[2:]):
            if not cw(a, b, c):
                raise MalformedPathError(f"vertices {a}, {b}, {c} are not clockwise")

    def _target_maps_to_infinity(self, m: GL2Z) -> bool:
        t = self.path.target
        if not (isinstance(t, RationalTarget) and not t.attained):
            return False
        return m.c * t.slope.p + m.d * t.slope.q == 0

    def _emit_next(self) -> bool:
        """Compute one more block; returns False when the list is finished."""
        if self._done:
            return False
        start = self._blocks[-1].end_index if self._blocks else 0
        if not self.path.has_vertex(start + 1):
            self._done = True
            return False
        m = witness_for_edge(self.path.vertex(start), self.path.vertex(start + 1))
        if self._target_maps_to_infinity(m):
            # the normalized tail is -1, -2, -3, ... forever
            self._blocks.append(Block(start, None, m, infinite=True))
            self._done = True
            return True
        length = 2
        while self.path.has_vertex(start + length):
            image = m.apply(self.path.vertex(start + length))
            if image != Slope(-(length + 1), 1):
                break
            length += 1
        self._blocks.append(Block(start, start + length - 1, m))
        if self.path.complete and not self.path.has_vertex(start + length):
            self._done = True
        return True

    def block(self, i: int) -> Block:
        """The i-th block, 1-based."""
        while len(self._blocks) < i:
            if not self._emit_next():
                raise IndexError(f"decomposition has only {len(self._blocks)} blocks")
        return self._blocks[i - 1]

    def has_block(self, i: int) -> bool:
        while len(self._blocks) < i:
            if not self._emit_next():
                return False
        return True

    def blocks_up_to(self, k: int) -> list[Block]:
        while len(self._blocks) < k and self._emit_next():
            pass
        return self._blocks[:k]

    def all_blocks(self) -> list[Block]:
        """Every block; only legal when the list is finite (attained target
        or rational non-attained, whose infinite block ends the list)."""
        while self._emit_next():
            pass
        if not self._done:
            raise InfiniteBlockError("irrational targets have infinitely many blocks")
        return list(self._blocks)

    @property
    def finished(self) -> bool:
        return self._done

    def known_blocks(self) -> list[Block]:
        return list(self._blocks)


def decompose(path: FareyPath) -> BlockDecomposition:
    """Group the path into maximal continued fraction blocks."""
    return BlockDecomposition(path)


def n_of_r(r: Slope, start: Slope) -> int:
    """Total number of maximal blocks of the sequence from `start` toward the
    non-attained rational target r: the finite ones plus the infinite one."""
    if r == start:
        raise DegenerateTargetError("target equals the start slope")
    path = FareyPath(start, RationalTarget(r, attained=False))
    decomp = BlockDecomposition(path)
    i = 1
    while True:
        b = decomp.block(i)
        if b.infinite:
            return i
        i += 1
