"""Board geometry for Domineering on rectangles, cylinders and tori.

Cells are addressed ``(row, column)`` with row 0 at the top and column 0 at
the left.  The vertical player's dominoes span two rows of one column, the
horizontal player's span two columns of one row.  Occupancy is stored as a
bitmask in row-major order; boards larger than ``MAX_CELLS`` cells are
rejected at construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator

MAX_CELLS = 128

Cell = tuple[int, int]


class DomineeringError(Exception):
    """Base class for engine errors."""


class CapacityError(DomineeringError):
    """Board exceeds the fixed bitset capacity."""


class IllegalMoveError(DomineeringError):
    """Move violates occupancy, adjacency or orientation rules."""


class UnsupportedTopologyError(DomineeringError):
    """Operation not defined for this topology."""


class DimensionMismatchError(DomineeringError):
    """Board composition with incompatible dimensions."""


class TopologyMismatchError(DomineeringError):
    """Board composition with incompatible topologies."""


class Player(Enum):
    VERTICAL = "V"
    HORIZONTAL = "H"

    @property
    def opponent(self) -> "Player":
        return Player.HORIZONTAL if self is Player.VERTICAL else Player.VERTICAL

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"Player.{self.name}"


class Topology(Enum):
    RECTANGLE = "rect"
    CYLINDER_H = "cylinder-h"  # left and right edges glued: columns wrap
    CYLINDER_V = "cylinder-v"  # top and bottom edges glued: rows wrap
    TORUS = "torus"

    @property
    def wraps_rows(self) -> bool:
        return self in (Topology.CYLINDER_V, Topology.TORUS)

    @property
    def wraps_columns(self) -> bool:
        return self in (Topology.CYLINDER_H, Topology.TORUS)


_TOPOLOGY_BY_TOKEN = {t.value: t for t in Topology}
_TOPOLOGY_BY_TOKEN.update(
    {"rectangle": Topology.RECTANGLE, "cylh": Topology.CYLINDER_H,
     "cylv": Topology.CYLINDER_V, "cylinder_h": Topology.CYLINDER_H,
     "cylinder_v": Topology.CYLINDER_V}
)


def topology_from_token(token: str) -> Topology:
    try:
        return _TOPOLOGY_BY_TOKEN[token.strip().lower()]
    except KeyError:
        raise ValueError(f"unknown topology {token!r}") from None


@dataclass(frozen=True, order=True)
class BoardSpec:
    """A board family: topology plus width (rows) and length (columns)."""

    topology: Topology
    width: int
    length: int

    def __post_init__(self) -> None:
        if self.width < 1 or self.length < 1:
            raise ValueError("width and length must be positive")

    @property
    def cells(self) -> int:
        return self.width * self.length

    def index(self, cell: Cell) -> int:
        r, c = cell
        if not (0 <= r < self.width and 0 <= c < self.length):
            raise ValueError(f"cell {cell} out of bounds for {self}")
        return r * self.length + c

    def cell_at(self, index: int) -> Cell:
        return divmod(index, self.length)

    def all_cells(self) -> Iterator[Cell]:
        for r in range(self.width):
            for c in range(self.length):
                yield (r, c)

    def __str__(self) -> str:
        return f"{self.topology.value}:{self.width}x{self.length}"


def rect(width: int, length: int) -> BoardSpec:
    return BoardSpec(Topology.RECTANGLE, width, length)


@dataclass(frozen=True)
class Move:
    player: Player
    cells: tuple[Cell, Cell]

    def __post_init__(self) -> None:
        a, b = self.cells
        if b < a:
            object.__setattr__(self, "cells", (b, a))

    def sort_key(self) -> tuple:
        return (self.cells, self.player.value)


@dataclass(frozen=True)
class Position:
    """An immutable board state: a spec plus an occupied-cell bitmask."""

    spec: BoardSpec
    mask: int = 0

    def __post_init__(self) -> None:
        full = (1 << self.spec.cells) - 1
        if self.mask & ~full:
            raise ValueError("occupied mask has bits outside the board")

    @classmethod
    def from_cells(cls, spec: BoardSpec, occupied: Iterable[Cell] = ()) -> "Position":
        mask = 0
        for cell in occupied:
            mask |= 1 << spec.index(cell)
        return cls(spec, mask)

    @classmethod
    def empty(cls, spec: BoardSpec) -> "Position":
        return cls(spec, 0)

    @property
    def occupied(self) -> frozenset[Cell]:
        return frozenset(
            self.spec.cell_at(i) for i in _bit_indices(self.mask)
        )

    @property
    def empty_mask(self) -> int:
        return ~self.mask & ((1 << self.spec.cells) - 1)

    @property
    def empty_count(self) -> int:
        return self.empty_mask.bit_count()

    def is_occupied(self, cell: Cell) -> bool:
        return bool(self.mask >> self.spec.index(cell) & 1)

    def __str__(self) -> str:
        rows = []
        for r in range(self.spec.width):
            rows.append(
                "".join(
                    "#" if self.mask >> (r * self.spec.length + c) & 1 else "."
                    for c in range(self.spec.length)
                )
            )
        return "\n".join(rows)


def _bit_indices(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# ---------------------------------------------------------------------------
# Move generation


def _pair_indices(spec: BoardSpec, player: Player) -> tuple[tuple[int, int], ...]:
    """All orientation-correct adjacent index pairs on the empty board.

    Wraparound pairs are deduplicated as unordered sets, so a width-2
    vertical wrap contributes one pair per column, not two.
    """
    pairs: set[tuple[int, int]] = set()
    m, n = spec.width, spec.length
    for r in range(m):
        for c in range(n):
            if player is Player.VERTICAL:
                r2 = r + 1
                if r2 >= m:
                    if not spec.topology.wraps_rows:
                        continue
                    r2 %= m
                if r2 == r:
                    continue  # width-1 wrap maps a cell to itself
                i, j = spec.index((r, c)), spec.index((r2, c))
            else:
                c2 = c + 1
                if c2 >= n:
                    if not spec.topology.wraps_columns:
                        continue
                    c2 %= n
                if c2 == c:
                    continue
                i, j = spec.index((r, c)), spec.index((r, c2))
            pairs.add((min(i, j), max(i, j)))
    return tuple(sorted(pairs))


_PAIR_CACHE: dict[tuple[BoardSpec, Player], tuple[tuple[int, int], ...]] = {}


def move_pairs(spec: BoardSpec, player: Player) -> tuple[tuple[int, int], ...]:
    key = (spec, player)
    pairs = _PAIR_CACHE.get(key)
    if pairs is None:
        pairs = _pair_indices(spec, player)
        _PAIR_CACHE[key] = pairs
    return pairs


def legal_move_masks(pos: Position, player: Player) -> list[tuple[int, int, int]]:
    """Legal moves as ``(i, j, pairmask)`` index triples, ascending."""
    empty = pos.empty_mask
    out = []
    for i, j in move_pairs(pos.spec, player):
        bits = (1 << i) | (1 << j)
        if empty & bits == bits:
            out.append((i, j, bits))
    return out


def legal_moves(pos: Position, player: Player) -> list[Move]:
    spec = pos.spec
    return [
        Move(player, (spec.cell_at(i), spec.cell_at(j)))
        for i, j, _ in legal_move_masks(pos, player)
    ]


def apply_move(pos: Position, move: Move) -> Position:
    spec = pos.spec
    a, b = move.cells
    for cell in (a, b):
        r, c = cell
        if not (0 <= r < spec.width and 0 <= c < spec.length):
            raise IllegalMoveError(f"cell {cell} out of bounds")
    if a == b:
        raise IllegalMoveError("move cells must be distinct")
    i, j = spec.index(a), spec.index(b)
    lo, hi = min(i, j), max(i, j)
    if (lo, hi) not in set(move_pairs(spec, move.player)):
        orientation = "rows" if move.player is Player.VERTICAL else "columns"
        raise IllegalMoveError(
            f"cells {a} and {b} are not an adjacent {move.player.value} pair "
            f"(must span {orientation}, wraparound per {spec.topology.value})"
        )
    bits = (1 << i) | (1 << j)
    if pos.mask & bits:
        occupied = [c for c in (a, b) if pos.is_occupied(c)]
        raise IllegalMoveError(f"cell {occupied[0]} is already occupied")
    return Position(spec, pos.mask | bits)


# ---------------------------------------------------------------------------
# Components


def _neighbors(spec: BoardSpec, r: int, c: int) -> Iterator[Cell]:
    m, n = spec.width, spec.length
    if r + 1 < m:
        yield (r + 1, c)
    elif spec.topology.wraps_rows and m > 1:
        yield (0, c)
    if r - 1 >= 0:
        yield (r - 1, c)
    elif spec.topology.wraps_rows and m > 1:
        yield (m - 1, c)
    if c + 1 < n:
        yield (r, c + 1)
    elif spec.topology.wraps_columns and n > 1:
        yield (r, 0)
    if c - 1 >= 0:
        yield (r, c - 1)
    elif spec.topology.wraps_columns and n > 1:
        yield (r, n - 1)


def _cyclic_interval_start(used: set[int], size: int) -> int | None:
    """Start of the cyclic interval covering ``used``, or None if full."""
    if len(used) == size:
        return None
    # the interval starts right after a gap
    for s in sorted(used):
        if (s - 1) % size not in used:
            return s
    return min(used)  # unreachable for connected sets; defensive


def components(pos: Position) -> list[Position]:
    """Connected components of the empty cells, as normalized sub-positions.

    Each component is re-emitted on its minimal bounding sub-board with all
    non-component cells marked occupied; cylinders and tori that do not
    actually wrap are unrolled to plain rectangles.
    """
    spec = pos.spec
    empty = pos.empty_mask
    seen = 0
    comps: list[Position] = []
    for start in _bit_indices(empty):
        if seen >> start & 1:
            continue
        stack = [start]
        comp_bits = 0
        while stack:
            idx = stack.pop()
            if comp_bits >> idx & 1:
                continue
            comp_bits |= 1 << idx
            r, c = spec.cell_at(idx)
            for nr, nc in _neighbors(spec, r, c):
                nidx = nr * spec.length + nc
                if empty >> nidx & 1 and not comp_bits >> nidx & 1:
                    stack.append(nidx)
        seen |= comp_bits
        comps.append(_normalize_component(spec, comp_bits))
    comps.sort(key=lambda p: (p.spec.width, p.spec.length, p.spec.topology.value, p.mask))
    return comps


def _normalize_component(spec: BoardSpec, comp_bits: int) -> Position:
    cells = [spec.cell_at(i) for i in _bit_indices(comp_bits)]
    rows_used = {r for r, _ in cells}
    cols_used = {c for _, c in cells}
    m, n = spec.width, spec.length
    # wraps on one or two rows/columns duplicate direct adjacency and are
    # dropped, so e.g. a width-2 torus normalizes to a horizontal cylinder
    wraps_rows = spec.topology.wraps_rows and m >= 3
    wraps_cols = spec.topology.wraps_columns and n >= 3

    if wraps_rows and len(rows_used) < m:
        r_start = _cyclic_interval_start(rows_used, m)
        shifted = sorted({(r - r_start) % m for r in rows_used})
        height = shifted[-1] + 1
        row_map = {r: (r - r_start) % m for r in rows_used}
        rows_wrap = False
    elif wraps_rows:
        height = m
        row_map = {r: r for r in rows_used}
        rows_wrap = True
    else:
        r0 = min(rows_used)
        height = max(rows_used) - r0 + 1
        row_map = {r: r - r0 for r in rows_used}
        rows_wrap = False

    if wraps_cols and len(cols_used) < n:
        c_start = _cyclic_interval_start(cols_used, n)
        shifted = sorted({(c - c_start) % n for c in cols_used})
        width_cols = shifted[-1] + 1
        col_map = {c: (c - c_start) % n for c in cols_used}
        cols_wrap = False
    elif wraps_cols:
        width_cols = n
        col_map = {c: c for c in cols_used}
        cols_wrap = True
    else:
        c0 = min(cols_used)
        width_cols = max(cols_used) - c0 + 1
        col_map = {c: c - c0 for c in cols_used}
        cols_wrap = False

    if rows_wrap and cols_wrap:
        topo = Topology.TORUS
    elif rows_wrap:
        topo = Topology.CYLINDER_V
    elif cols_wrap:
        topo = Topology.CYLINDER_H
    else:
        topo = Topology.RECTANGLE

    sub = BoardSpec(topo, height, width_cols)
    empty_bits = 0
    for r, c in cells:
        empty_bits |= 1 << sub.index((row_map[r], col_map[c]))
    full = (1 << sub.cells) - 1
    return Position(sub, full & ~empty_bits)


# ---------------------------------------------------------------------------
# Symmetry and canonical keys


def _symmetry_permutations(spec: BoardSpec) -> tuple[tuple[int, ...], ...]:
    """Index permutations of the board's game-preserving symmetry group.

    Horizontal/vertical reflections and their product (the 180-degree
    rotation), combined with cyclic shifts along any glued axis.  90-degree
    rotations are excluded: they swap the players.
    """
    m, n = spec.width, spec.length
    row_shifts = range(m) if spec.topology.wraps_rows else (0,)
    col_shifts = range(n) if spec.topology.wraps_columns else (0,)
    perms = []
    for flip_r in (False, True):
        for flip_c in (False, True):
            for sr in row_shifts:
                for sc in col_shifts:
                    perm = [0] * (m * n)
                    for r in range(m):
                        for c in range(n):
                            r2 = (m - 1 - r) if flip_r else r
                            c2 = (n - 1 - c) if flip_c else c
                            r2 = (r2 + sr) % m
                            c2 = (c2 + sc) % n
                            perm[r * n + c] = r2 * n + c2
                    perms.append(tuple(perm))
    return tuple(perms)


_SYMMETRY_CACHE: dict[BoardSpec, tuple[tuple[int, ...], ...]] = {}


def symmetry_permutations(spec: BoardSpec) -> tuple[tuple[int, ...], ...]:
    perms = _SYMMETRY_CACHE.get(spec)
    if perms is None:
        perms = _symmetry_permutations(spec)
        _SYMMETRY_CACHE[spec] = perms
    return perms


def apply_permutation(mask: int, perm: tuple[int, ...]) -> int:
    out = 0
    while mask:
        low = mask & -mask
        out |= 1 << perm[low.bit_length() - 1]
        mask ^= low
    return out


def component_key(comp: Position) -> tuple:
    """Canonical key of a single normalized component."""
    spec = comp.spec
    empty = comp.empty_mask
    best = min(apply_permutation(empty, p) for p in symmetry_permutations(spec))
    return (spec.topology.value, spec.width, spec.length, best)


def canonical_key(pos: Position) -> tuple:
    """Key equal across positions whose empty regions are congruent.

    The position is split into components, each normalized by translation
    and reduced modulo the symmetry group of its sub-board; the key is the
    sorted tuple of component keys.  Keys are exact (no hashing), so equal
    keys imply congruent disjunctive sums.
    """
    return tuple(sorted(component_key(c) for c in components(pos)))


# ---------------------------------------------------------------------------
# Rotation and composition


def rot90(pos: Position) -> Position:
    """Rotate a quarter turn: cell (r, c) maps to (c, width-1-r).

    Swaps the players' roles, so the rotated game is the negative of the
    original.  Defined for rectangles and square tori.
    """
    spec = pos.spec
    if spec.topology is Topology.RECTANGLE:
        pass
    elif spec.topology is Topology.TORUS and spec.width == spec.length:
        pass
    else:
        raise UnsupportedTopologyError(
            f"rot90 undefined for {spec}: needs a rectangle or square torus"
        )
    new_spec = BoardSpec(spec.topology, spec.length, spec.width)
    mask = 0
    for i in _bit_indices(pos.mask):
        r, c = spec.cell_at(i)
        mask |= 1 << new_spec.index((c, spec.width - 1 - r))
    return Position(new_spec, mask)


def concat_h(a: BoardSpec, b: BoardSpec) -> BoardSpec:
    """Place two equal-width rectangles side by side."""
    if a.topology is not Topology.RECTANGLE or b.topology is not Topology.RECTANGLE:
        raise TopologyMismatchError("horizontal concatenation needs rectangles")
    if a.width != b.width:
        raise DimensionMismatchError(f"widths differ: {a.width} vs {b.width}")
    return BoardSpec(Topology.RECTANGLE, a.width, a.length + b.length)


def stack_v(a: BoardSpec, b: BoardSpec) -> BoardSpec:
    """Stack two equal-length rectangles vertically."""
    if a.topology is not Topology.RECTANGLE or b.topology is not Topology.RECTANGLE:
        raise TopologyMismatchError("vertical stacking needs rectangles")
    if a.length != b.length:
        raise DimensionMismatchError(f"lengths differ: {a.length} vs {b.length}")
    return BoardSpec(Topology.RECTANGLE, a.width + b.width, a.length)
