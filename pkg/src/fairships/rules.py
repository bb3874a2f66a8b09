"""Pure Battleships rules: fleet validation, shot semantics, terminal audit.

Everything here is side-effect free and board-size agnostic; the standard
game is 10x10 with one ship of each size 1..5.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum

BOARD_ROWS = 10
BOARD_COLS = 10


class Orientation(Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"


@dataclass(frozen=True)
class Coordinate:
    row: int
    col: int

    def index(self, cols: int = BOARD_COLS) -> int:
        return self.row * cols + self.col

    @classmethod
    def from_index(cls, index: int, cols: int = BOARD_COLS) -> "Coordinate":
        return cls(index // cols, index % cols)

    def label(self) -> str:
        """Classic notation: row letter + 1-based column, A1 .. J10."""
        return f"{chr(ord('A') + self.row)}{self.col + 1}"

    @classmethod
    def from_label(cls, label: str) -> "Coordinate":
        row = ord(label[0].upper()) - ord("A")
        return cls(row, int(label[1:]) - 1)


@dataclass(frozen=True)
class Placement:
    size: int
    origin: Coordinate
    orientation: Orientation

    def cells(self) -> list[Coordinate]:
        r, c = self.origin.row, self.origin.col
        if self.orientation is Orientation.HORIZONTAL:
            return [Coordinate(r, c + k) for k in range(self.size)]
        return [Coordinate(r + k, c) for k in range(self.size)]

    def describe(self) -> str:
        return f"size-{self.size} {self.orientation.value} at {self.origin.label()}"


@dataclass(frozen=True)
class FleetSpec:
    """Multiset of ship sizes a valid board must contain."""

    sizes: tuple[int, ...] = (1, 2, 3, 4, 5)

    def __post_init__(self):
        if not self.sizes:
            raise ValueError("fleet must contain at least one ship")
        for s in self.sizes:
            if not 1 <= s <= 10:
                raise ValueError(f"ship size {s} outside 1..10")
        object.__setattr__(self, "sizes", tuple(sorted(self.sizes)))

    @property
    def distinct_sizes(self) -> bool:
        return len(set(self.sizes)) == len(self.sizes)


DEFAULT_FLEET = FleetSpec()


def total_ship_cells(spec: FleetSpec) -> int:
    return sum(spec.sizes)


class ShotKind(Enum):
    MISS = "miss"
    HIT = "hit"
    SUNK = "sunk"
    FLEET_SUNK = "fleet_sunk"


@dataclass(frozen=True)
class ShotOutcome:
    kind: ShotKind
    ship_size: int

    @property
    def is_hit(self) -> bool:
        return self.kind is not ShotKind.MISS


class PlacementError(ValueError):
    """A placement set that violates the fleet spec; the message names the
    offending placement."""


def validate_fleet(placements, spec: FleetSpec = DEFAULT_FLEET,
                   rows: int = BOARD_ROWS, cols: int = BOARD_COLS) -> list[int]:
    """Check a placement set against the spec and board, returning the cell
    grid (ship size per cell, 0 empty) it generates."""
    got = sorted(p.size for p in placements)
    if tuple(got) != spec.sizes:
        raise PlacementError(
            f"fleet sizes {got} do not match the required {list(spec.sizes)}")
    cells = [0] * (rows * cols)
    for p in placements:
        for coord in p.cells():
            if not (0 <= coord.row < rows and 0 <= coord.col < cols):
                raise PlacementError(f"{p.describe()} runs out of bounds")
            idx = coord.index(cols)
            if cells[idx] != 0:
                raise PlacementError(
                    f"{p.describe()} overlaps another ship at {coord.label()}")
            cells[idx] = p.size
    return cells


def resolve_shot(cells, revealed_hits, target, spec: FleetSpec = DEFAULT_FLEET,
                 cols: int = BOARD_COLS) -> ShotOutcome:
    """Outcome of revealing target's cell, given the indices already revealed.

    revealed_hits holds the previously revealed occupied cells (stray miss
    indices are tolerated and ignored). Sinking a single ship is only
    reported when the fleet's sizes are distinct; with repeated sizes the
    size value cannot identify a ship, so only hit/miss/fleet_sunk appear.
    """
    idx = target.index(cols) if isinstance(target, Coordinate) else target
    value = cells[idx]
    if value == 0:
        return ShotOutcome(ShotKind.MISS, 0)
    occupied = {i for i in revealed_hits if cells[i] > 0}
    occupied.add(idx)
    if len(occupied) >= total_ship_cells(spec):
        return ShotOutcome(ShotKind.FLEET_SUNK, value)
    if spec.distinct_sizes and sum(1 for i in occupied if cells[i] == value) >= value:
        return ShotOutcome(ShotKind.SUNK, value)
    return ShotOutcome(ShotKind.HIT, value)


def outcome_from_reveals(reveals: dict[int, int], target_index: int,
                         spec: FleetSpec = DEFAULT_FLEET) -> ShotOutcome:
    """resolve_shot twin over a verified reveal ledger (cell index -> value,
    misses included), as the arbiter sees the board. reveals must already
    contain the target's entry."""
    value = reveals[target_index]
    if value == 0:
        return ShotOutcome(ShotKind.MISS, 0)
    occupied = [v for v in reveals.values() if v > 0]
    if len(occupied) >= total_ship_cells(spec):
        return ShotOutcome(ShotKind.FLEET_SUNK, value)
    if spec.distinct_sizes and sum(1 for v in occupied if v == value) >= value:
        return ShotOutcome(ShotKind.SUNK, value)
    return ShotOutcome(ShotKind.HIT, value)


@dataclass(frozen=True)
class AuditResult:
    valid: bool
    reason: str | None = None


def audit_revealed_board(cells, spec: FleetSpec = DEFAULT_FLEET,
                         rows: int = BOARD_ROWS, cols: int = BOARD_COLS) -> AuditResult:
    """Terminal audit of a fully revealed board: the occupied cells must
    reconstruct into exactly the spec's ships as straight consecutive runs."""
    if len(cells) != rows * cols:
        raise ValueError(f"expected {rows * cols} cells, got {len(cells)}")
    want = Counter(spec.sizes)
    by_value: dict[int, set[int]] = {}
    for i, v in enumerate(cells):
        if v == 0:
            continue
        if v not in want:
            return AuditResult(False, f"occupied cell with size {v} not in the fleet")
        by_value.setdefault(v, set()).add(i)
    for size, count in sorted(want.items()):
        have = len(by_value.get(size, ()))
        if have != size * count:
            return AuditResult(
                False, f"expected {size * count} cells of size {size}, found {have}")
    for size in sorted(want):
        if not _cover_with_runs(frozenset(by_value[size]), size, rows, cols):
            return AuditResult(
                False, f"size-{size} cells do not form straight runs of length {size}")
    return AuditResult(True)


def _cover_with_runs(cells: frozenset[int], size: int, rows: int, cols: int) -> bool:
    # Exact cover by straight runs. Anchoring on the minimum remaining index
    # is safe: any run containing it would otherwise include a smaller index.
    if not cells:
        return True
    m = min(cells)
    r, c = divmod(m, cols)
    if c + size <= cols:
        run = frozenset(m + k for k in range(size))
        if run <= cells and _cover_with_runs(cells - run, size, rows, cols):
            return True
    if size > 1 and r + size <= rows:
        run = frozenset(m + k * cols for k in range(size))
        if run <= cells and _cover_with_runs(cells - run, size, rows, cols):
            return True
    return False


def parse_layout(text: str, rows: int = BOARD_ROWS, cols: int = BOARD_COLS) -> list[int]:
    """Layout file format: one line per row, '.' for empty, digit 1-5 for the
    ship size occupying the cell."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) != rows:
        raise ValueError(f"expected {rows} rows, got {len(lines)}")
    cells = []
    for line in lines:
        if len(line) != cols:
            raise ValueError(f"expected {cols} columns, got {len(line)}: {line!r}")
        for ch in line:
            if ch == ".":
                cells.append(0)
            elif ch.isdigit() and 1 <= int(ch) <= 5:
                cells.append(int(ch))
            else:
                raise ValueError(f"bad layout character {ch!r}")
    return cells


def render_layout(cells, cols: int = BOARD_COLS) -> str:
    out = []
    for start in range(0, len(cells), cols):
        out.append("".join("." if v == 0 else str(v)
                           for v in cells[start:start + cols]))
    return "\n".join(out)
