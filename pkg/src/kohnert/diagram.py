"""Cell diagrams, Kohnert moves, and the hook/key diagram constructors.

A diagram is a finite set of unit cells at positive integer coordinates
``(row, col)``, with row 1 the bottom row and column 1 the leftmost column.
A Kohnert move at row r takes the rightmost cell of that row and drops it to
the first empty position below it in its own column, jumping over occupied
positions.  ``kd_closure`` computes everything reachable by such moves.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional

from .errors import ClosureBudgetExceeded, InputError

Cell = tuple[int, int]
Composition = tuple[int, ...]

DEFAULT_CLOSURE_BUDGET = 100_000


class Diagram:
    """Immutable set of cells; equality and hashing use the sorted cell tuple."""

    __slots__ = ("cells", "key")

    def __init__(self, cells: Iterable[Cell] = ()):
        cs = frozenset((int(r), int(c)) for r, c in cells)
        for r, c in cs:
            if r < 1 or c < 1:
                raise ValueError(f"cell {(r, c)} outside the positive quadrant")
        object.__setattr__(self, "cells", cs)
        object.__setattr__(self, "key", tuple(sorted(cs)))

    def __setattr__(self, name, value):
        raise AttributeError("Diagram is immutable")

    def __contains__(self, cell: Cell) -> bool:
        return cell in self.cells

    def __iter__(self) -> Iterator[Cell]:
        return iter(self.key)

    def __len__(self) -> int:
        return len(self.cells)

    def __eq__(self, other) -> bool:
        return isinstance(other, Diagram) and self.cells == other.cells

    def __hash__(self) -> int:
        return hash(self.key)

    def __lt__(self, other: "Diagram") -> bool:
        return self.key < other.key

    def __repr__(self) -> str:
        return f"Diagram({list(self.key)})"

    @property
    def max_row(self) -> int:
        return max((r for r, _ in self.cells), default=0)

    @property
    def max_col(self) -> int:
        return max((c for _, c in self.cells), default=0)

    def row(self, r: int) -> tuple[int, ...]:
        """Columns occupied in row r, ascending."""
        return tuple(sorted(c for rr, c in self.cells if rr == r))

    def column(self, c: int) -> tuple[int, ...]:
        """Rows occupied in column c, ascending."""
        return tuple(sorted(r for r, cc in self.cells if cc == c))

    def nonempty_columns(self) -> tuple[int, ...]:
        return tuple(sorted({c for _, c in self.cells}))

    def nonempty_rows(self) -> tuple[int, ...]:
        return tuple(sorted({r for r, _ in self.cells}))

    # -- grid text format: top row first, 'X' cell, '.' empty ----------------

    def to_grid(self) -> str:
        if not self.cells:
            return ""
        nr, nc = self.max_row, self.max_col
        lines = []
        for r in range(nr, 0, -1):
            occupied = {c for rr, c in self.cells if rr == r}
            lines.append("".join("X" if c in occupied else "." for c in range(1, nc + 1)))
        return "\n".join(lines)

    @classmethod
    def from_grid(cls, text: str) -> "Diagram":
        lines = [line.rstrip() for line in text.splitlines()]
        while lines and lines[-1] == "":
            lines.pop()
        n = len(lines)
        cells = []
        for i, line in enumerate(lines):
            for j, ch in enumerate(line):
                if ch == "X":
                    cells.append((n - i, j + 1))
                elif ch != ".":
                    raise InputError(f"unexpected character {ch!r} in grid")
        return cls(cells)

    # -- JSON format ----------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {"cells": [[r, c] for r, c in self.key]}

    @classmethod
    def from_json_dict(cls, obj: dict) -> "Diagram":
        if not isinstance(obj, dict) or "cells" not in obj:
            raise InputError("diagram JSON must be an object with a 'cells' list")
        try:
            return cls((r, c) for r, c in obj["cells"])
        except (TypeError, ValueError) as exc:
            raise InputError(f"bad diagram JSON: {exc}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


@dataclass(frozen=True)
class HookSpec:
    """Generator data for a hook diagram: a top row over columns C plus a
    vertical run of rows r1..r2 in the rightmost column of C."""

    r1: int
    r2: int
    columns: frozenset[int]

    def __post_init__(self):
        if not (1 <= self.r1 <= self.r2):
            raise ValueError("need 1 <= r1 <= r2")
        if not self.columns or any(c < 1 for c in self.columns):
            raise ValueError("columns must be a nonempty set of positive integers")
        object.__setattr__(self, "columns", frozenset(self.columns))


@dataclass(frozen=True)
class Monomial:
    """Sparse monomial over variables indexed by row number; exponents > 0."""

    exponents: tuple[tuple[int, int], ...]

    def __post_init__(self):
        exps = tuple(sorted((int(v), int(e)) for v, e in self.exponents))
        if any(v < 1 or e < 1 for v, e in exps):
            raise ValueError("variables must be >= 1 and exponents positive")
        object.__setattr__(self, "exponents", exps)

    @classmethod
    def from_mapping(cls, mapping: dict[int, int]) -> "Monomial":
        return cls(tuple((v, e) for v, e in mapping.items() if e))

    def degree(self) -> int:
        return sum(e for _, e in self.exponents)

    def as_dict(self) -> dict[int, int]:
        return dict(self.exponents)

    def __str__(self) -> str:
        if not self.exponents:
            return "1"
        return "*".join(f"x{v}" if e == 1 else f"x{v}^{e}" for v, e in self.exponents)


# -- Kohnert moves and closures ------------------------------------------------


def _move_cells(cells: frozenset[Cell], r: int) -> Optional[frozenset[Cell]]:
    c = -1
    for rr, cc in cells:
        if rr == r and cc > c:
            c = cc
    if c < 0:
        return None
    col_rows = {rr for rr, cc in cells if cc == c}
    for target in range(r - 1, 0, -1):
        if target not in col_rows:
            return cells - {(r, c)} | {(target, c)}
    return None


def kohnert_move(d: Diagram, r: int) -> Optional[Diagram]:
    """Apply a Kohnert move at row r; None when the move is trivial.

    Trivial means row r is empty, r is the bottom row, or the column below the
    rightmost cell of row r is fully occupied.
    """
    if r < 1:
        raise ValueError("rows are 1-based")
    moved = _move_cells(d.cells, r)
    return None if moved is None else Diagram(moved)


def _closure_graph(
    d: Diagram, budget: Optional[int] = None
) -> tuple[list[Diagram], list[list[int]]]:
    """All diagrams reachable from d, canonically sorted, plus the single-move
    successor lists (indices into the sorted element list)."""
    budget = DEFAULT_CLOSURE_BUDGET if budget is None else budget
    start = d.cells
    seen: dict[frozenset[Cell], list[frozenset[Cell]]] = {}
    queue = [start]
    seen[start] = []
    while queue:
        cur = queue.pop()
        succs = []
        for r in {rr for rr, _ in cur}:
            nxt = _move_cells(cur, r)
            if nxt is not None:
                succs.append(nxt)
                if nxt not in seen:
                    if len(seen) >= budget:
                        raise ClosureBudgetExceeded(budget, len(seen) + 1)
                    seen[nxt] = []
                    queue.append(nxt)
        seen[cur] = succs
    elements = sorted(Diagram(cs) for cs in seen)
    index = {e.cells: i for i, e in enumerate(elements)}
    succ_ids = [sorted({index[s] for s in seen[e.cells]}) for e in elements]
    return elements, succ_ids


@lru_cache(maxsize=None)
def _cached_closure_graph(d: Diagram) -> tuple[tuple[Diagram, ...], tuple[tuple[int, ...], ...]]:
    elements, succs = _closure_graph(d)
    return tuple(elements), tuple(tuple(s) for s in succs)


def kd_closure(d: Diagram, budget: Optional[int] = None) -> list[Diagram]:
    """Reachability closure of d under Kohnert moves, d included, in canonical
    order."""
    if budget is None:
        return list(_cached_closure_graph(d)[0])
    return _closure_graph(d, budget)[0]


def weight(d: Diagram) -> Monomial:
    """Monomial with the exponent of x_i equal to the number of cells in row i."""
    counts: dict[int, int] = {}
    for r, _ in d.cells:
        counts[r] = counts.get(r, 0) + 1
    return Monomial.from_mapping(counts)


# -- constructors ----------------------------------------------------------------


def key_diagram(a: Iterable[int]) -> Diagram:
    """Left-justified diagram with a_i cells in row i."""
    a = composition(a)
    return Diagram((i + 1, j + 1) for i, ai in enumerate(a) for j in range(ai))


def composition(a: Iterable[int]) -> Composition:
    a = tuple(int(x) for x in a)
    if any(x < 0 for x in a):
        raise ValueError("weak composition entries must be nonnegative")
    return a


def hook_generator(h: HookSpec) -> Diagram:
    cm = max(h.columns)
    cells = {(h.r2, c) for c in h.columns}
    cells |= {(j, cm) for j in range(h.r1, h.r2 + 1)}
    return Diagram(cells)


def hook_min(h: HookSpec) -> Diagram:
    """The bottom element of the poset generated by the hook: the same hook
    shifted to start at row 1."""
    return hook_generator(HookSpec(1, h.r2 - h.r1 + 1, h.columns))


def strip_row_one(d: Diagram) -> Diagram:
    return Diagram((r, c) for r, c in d.cells if r != 1)


# -- hook recognition --------------------------------------------------------------


def as_hook(d: Diagram) -> Optional[HookSpec]:
    """A HookSpec h with d reachable from hook_generator(h), or None.

    The conditions checked: the rightmost nonempty column c* may hold several
    cells, every other nonempty column holds exactly one, every cell left of
    c* sits at or above the top cell of c*, and rows of cells left of c*
    weakly decrease from left to right.  The empty diagram is not a hook.
    """
    if not d.cells:
        return None
    columns: dict[int, list[int]] = {}
    for r, c in d.cells:
        columns.setdefault(c, []).append(r)
    cstar = max(columns)
    star_rows = sorted(columns[cstar])
    left = sorted((c, rows[0]) for c, rows in columns.items() if c != cstar)
    for c, rows in columns.items():
        if c != cstar and len(columns[c]) > 1:
            return None
    top = star_rows[-1]
    prev_row = None
    for _, r in left:
        if r < top:
            return None
        if prev_row is not None and r > prev_row:
            return None
        prev_row = r
    r2 = left[0][1] if left else top
    n2 = len(star_rows)
    return HookSpec(r2 - n2 + 1, r2, frozenset(columns))


def is_hook(d: Diagram) -> bool:
    return as_hook(d) is not None
