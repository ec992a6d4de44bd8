"""Characterization predicates and pattern detectors.

Diagram-level detectors scan a closure for the two local configurations that
force a non-shellable interval (an exposed ascent pair, and a blocked column
under a partially cleared top row).  Composition-level detectors implement the
pattern families governing purity, shellability, and multiplicity-freeness of
key diagrams, together with the decomposition of a pure composition into basic
blocks, the row-splitting map onto the block posets, and the embedding of a
basic block's poset as an interval in a hook poset.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .diagram import (
    Composition,
    Diagram,
    as_hook,
    composition,
    is_hook,
    kd_closure,
    key_diagram,
    strip_row_one,
)
from .poset import Interval, KohnertPoset, build_poset
from .shellability import EdgeLabeling, el_labeling_hook

DIAGRAM_KINDS = ("strucasc", "strucblock")
COMPOSITION_KINDS = (
    "comp-a-i",
    "comp-a-ii",
    "comp-b-i",
    "comp-b-ii",
    "comp-b-iii",
    "comp-b-iv",
    "pure-1",
    "pure-2",
    "pure-3",
    "mf-1",
    "mf-2",
    "mf-3",
    "mf-4",
    "mf-5",
)

_VALUE_PATTERNS = {
    "comp-a-i": lambda v: v[0] < v[1] < v[2],
    "comp-a-ii": lambda v: v[0] <= v[2] - 3 <= v[1] - 3,
    "comp-b-i": lambda v: v[0] <= v[1] < v[2] - 1 <= v[3] - 1,
    "comp-b-ii": lambda v: v[0] <= v[1] < v[3] < v[2],
    "comp-b-iii": lambda v: v[1] < v[0] < v[3] < v[2],
    "comp-b-iv": lambda v: v[1] < v[0] < v[2] <= v[3],
    "pure-1": lambda v: v[0] < v[1] < v[2],
    "pure-2": lambda v: v[0] < v[2] < v[1],
    "pure-3": lambda v: v[0] + 1 < v[1] == v[2],
    "mf-1": lambda v: v[0] < v[1] < v[2],
    "mf-2": lambda v: v[0] == v[1] < v[2] - 1 < v[3] - 1,
    "mf-3": lambda v: v[0] == v[1] < v[3] < v[2],
    "mf-4": lambda v: v[1] < v[0] < v[3] < v[2],
    "mf-5": lambda v: v[1] < v[0] < v[2] == v[3],
}


@dataclass(frozen=True)
class PatternHit:
    """A witnessing configuration.

    For composition kinds, indices are 1-based positions and values the
    entries found there; for diagram kinds, indices hold the defining
    coordinates and element the diagram exhibiting them.  The defining
    inequalities are revalidated on construction.
    """

    kind: str
    indices: tuple[int, ...]
    values: Optional[tuple[int, ...]] = None
    element: Optional[Diagram] = None

    def __post_init__(self):
        if self.kind in _VALUE_PATTERNS:
            if self.values is None or not _VALUE_PATTERNS[self.kind](self.values):
                raise ValueError(f"values {self.values} do not satisfy pattern {self.kind}")
        elif self.kind == "strucasc":
            if self.element is None or not _check_ascent(self.element, *self.indices):
                raise ValueError("ascent configuration does not hold in element")
        elif self.kind == "strucblock":
            if self.element is None or not _check_blocked_column(self.element, *self.indices):
                raise ValueError("blocked-column configuration does not hold in element")
        else:
            raise ValueError(f"unknown pattern kind {self.kind!r}")

    @property
    def is_corollary_case(self) -> bool:
        """For strucblock hits: whether the top row sits exactly two rows up."""
        return self.kind == "strucblock" and self.indices[1] == self.indices[0] + 2

    def to_json_dict(self) -> dict:
        out: dict = {"kind": self.kind, "indices": list(self.indices)}
        if self.values is not None:
            out["values"] = list(self.values)
        if self.element is not None:
            out["element"] = self.element.to_json_dict()
        return out


def _check_ascent(d: Diagram, r: int, c1: int, c2: int) -> bool:
    if r < 1 or not c1 < c2:
        return False
    return (
        (r + 1, c1) in d
        and (r + 2, c2) in d
        and all(cc <= c2 for rr, cc in d.cells if rr == r + 2)
        and all(cc <= c1 for rr, cc in d.cells if rr == r + 1)
        and (r, c1) not in d
        and (r, c2) not in d
    )


def _check_blocked_column(d: Diagram, r: int, rstar: int, c: int, cstar: int) -> bool:
    if r < 1 or not (c < cstar - 1 and r < rstar - 1):
        return False
    if (rstar, cstar) not in d or any(cc > cstar for rr, cc in d.cells if rr == rstar):
        return False
    if not any(c < cc < cstar for rr, cc in d.cells if rr == rstar):
        return False
    if not all((rr, c) in d for rr in range(r + 1, rstar + 1)):
        return False
    if (r, c) in d or any(cc > c for rr, cc in d.cells if rr == rstar - 1):
        return False
    return all(
        any(cc > c for rr, cc in d.cells if rr == mid)
        for mid in range(r + 1, rstar - 1)
    )


def detect_strucasc(d: Diagram, budget: Optional[int] = None) -> Optional[PatternHit]:
    """Scan the closure of d for an exposed ascent: rightmost cells of two
    consecutive rows strictly ascending, with the two positions below them
    free.  Any hit certifies a non-shellable interval in the poset of d."""
    for elt in kd_closure(d, budget):
        row_max: dict[int, int] = {}
        for r, c in elt.cells:
            row_max[r] = max(row_max.get(r, 0), c)
        for r in sorted(row_max):
            if r < 2:
                continue
            c1, c2 = row_max.get(r - 1 + 1), None  # placate linters; replaced below
            break
        for r in sorted(row_max):
            if r < 1:
                continue
            c1 = row_max.get(r + 1)
            c2 = row_max.get(r + 2)
            if c1 is None or c2 is None or not c1 < c2:
                continue
            if (r, c1) in elt or (r, c2) in elt:
                continue
            return PatternHit("strucasc", (r, c1, c2), element=elt)
    return None


def detect_strucblock(d: Diagram, budget: Optional[int] = None) -> Optional[PatternHit]:
    """Scan the closure of d for a blocked column: a full column run topped by
    a partially cleared row that still has a cell strictly between the run and
    the row's rightmost cell.  Any hit certifies a non-shellable interval."""
    for elt in kd_closure(d, budget):
        rows = elt.nonempty_rows()
        for rstar in rows:
            row_cells = elt.row(rstar)
            cstar = row_cells[-1]
            for c in row_cells[:-1]:
                if not c < cstar - 1:
                    continue
                if not any(c < cc < cstar for cc in row_cells):
                    continue
                run_bottom = rstar
                while run_bottom > 1 and (run_bottom - 1, c) in elt:
                    run_bottom -= 1
                r = run_bottom - 1
                if r < 1 or not r < rstar - 1:
                    continue
                if _check_blocked_column(elt, r, rstar, c, cstar):
                    return PatternHit("strucblock", (r, rstar, c, cstar), element=elt)
    return None


# -- hook-family characterizations -------------------------------------------------


def shellable_onecell_columns(d: Diagram) -> bool:
    """Shellability predicate for diagrams with at most one cell per column:
    the diagram minus its bottom row must be a hook diagram (or empty, which
    leaves a one-element poset)."""
    if any(len(d.column(c)) > 1 for c in d.nonempty_columns()):
        raise ValueError("some column has more than one cell")
    stripped = strip_row_one(d)
    return len(stripped) == 0 or is_hook(stripped)


def shellable_rows12_empty(d: Diagram) -> bool:
    """Shellability predicate for diagrams whose first two rows are empty."""
    if any(r <= 2 for r, _ in d.cells):
        raise ValueError("a cell lies in row 1 or 2")
    return is_hook(d)


# -- composition patterns -----------------------------------------------------------


def _triples(n: int) -> Iterable[tuple[int, int, int]]:
    for j1 in range(n):
        for j2 in range(j1 + 1, n):
            for j3 in range(j2 + 1, n):
                yield j1, j2, j3


def _quadruples(n: int) -> Iterable[tuple[int, int, int, int]]:
    for j1 in range(n):
        for j2 in range(j1 + 1, n):
            for j3 in range(j2 + 1, n):
                for j4 in range(j3 + 1, n):
                    yield j1, j2, j3, j4


def _scan(a: Composition, kinds: Sequence[str]) -> Iterable[PatternHit]:
    for kind in kinds:
        arity = 4 if _VALUE_PATTERNS[kind].__code__.co_consts else 4
        positions = _quadruples(len(a)) if "b-" in kind or kind.startswith("mf-") and kind != "mf-1" else _triples(len(a))
        for idx in positions:
            vals = tuple(a[i] for i in idx)
            if _VALUE_PATTERNS[kind](vals):
                yield PatternHit(kind, tuple(i + 1 for i in idx), values=vals)


def _scan_kind(a: Composition, kind: str) -> Iterable[PatternHit]:
    arity3 = kind in ("comp-a-i", "comp-a-ii", "pure-1", "pure-2", "pure-3", "mf-1")
    positions = _triples(len(a)) if arity3 else _quadruples(len(a))
    for idx in positions:
        vals = tuple(a[i] for i in idx)
        if _VALUE_PATTERNS[kind](vals):
            yield PatternHit(kind, tuple(i + 1 for i in idx), values=vals)


def is_pure_composition(a: Iterable[int]) -> Optional[PatternHit]:
    """None when a is pure; otherwise the first triple violating purity."""
    a = composition(a)
    for idx in _triples(len(a)):
        vals = tuple(a[i] for i in idx)
        for kind in ("pure-1", "pure-2", "pure-3"):
            if _VALUE_PATTERNS[kind](vals):
                return PatternHit(kind, tuple(i + 1 for i in idx), values=vals)
    return None


def keynecrank_patterns(a: Iterable[int]) -> list[PatternHit]:
    """All hits of the six patterns that force a key diagram's poset to be
    non-shellable."""
    a = composition(a)
    hits: list[PatternHit] = []
    for kind in ("comp-a-i", "comp-a-ii", "comp-b-i", "comp-b-ii", "comp-b-iii", "comp-b-iv"):
        hits.extend(_scan_kind(a, kind))
    return hits


def conjecture_key_patterns(a: Iterable[int]) -> list[PatternHit]:
    """The same six patterns, read as a conjectural exact characterization of
    shellability for key diagrams; experimental."""
    return keynecrank_patterns(a)


def key_graded_el_shellable(a: Iterable[int]) -> bool:
    """Whether the key diagram's poset is both graded and EL-shellable;
    equivalent to purity of the composition."""
    return is_pure_composition(a) is None


def key_mf_patterns(a: Iterable[int]) -> list[PatternHit]:
    """All hits of the five patterns whose joint avoidance is equivalent to
    the key polynomial being multiplicity free."""
    a = composition(a)
    hits: list[PatternHit] = []
    for kind in ("mf-1", "mf-2", "mf-3", "mf-4", "mf-5"):
        hits.extend(_scan_kind(a, kind))
    return hits


# -- pure decompositions -------------------------------------------------------------


def basic_type(alpha: Iterable[int]) -> Optional[str]:
    """Basic-block type of a composition, first match among:

    I    weakly decreasing;
    II   values exactly {p, p+1} for some p;
    III  weakly decreasing except the last entry, which exceeds the
         penultimate one by at least 2;
    IV   a {p, p+1} prefix, then a nonempty weakly decreasing run strictly
         below p, then a final p+1.
    """
    alpha = composition(alpha)
    n = len(alpha)
    if n == 0:
        return None
    if all(alpha[i] >= alpha[i + 1] for i in range(n - 1)):
        return "I"
    values = set(alpha)
    if len(values) == 2 and max(values) == min(values) + 1:
        return "II"
    if n >= 2 and all(alpha[i] >= alpha[i + 1] for i in range(n - 2)) and alpha[-2] < alpha[-1] - 1:
        return "III"
    if n >= 4:
        p = alpha[-1] - 1
        for split in range(2, n - 1):
            prefix, middle = alpha[:split], alpha[split : n - 1]
            if (
                set(prefix) == {p, p + 1}
                and all(x < p for x in middle)
                and all(middle[i] >= middle[i + 1] for i in range(len(middle) - 1))
            ):
                return "IV"
    return None


@dataclass(frozen=True)
class PureDecomposition:
    """Blocks of basic type whose concatenation is the source composition,
    with min(previous block) >= max(next block) at every junction; validated
    on construction."""

    blocks: tuple[Composition, ...]
    types: tuple[str, ...]

    def __post_init__(self):
        if len(self.blocks) != len(self.types):
            raise ValueError("one type per block")
        for block, t in zip(self.blocks, self.types):
            if not block:
                raise ValueError("blocks must be nonempty")
            if basic_type(block) != t:
                raise ValueError(f"block {block} is not of basic type {t}")
        for prev, nxt in zip(self.blocks, self.blocks[1:]):
            if min(prev) < max(nxt):
                raise ValueError(f"junction fails: min{prev} < max{nxt}")

    @property
    def source(self) -> Composition:
        return tuple(x for block in self.blocks for x in block)


def pure_decomposition(a: Iterable[int]) -> PureDecomposition:
    """Split a pure composition into basic blocks, longest prefix first with
    backtracking.  Any decomposition passing the PureDecomposition invariants
    is acceptable; this one is deterministic."""
    a = composition(a)
    hit = is_pure_composition(a)
    if hit is not None:
        raise ValueError(f"composition is not pure: {hit.kind} at {hit.indices}")
    n = len(a)
    dead: set[int] = set()

    def solve(i: int) -> Optional[list[Composition]]:
        if i == n:
            return []
        if i in dead:
            return None
        for length in range(n - i, 0, -1):
            block = a[i : i + length]
            if basic_type(block) is None:
                continue
            rest = a[i + length :]
            if rest and min(block) < max(rest):
                continue
            tail = solve(i + length)
            if tail is not None:
                return [block] + tail
        dead.add(i)
        return None

    blocks = solve(0)
    if blocks is None:
        raise ValueError(f"no pure decomposition found for {a}")
    return PureDecomposition(tuple(blocks), tuple(basic_type(b) for b in blocks))


def split_by_decomposition(d: Diagram, decomposition: PureDecomposition) -> tuple[Diagram, ...]:
    """Split the rows of d into the decomposition's row blocks, rebasing each
    block to start at row 1."""
    lengths = [len(b) for b in decomposition.blocks]
    total = sum(lengths)
    if d.max_row > total:
        raise ValueError(f"diagram has a cell above row {total}")
    out = []
    offset = 0
    for length in lengths:
        out.append(
            Diagram(
                (r - offset, c)
                for r, c in d.cells
                if offset < r <= offset + length
            )
        )
        offset += length
    return tuple(out)


# -- embedding a basic block's poset into a hook poset ---------------------------------


@dataclass(frozen=True)
class HookEmbedding:
    """Order isomorphism from the poset of a basic key diagram onto the
    interval [bottom, hook] of the hook poset, by deleting the fixed cell
    set."""

    removed: Diagram
    hook: Diagram
    bottom: Diagram
    hook_poset: KohnertPoset
    interval: Interval
    pairing: dict[Diagram, Diagram]


def _fixed_cells(a: Composition) -> Diagram:
    """Cells of the key diagram, below the top row, whose whole column below
    them is occupied; these never move."""
    n = len(a)
    cells = []
    running_min = None
    for r in range(1, n):
        running_min = a[r - 1] if running_min is None else min(running_min, a[r - 1])
        cells.extend((r, c) for c in range(1, running_min + 1))
    return Diagram(cells)


def hook_embedding(a: Iterable[int]) -> HookEmbedding:
    """For a basic composition of type II, III, or IV, certify that deleting
    the fixed cells maps its poset isomorphically onto a hook-poset interval."""
    a = composition(a)
    t = basic_type(a)
    if t is None:
        raise ValueError(f"{a} is not a basic pure composition")
    if t == "I":
        raise ValueError("type I blocks have one-element posets; nothing to embed")
    removed = _fixed_cells(a)
    source = key_diagram(a)
    hook = Diagram(source.cells - removed.cells)
    if not is_hook(hook):
        raise ValueError(f"residue {hook!r} of {a} is not a hook diagram")
    bottom = Diagram(key_diagram(sorted(a, reverse=True)).cells - removed.cells)
    hook_poset = build_poset(hook)
    p = build_poset(key_diagram(a))
    pairing = {d: Diagram(d.cells - removed.cells) for d in p.elements}
    images = set(pairing.values())
    if len(images) != len(pairing):
        raise ValueError("cell deletion is not injective on the poset")
    iv = hook_poset.interval(hook_poset.index_of(bottom), hook_poset.index_of(hook))
    if images != {hook_poset.elements[i] for i in iv.members}:
        raise ValueError("image is not the expected hook-poset interval")
    for x in p.elements:
        ix = p.index_of(x)
        hx = hook_poset.index_of(pairing[x])
        for y in p.elements:
            if p.le(ix, p.index_of(y)) != hook_poset.le(hx, hook_poset.index_of(pairing[y])):
                raise ValueError("cell deletion is not an order isomorphism")
    return HookEmbedding(removed, hook, bottom, hook_poset, iv, pairing)


# -- transported EL labeling for pure key diagrams ----------------------------------------


def el_labeling_key(a: Iterable[int]) -> tuple[KohnertPoset, EdgeLabeling]:
    """EL labeling for the poset of the key diagram of a pure composition.

    Each basic block's poset is carried into its hook poset, labeled there,
    and the blocks' label ranges are shifted to be disjoint; a cover edge of
    the key poset changes exactly one block and takes that block's label.
    """
    a = composition(a)
    decomposition = pure_decomposition(a)
    p = build_poset(key_diagram(a))
    blocks = decomposition.blocks
    machinery: list[Optional[tuple[HookEmbedding, EdgeLabeling]]] = []
    offsets: list[int] = []
    offset = 0
    for block in blocks:
        if basic_type(block) == "I":
            machinery.append(None)
            offsets.append(offset)
        else:
            emb = hook_embedding(block)
            lab = el_labeling_hook(emb.hook_poset)
            machinery.append((emb, lab))
            offsets.append(offset)
            offset += max(lab.labels.values(), default=0)
    split = {d: split_by_decomposition(d, decomposition) for d in p.elements}
    labels: dict[tuple[int, int], int] = {}
    for x, y in p.covers:
        sx, sy = split[p.elements[x]], split[p.elements[y]]
        changed = [j for j in range(len(blocks)) if sx[j] != sy[j]]
        if len(changed) != 1:
            raise ValueError("cover edge changes more than one block")
        j = changed[0]
        if machinery[j] is None:
            raise ValueError("cover edge changes a one-element block")
        emb, lab = machinery[j]
        hp = emb.hook_poset
        edge = (hp.index_of(emb.pairing[sy[j]].__class__(sx[j].cells - emb.removed.cells)),
                hp.index_of(Diagram(sy[j].cells - emb.removed.cells)))
        labels[(x, y)] = offsets[j] + lab.labels[edge]
    return p, EdgeLabeling(labels)
