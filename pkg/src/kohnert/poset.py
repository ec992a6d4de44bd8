"""Finite posets, Kohnert posets, intervals, products, and isomorphism.

Order data is stored as per-element bitmasks over element indices, which keeps
the transitive closure/reduction and interval computations fast enough for
exhaustive desk-scale sweeps without any third-party dependency.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .diagram import Diagram, _cached_closure_graph, _closure_graph, kohnert_move
from .errors import IsomorphismBudgetExceeded

DEFAULT_ISO_BUDGET = 1_000_000


def _reduce(n: int, sdown: list[int], candidates: Optional[list[list[int]]] = None) -> list[int]:
    """Transitive reduction: cover_down masks from strict down-set masks.

    candidates[x], when given, must contain every possible cover of x.
    """
    cover = [0] * n
    for x in range(n):
        cand = candidates[x] if candidates is not None else None
        redundant = 0
        if cand is None:
            m = sdown[x]
            while m:
                low = m & -m
                redundant |= sdown[low.bit_length() - 1]
                m ^= low
            cover[x] = sdown[x] & ~redundant
        else:
            for y in cand:
                redundant |= sdown[y]
            mask = 0
            for y in cand:
                mask |= 1 << y
            cover[x] = mask & ~redundant
    return cover


class FinitePoset:
    """Partial order on elements 0..n-1.

    Conventions:
      - le(i, j) means i is below-or-equal j.
      - covers are pairs (x, y) with x covered by y.
      - labels, when present, attach an opaque payload to each element.
    """

    def __init__(self, n: int, sdown: list[int], cover_down: list[int], labels=None):
        self.n = n
        self._sdown = sdown
        self._cover_down = cover_down
        self.labels = labels
        self._sup = None
        self._cover_up = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_down_edges(cls, n: int, succs: Sequence[Sequence[int]], labels=None) -> "FinitePoset":
        """Build from a graph of strict down-steps: y in succs[x] means y < x."""
        sdown = [None] * n  # type: ignore[list-item]
        order = _toposort(n, succs)
        for x in order:
            m = 0
            for y in succs[x]:
                m |= (1 << y) | sdown[y]
            sdown[x] = m
        cover_down = _reduce(n, sdown, [list(s) for s in succs])
        return cls(n, sdown, cover_down, labels)

    @classmethod
    def from_cover_pairs(cls, n: int, covers: Iterable[tuple[int, int]], labels=None) -> "FinitePoset":
        """Build from cover pairs (lower, upper)."""
        succs: list[list[int]] = [[] for _ in range(n)]
        for lo, hi in covers:
            succs[hi].append(lo)
        return cls.from_down_edges(n, succs, labels)

    @classmethod
    def chain(cls, n: int) -> "FinitePoset":
        return cls.from_cover_pairs(n, [(i, i + 1) for i in range(n - 1)])

    # -- basic queries --------------------------------------------------------

    def le(self, i: int, j: int) -> bool:
        return i == j or bool((self._sdown[j] >> i) & 1)

    def lt(self, i: int, j: int) -> bool:
        return bool((self._sdown[j] >> i) & 1)

    def down_mask(self, j: int, inclusive: bool = False) -> int:
        return self._sdown[j] | ((1 << j) if inclusive else 0)

    def up_mask(self, i: int, inclusive: bool = False) -> int:
        if self._sup is None:
            sup = [0] * self.n
            for j in range(self.n):
                m = self._sdown[j]
                while m:
                    low = m & -m
                    sup[low.bit_length() - 1] |= 1 << j
                    m ^= low
            self._sup = sup
        return self._sup[i] | ((1 << i) if inclusive else 0)

    def cover_down(self, x: int) -> list[int]:
        return _bits(self._cover_down[x])

    def cover_up(self, x: int) -> list[int]:
        if self._cover_up is None:
            ups: list[list[int]] = [[] for _ in range(self.n)]
            for y in range(self.n):
                for x_ in self.cover_down(y):
                    ups[x_].append(y)
            self._cover_up = [sorted(u) for u in ups]
        return self._cover_up[x]

    @property
    def covers(self) -> list[tuple[int, int]]:
        out = []
        for y in range(self.n):
            for x in self.cover_down(y):
                out.append((x, y))
        return sorted(out)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FinitePoset)
            and self.n == other.n
            and self._sdown == other._sdown
        )

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, covers={len(self.covers)})"

    # -- structural predicates ---------------------------------------------------

    def minimal_elements(self) -> list[int]:
        return [i for i in range(self.n) if self._sdown[i] == 0]

    def maximal_elements(self) -> list[int]:
        return [i for i in range(self.n) if not self.cover_up(i)]

    def is_bounded(self) -> bool:
        return len(self.minimal_elements()) == 1 and len(self.maximal_elements()) == 1

    def is_ranked(self) -> bool:
        """Whether an integer potential stepping by exactly 1 along every cover
        exists; decided by propagation over the undirected cover graph."""
        pot: dict[int, int] = {}
        neighbors: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for x, y in self.covers:
            neighbors[x].append((y, 1))
            neighbors[y].append((x, -1))
        for start in range(self.n):
            if start in pot:
                continue
            pot[start] = 0
            stack = [start]
            while stack:
                u = stack.pop()
                for v, step in neighbors[u]:
                    want = pot[u] + step
                    if v in pot:
                        if pot[v] != want:
                            return False
                    else:
                        pot[v] = want
                        stack.append(v)
        return True

    def _maximal_chain_lengths(self) -> set[int]:
        order = sorted(range(self.n), key=lambda x: bin(self._sdown[x]).count("1"))
        down_lengths: list[set[int]] = [set() for _ in range(self.n)]
        for x in order:
            below = self.cover_down(x)
            if not below:
                down_lengths[x] = {0}
            else:
                down_lengths[x] = {l + 1 for y in below for l in down_lengths[y]}
        lengths: set[int] = set()
        for m in self.maximal_elements():
            lengths |= down_lengths[m]
        return lengths

    def is_pure(self) -> bool:
        """All maximal chains share one length."""
        return len(self._maximal_chain_lengths()) <= 1

    def is_graded(self) -> bool:
        return self.is_bounded() and self.is_pure()

    # -- chains and intervals ----------------------------------------------------

    def maximal_chains(self, within: Optional[int] = None) -> list[tuple[int, ...]]:
        """Inclusion-maximal chains as tuples of element ids, bottom to top.

        within, when given, restricts to elements of that bitmask (used for
        interval chain enumeration).
        """
        members = within if within is not None else (1 << self.n) - 1
        starts = [
            i for i in _bits(members)
            if not (self._sdown[i] & members)
        ]
        chains = []
        stack = [(i, (i,)) for i in reversed(starts)]
        while stack:
            x, path = stack.pop()
            ups = [y for y in self.cover_up(x) if (members >> y) & 1]
            if not ups:
                chains.append(path)
            else:
                for y in reversed(ups):
                    stack.append((y, path + (y,)))
        return chains

    def interval(self, x: int, y: int) -> "Interval":
        if not self.le(x, y):
            raise ValueError(f"{x} is not below {y}; interval is undefined")
        members_mask = self.down_mask(y, inclusive=True) & self.up_mask(x, inclusive=True)
        members = _bits(members_mask)
        local = {g: i for i, g in enumerate(members)}
        k = len(members)
        sdown = [0] * k
        for g in members:
            m = self._sdown[g] & members_mask
            acc = 0
            while m:
                low = m & -m
                acc |= 1 << local[low.bit_length() - 1]
                m ^= low
            sdown[local[g]] = acc
        cover_down = _reduce(k, sdown)
        sub = FinitePoset(k, sdown, cover_down, labels=list(members))
        return Interval(parent=self, bottom=x, top=y, members=tuple(members), poset=sub)


@dataclass
class Interval:
    """The subposet [bottom, top] of parent; poset is reindexed with labels
    mapping local ids back to parent ids."""

    parent: FinitePoset
    bottom: int
    top: int
    members: tuple[int, ...]
    poset: FinitePoset = field(repr=False)

    def maximal_chains(self) -> list[tuple[int, ...]]:
        """Maximal chains in parent ids, bottom to top."""
        return [
            tuple(self.members[i] for i in chain)
            for chain in self.poset.maximal_chains()
        ]

    def __len__(self) -> int:
        return len(self.members)


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _toposort(n: int, succs: Sequence[Sequence[int]]) -> list[int]:
    """Order with successors (strictly lower elements) before their sources."""
    state = [0] * n  # 0 unvisited, 1 on stack, 2 done
    order: list[int] = []
    for root in range(n):
        if state[root]:
            continue
        stack = [(root, 0)]
        state[root] = 1
        while stack:
            x, i = stack.pop()
            if i < len(succs[x]):
                stack.append((x, i + 1))
                y = succs[x][i]
                if state[y] == 0:
                    state[y] = 1
                    stack.append((y, 0))
                elif state[y] == 1:
                    raise ValueError("move graph is cyclic; not a poset")
            else:
                state[x] = 2
                order.append(x)
    return order


# -- Kohnert posets ---------------------------------------------------------------


class KohnertPoset(FinitePoset):
    """Poset of all diagrams reachable from a generator, ordered by
    reachability under Kohnert moves; elements are canonically sorted."""

    def __init__(self, elements: Sequence[Diagram], succs: Sequence[Sequence[int]], generator: Diagram):
        base = FinitePoset.from_down_edges(len(elements), succs, labels=list(elements))
        super().__init__(base.n, base._sdown, base._cover_down, base.labels)
        self.elements: list[Diagram] = list(elements)
        self.generator = generator
        self._index = {d: i for i, d in enumerate(self.elements)}

    def index_of(self, d: Diagram) -> int:
        return self._index[d]

    def __contains__(self, d: Diagram) -> bool:
        return d in self._index

    # -- exports ---------------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "elements": [e.to_json_dict() for e in self.elements],
            "covers": [[x, y] for x, y in self.covers],
        }

    def to_dot(self, labels: str = "grid", edge_labels: Optional[dict[tuple[int, int], int]] = None) -> str:
        lines = ["digraph kohnert {", "  rankdir=BT;"]
        for i, e in enumerate(self.elements):
            if labels == "grid":
                text = e.to_grid().replace("\n", "\\n") or "(empty)"
            else:
                text = str(i)
            lines.append(f'  {i} [shape=box, fontname="monospace", label="{text}"];')
        for x, y in self.covers:
            if edge_labels is not None and (x, y) in edge_labels:
                lines.append(f'  {x} -> {y} [label="{edge_labels[(x, y)]}"];')
            else:
                lines.append(f"  {x} -> {y};")
        lines.append("}")
        return "\n".join(lines)


_POSET_CACHE: dict[Diagram, KohnertPoset] = {}


def build_poset(d: Diagram, budget: Optional[int] = None) -> KohnertPoset:
    """The Kohnert poset of d.  Results for the default budget are cached."""
    if budget is None:
        cached = _POSET_CACHE.get(d)
        if cached is None:
            elements, succs = _cached_closure_graph(d)
            cached = _POSET_CACHE[d] = KohnertPoset(list(elements), succs, d)
        return cached
    elements, succs = _closure_graph(d, budget)
    return KohnertPoset(elements, succs, d)


def minimal_elements(p: FinitePoset) -> list[int]:
    return p.minimal_elements()


def maximal_elements(p: FinitePoset) -> list[int]:
    return p.maximal_elements()


def is_bounded(p: FinitePoset) -> bool:
    return p.is_bounded()


def cover_check_single_move(p: KohnertPoset, d1: Diagram, d2: Diagram) -> bool:
    """Whether a single-move pair d2 < d1 is a covering pair, decided from the
    cell geometry alone: every row strictly between the source and target must
    hold a cell strictly right of the moved column."""
    removed = d1.cells - d2.cells
    added = d2.cells - d1.cells
    if len(removed) != 1 or len(added) != 1:
        raise ValueError("d2 must differ from d1 by one moved cell")
    (r, c), (r2, c2) = next(iter(removed)), next(iter(added))
    if c != c2 or r2 >= r or kohnert_move(d1, r) != d2:
        raise ValueError("d2 is not the single-move image of d1")
    return all(
        any(cc > c for rr, cc in d1.cells if rr == mid)
        for mid in range(r2 + 1, r)
    )


# -- products and isomorphism ----------------------------------------------------


def direct_product(p: FinitePoset, q: FinitePoset) -> FinitePoset:
    """Componentwise order on pairs; element (i, j) gets index i*q.n + j and
    label (label_p, label_q)."""
    n = p.n * q.n
    q_incl = [q.down_mask(j, inclusive=True) for j in range(q.n)]
    sdown = [0] * n
    for k in range(p.n):
        p_incl = p.down_mask(k, inclusive=True)
        for l in range(q.n):
            acc = 0
            m = p_incl
            while m:
                low = m & -m
                acc |= q_incl[l] << ((low.bit_length() - 1) * q.n)
                m ^= low
            idx = k * q.n + l
            sdown[idx] = acc & ~(1 << idx)
    cover_down = _reduce(n, sdown)
    lp = p.labels if p.labels is not None else list(range(p.n))
    lq = q.labels if q.labels is not None else list(range(q.n))
    labels = [(lp[k], lq[l]) for k in range(p.n) for l in range(q.n)]
    return FinitePoset(n, sdown, cover_down, labels)


def _refine_classes(p: FinitePoset) -> list[int]:
    sig = [
        (
            bin(p._sdown[i]).count("1"),
            bin(p.up_mask(i)).count("1"),
            len(p.cover_down(i)),
            len(p.cover_up(i)),
        )
        for i in range(p.n)
    ]
    classes = _canon_classes(sig)
    for _ in range(p.n):
        new_sig = [
            (
                classes[i],
                tuple(sorted(classes[j] for j in p.cover_down(i))),
                tuple(sorted(classes[j] for j in p.cover_up(i))),
            )
            for i in range(p.n)
        ]
        new_classes = _canon_classes(new_sig)
        if new_classes == classes:
            break
        classes = new_classes
    return classes


def _canon_classes(sig: list) -> list[int]:
    ordered = {s: k for k, s in enumerate(sorted(set(sig)))}
    return [ordered[s] for s in sig]


def are_isomorphic(p: FinitePoset, q: FinitePoset, budget: int = DEFAULT_ISO_BUDGET) -> bool:
    """Order-isomorphism by class-refined backtracking; raises
    IsomorphismBudgetExceeded past the node budget."""
    if p.n != q.n:
        return False
    cp, cq = _refine_classes(p), _refine_classes(q)
    if sorted(cp) != sorted(cq):
        return False
    order = sorted(range(p.n), key=lambda i: (cp.count(cp[i]), i))
    by_class: dict[int, list[int]] = {}
    for j in range(q.n):
        by_class.setdefault(cq[j], []).append(j)
    mapping: dict[int, int] = {}
    used: set[int] = set()
    nodes = 0

    def extend(depth: int) -> bool:
        nonlocal nodes
        if depth == len(order):
            return True
        i = order[depth]
        for j in by_class.get(cp[i], ()):
            if j in used:
                continue
            nodes += 1
            if nodes > budget:
                raise IsomorphismBudgetExceeded(budget, nodes, depth)
            ok = all(
                p.le(i, u) == q.le(j, v)
                and p.le(u, i) == q.le(v, j)
                for u, v in mapping.items()
            )
            if ok:
                mapping[i] = j
                used.add(j)
                if extend(depth + 1):
                    return True
                del mapping[i]
                used.remove(j)
        return False

    return extend(0)
