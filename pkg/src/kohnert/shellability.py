"""Order complexes, shelling search, and EL-labeling construction/verification.

The shelling decision is exhaustive backtracking over facet orderings with
three exactness-preserving reductions: vertices common to every facet are
dropped (coning), a complex whose facet graph splits into two components of
dimension >= 1 is rejected outright, and orderings are restricted to weakly
decreasing facet size (any shelling can be rearranged into one such).  Failed
prefix sets are memoized, and the search raises past its state budget rather
than guessing.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .diagram import Cell, Diagram, as_hook
from .errors import ShellingBudgetExceeded
from .poset import FinitePoset, Interval, KohnertPoset, _bits

DEFAULT_SHELLING_BUDGET = 1_000_000


@dataclass(frozen=True)
class OrderComplex:
    """Facets are the maximal chains of the source poset, as sorted vertex
    tuples; no facet contains another."""

    vertices: tuple[int, ...]
    facets: tuple[tuple[int, ...], ...]


def order_complex(p: FinitePoset) -> OrderComplex:
    facets = sorted(tuple(sorted(chain)) for chain in p.maximal_chains())
    return OrderComplex(vertices=tuple(range(p.n)), facets=tuple(facets))


def check_shelling(cx: OrderComplex, order: tuple[int, ...]) -> bool:
    """Whether the given facet order satisfies the shelling condition."""
    if sorted(order) != list(range(len(cx.facets))):
        return False
    vid = {v: i for i, v in enumerate(cx.vertices)}
    masks = [_facet_mask(f, vid) for f in cx.facets]
    for pos in range(1, len(order)):
        k = order[pos]
        fk, size = masks[k], len(cx.facets[k])
        rising = 0
        for j in order[:pos]:
            inter = masks[j] & fk
            if bin(inter).count("1") == size - 1:
                rising |= fk & ~inter
        if not rising:
            return False
        for i in order[:pos]:
            if not (rising & ~masks[i]):
                return False
    return True


def _facet_mask(facet: tuple[int, ...], vid: dict[int, int]) -> int:
    m = 0
    for v in facet:
        m |= 1 << vid[v]
    return m


def find_shelling(
    cx: OrderComplex, budget: int = DEFAULT_SHELLING_BUDGET
) -> Optional[tuple[int, ...]]:
    """A shelling order of the facets, or None when no shelling exists.

    Raises ShellingBudgetExceeded when the search state budget runs out.
    """
    t = len(cx.facets)
    if t <= 1:
        return tuple(range(t))
    vid = {v: i for i, v in enumerate(cx.vertices)}
    masks = [_facet_mask(f, vid) for f in cx.facets]
    common = masks[0]
    for m in masks[1:]:
        common &= m
    work = [m & ~common for m in masks]

    # Split into facet-intersection components; two components of dimension
    # >= 1 can never shell (the first facet of the second component meets the
    # prior union in nothing, which has the wrong dimension).
    comp = _components(work)
    dim1 = sorted({comp[i] for i in range(t) if bin(work[i]).count("1") >= 2})
    if len(dim1) >= 2:
        return None
    singles = [i for i in range(t) if not dim1 or comp[i] != dim1[0]]
    main = [i for i in range(t) if dim1 and comp[i] == dim1[0]]
    if not main:
        return tuple(range(t))
    sub = _search([work[i] for i in main], budget)
    if sub is None:
        return None
    return tuple(main[i] for i in sub) + tuple(singles)


def is_shellable(cx: OrderComplex, budget: int = DEFAULT_SHELLING_BUDGET) -> bool:
    return find_shelling(cx, budget) is not None


def _components(masks: list[int]) -> list[int]:
    t = len(masks)
    comp = [-1] * t
    for root in range(t):
        if comp[root] >= 0:
            continue
        comp[root] = root
        stack = [root]
        while stack:
            u = stack.pop()
            for v in range(t):
                if comp[v] < 0 and masks[u] & masks[v]:
                    comp[v] = root
                    stack.append(v)
    return comp


def _search(masks: list[int], budget: int) -> Optional[tuple[int, ...]]:
    t = len(masks)
    sizes = [bin(m).count("1") for m in masks]
    nverts = max(m.bit_length() for m in masks)
    vert_facets = [0] * nverts
    for i, m in enumerate(masks):
        for v in _bits(m):
            vert_facets[v] |= 1 << i
    # goods_from[j] lists (k, missing-vertex mask, facets containing it) for
    # every k that j supports at codimension one
    goods_from: list[list[tuple[int, int, int]]] = [[] for _ in range(t)]
    for j in range(t):
        for k in range(t):
            if j == k:
                continue
            inter = masks[j] & masks[k]
            if bin(inter).count("1") == sizes[k] - 1:
                mv = masks[k] & ~inter
                goods_from[j].append((k, mv, vert_facets[mv.bit_length() - 1]))

    V = [0] * t  # union of missing vertices over placed codim-1 supporters
    B = [0] * t  # placed facets whose intersection is not yet dominated
    failed: set[int] = set()
    order: list[int] = []
    state = {"nodes": 0, "best": 0}

    def place(k: int) -> tuple[list[int], list[int]]:
        snapshot = (V.copy(), B.copy())
        for j, mv, mv_facets in goods_from[k]:
            V[j] |= mv
            B[j] &= mv_facets
        kbit = 1 << k
        for j in range(t):
            if j != k and not (V[j] & ~masks[k]):
                B[j] |= kbit
        return snapshot

    def dfs(placed_mask: int, count: int) -> bool:
        if count == t:
            return True
        if placed_mask in failed:
            return False
        smax = 0
        for k in range(t):
            if not (placed_mask >> k) & 1 and sizes[k] > smax:
                smax = sizes[k]
        for k in range(t):
            if (placed_mask >> k) & 1 or sizes[k] != smax:
                continue
            if count and (not V[k] or B[k]):
                continue
            state["nodes"] += 1
            if state["nodes"] > budget:
                raise ShellingBudgetExceeded(budget, state["nodes"], t, state["best"])
            snapshot = place(k)
            order.append(k)
            state["best"] = max(state["best"], count + 1)
            if dfs(placed_mask | (1 << k), count + 1):
                return True
            order.pop()
            V[:], B[:] = snapshot
        failed.add(placed_mask)
        return False

    if dfs(0, 0):
        return tuple(order)
    return None


# -- two-chain witness intervals ------------------------------------------------


def two_chain_witness(p: FinitePoset) -> Optional[tuple[Interval, int, int]]:
    """First interval whose proper part is two disjoint saturated chains with
    at least two elements each; such an interval has exactly two facets of
    dimension >= 3 meeting in an edge, so it is not shellable and neither is
    any poset containing it."""
    for x in range(p.n):
        for y in _bits(p.up_mask(x)):
            members = p.down_mask(y, True) & p.up_mask(x, True)
            if bin(members).count("1") < 6:
                continue
            chains = _chains_capped(p, x, y, members, cap=3)
            if len(chains) != 2:
                continue
            c1, c2 = chains
            if len(c1) < 4 or len(c2) < 4:
                continue
            if set(c1) & set(c2) != {x, y}:
                continue
            return p.interval(x, y), len(c1) - 2, len(c2) - 2
    return None


def _chains_capped(
    p: FinitePoset, x: int, y: int, members: int, cap: Optional[int] = None
) -> list[tuple[int, ...]]:
    chains: list[tuple[int, ...]] = []
    stack: list[tuple[int, tuple[int, ...]]] = [(x, (x,))]
    while stack:
        u, path = stack.pop()
        if u == y:
            chains.append(path)
            if cap is not None and len(chains) > cap:
                return chains
            continue
        for v in p.cover_up(u):
            if (members >> v) & 1:
                stack.append((v, path + (v,)))
    return chains


# -- EL labelings ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class EdgeLabeling:
    """Integer labels on cover edges (lower id, upper id); for labelings built
    from cell decorations, cell_labels records the per-element decoration."""

    labels: dict[tuple[int, int], int]
    cell_labels: Optional[dict[int, dict[Cell, int]]] = field(default=None, repr=False)

    def vector(self, chain: tuple[int, ...]) -> tuple[int, ...]:
        """Edge labels along a saturated chain, bottom to top."""
        return tuple(self.labels[(chain[i], chain[i + 1])] for i in range(len(chain) - 1))


@dataclass(frozen=True)
class ELFailure:
    bottom: int
    top: int
    reason: str


def el_labeling_hook(p: KohnertPoset) -> EdgeLabeling:
    """Cell-decoration edge labeling for the poset of a hook diagram.

    In the generator, the single-cell columns get labels 1..m-1 left to right,
    and the cells of the rightmost column get labels m, m+1, ... from top to
    bottom.  Every cover edge moves one cell down a single row; labels follow
    the moved cell, and the edge takes the moved cell's label.
    """
    maxes = p.maximal_elements()
    if len(maxes) != 1 or not p.is_bounded():
        raise ValueError("hook labeling needs a bounded poset")
    top = maxes[0]
    top_d = p.elements[top]
    spec = as_hook(top_d)
    if spec is None:
        raise ValueError("top element is not a hook diagram")
    cols = top_d.nonempty_columns()
    m = len(cols)
    decoration: dict[Cell, int] = {}
    for j, c in enumerate(cols[:-1]):
        (r,) = top_d.column(c)
        decoration[(r, c)] = j + 1
    for i, r in enumerate(sorted(top_d.column(cols[-1]), reverse=True)):
        decoration[(r, cols[-1])] = m + i

    cell_labels: list[Optional[dict[Cell, int]]] = [None] * p.n
    cell_labels[top] = decoration
    edge_labels: dict[tuple[int, int], int] = {}
    by_height = sorted(range(p.n), key=lambda i: -bin(p._sdown[i]).count("1"))
    for y in by_height:
        ly = cell_labels[y]
        if ly is None:
            raise ValueError("cover graph does not reach every element from the top")
        y_d = p.elements[y]
        for x in p.cover_down(y):
            x_d = p.elements[x]
            (moved,) = y_d.cells - x_d.cells
            (landed,) = x_d.cells - y_d.cells
            r, c = moved
            if landed != (r - 1, c):
                raise ValueError(f"cover edge drops a cell {r - landed[0]} rows; hook posets drop exactly one")
            lx = dict(ly)
            label = lx.pop(moved)
            lx[landed] = label
            if cell_labels[x] is None:
                cell_labels[x] = lx
            elif cell_labels[x] != lx:
                raise ValueError("cell decoration is path-dependent; not a hook poset")
            edge_labels[(x, y)] = label
    return EdgeLabeling(edge_labels, {i: d for i, d in enumerate(cell_labels) if d is not None})


def verify_el(p: FinitePoset, labeling: EdgeLabeling) -> Optional[ELFailure]:
    """Check the EL conditions on every interval: a unique weakly rising
    maximal chain whose label vector is strictly lexicographically least.
    Returns None when every interval passes."""
    if not p.is_bounded():
        raise ValueError("EL-shellability is defined for bounded posets")
    if set(labeling.labels) != set(p.covers):
        raise ValueError("labeling domain must be exactly the cover-edge set")
    for x in range(p.n):
        for y in _bits(p.up_mask(x)):
            members = p.down_mask(y, True) & p.up_mask(x, True)
            chains = _chains_capped(p, x, y, members)
            vectors = [labeling.vector(c) for c in chains]
            rising = [v for v in vectors if all(a <= b for a, b in zip(v, v[1:]))]
            if len(rising) != 1:
                return ELFailure(x, y, f"{len(rising)} rising chains")
            best = rising[0]
            for v in vectors:
                if v != best and not best < v:
                    return ELFailure(x, y, f"rising vector {best} not lexicographically least vs {v}")
            if vectors.count(best) > 1:
                return ELFailure(x, y, "rising vector tied with a distinct chain")
    return None


def is_el_labeling(p: FinitePoset, labeling: EdgeLabeling) -> bool:
    return verify_el(p, labeling) is None


def hook_chain_label_multiset(
    p: FinitePoset, labeling: EdgeLabeling, chain: tuple[int, ...]
) -> Counter:
    """Multiset of edge labels along a saturated chain."""
    return Counter(labeling.vector(chain))
