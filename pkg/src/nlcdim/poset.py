"""Finite posets, alternating cycles, reversibility and brute-force oracles.

A :class:`Poset` stores its order as one bitmask per element (``up[i]`` has
bit ``j`` set iff ``elements[i] <= elements[j]``).  Elements are opaque
strings kept in sorted order.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from .config import DEFAULT_GUARDS
from .errors import BadParameter, CycleInInput, NotIncomparable, TooLarge

Pair = Tuple[str, str]


class Poset:
    """Immutable finite poset."""

    __slots__ = ("elements", "index", "up", "down")

    def __init__(self, elements: Iterable[str], up: Sequence[int]):
        self.elements: Tuple[str, ...] = tuple(elements)
        self.index: Dict[str, int] = {x: i for i, x in enumerate(self.elements)}
        self.up: Tuple[int, ...] = tuple(up)
        down = [0] * len(self.elements)
        for i, mask in enumerate(self.up):
            for j in _bits(mask):
                down[j] |= 1 << i
        self.down: Tuple[int, ...] = tuple(down)

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"Poset({len(self)} elements, {len(self.strict_relations())} relations)"

    def __eq__(self, other) -> bool:
        return (isinstance(other, Poset) and self.elements == other.elements
                and self.up == other.up)

    def __hash__(self) -> int:
        return hash((self.elements, self.up))

    def leq(self, x: str, y: str) -> bool:
        return bool(self.up[self.index[x]] >> self.index[y] & 1)

    def lt(self, x: str, y: str) -> bool:
        return x != y and self.leq(x, y)

    def comparable(self, x: str, y: str) -> bool:
        return self.leq(x, y) or self.leq(y, x)

    def incomparable(self, x: str, y: str) -> bool:
        return not self.comparable(x, y)

    def strict_relations(self) -> List[Pair]:
        return [(x, y) for x in self.elements for y in self.elements
                if x != y and self.leq(x, y)]

    def incomparable_pairs(self) -> List[Pair]:
        """All ordered pairs (x, y) with x and y incomparable."""
        return [(x, y) for x in self.elements for y in self.elements
                if x != y and self.incomparable(x, y)]

    def subposet(self, keep: Iterable[str]) -> "Poset":
        keep = sorted(set(keep))
        idx = [self.index[x] for x in keep]
        up = []
        for i in idx:
            mask = 0
            for nj, j in enumerate(idx):
                if self.up[i] >> j & 1:
                    mask |= 1 << nj
            up.append(mask)
        return Poset(keep, up)

    def is_valid(self) -> bool:
        """Reflexive, antisymmetric and transitive, by exhaustive check."""
        n = len(self)
        for i in range(n):
            if not self.up[i] >> i & 1:
                return False
            for j in range(n):
                if i != j and self.up[i] >> j & 1 and self.up[j] >> i & 1:
                    return False
                if self.up[i] >> j & 1 and self.up[j] & ~self.up[i]:
                    return False
        return True


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def poset_from_cover_relations(elements: Iterable[str],
                               covers: Iterable[Pair]) -> Poset:
    """Reflexive-transitive closure of the given arcs."""
    elems = sorted(set(elements))
    index = {x: i for i, x in enumerate(elems)}
    succ: List[int] = [0] * len(elems)
    for a, b in covers:
        if a not in index or b not in index:
            raise BadParameter(f"relation ({a}, {b}) uses an undeclared element")
        succ[index[a]] |= 1 << index[b]
    up = []
    for i in range(len(elems)):
        seen = 1 << i
        frontier = succ[i]
        while frontier & ~seen:
            new = frontier & ~seen
            seen |= new
            frontier = 0
            for j in _bits(new):
                frontier |= succ[j]
        up.append(seen)
    for i in range(len(elems)):
        for j in _bits(up[i]):
            if j != i and up[j] >> i & 1:
                raise CycleInInput(f"{elems[i]} and {elems[j]} lie on a cycle")
    return Poset(elems, up)


def poset_from_leq(elements: Iterable[str], leq) -> Poset:
    """Poset from a predicate ``leq(x, y)``; validity is checked."""
    elems = sorted(set(elements))
    up = []
    for x in elems:
        mask = 0
        for j, y in enumerate(elems):
            if x == y or leq(x, y):
                mask |= 1 << j
        up.append(mask)
    p = Poset(elems, up)
    if not p.is_valid():
        raise CycleInInput("relation is not a partial order")
    return p


def cover_graph(p: Poset) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(p.elements)
    n = len(p)
    for i in range(n):
        above = p.up[i] & ~(1 << i)
        for j in _bits(above):
            # j covers i iff nothing strictly between
            between = above & p.down[j] & ~(1 << j)
            if not between:
                g.add_edge(p.elements[i], p.elements[j])
    return g


# ---------------------------------------------------------------------------
# alternating cycles and reversibility

@dataclass(frozen=True)
class AlternatingCycle:
    pairs: Tuple[Pair, ...]

    def __len__(self) -> int:
        return len(self.pairs)


def is_strict_alternating_cycle(p: Poset, pairs: Sequence[Pair]) -> bool:
    """Pairs incomparable and x_i <= y_j exactly when j = i + 1 cyclically."""
    m = len(pairs)
    if m < 2:
        return False
    for x, y in pairs:
        if x == y or not p.incomparable(x, y):
            return False
    for i, (x, _) in enumerate(pairs):
        for j, (_, y) in enumerate(pairs):
            if p.leq(x, y) != (j == (i + 1) % m):
                return False
    return True


def _check_pairs(p: Poset, pairs: Iterable[Pair]) -> List[Pair]:
    out = []
    for x, y in pairs:
        if x == y or not p.incomparable(x, y):
            raise NotIncomparable(f"({x}, {y}) is not an incomparable pair")
        out.append((x, y))
    return out


def find_alternating_cycle(p: Poset, pairs: Iterable[Pair]) -> Optional[AlternatingCycle]:
    """Shortest alternating cycle among ``pairs`` or None.

    The pair digraph has an arc i -> j iff x_i <= y_j.  A shortest directed
    cycle has no chords, which is exactly strictness.
    """
    pairs = sorted(set(_check_pairs(p, pairs)))
    m = len(pairs)
    xs = [p.index[x] for x, _ in pairs]
    ys = [p.index[y] for _, y in pairs]
    succ = [[j for j in range(m) if p.up[xs[i]] >> ys[j] & 1] for i in range(m)]
    best: Optional[List[int]] = None
    for s in range(m):
        # BFS from s looking for the shortest path back to s
        prev = {s: None}
        queue = deque([s])
        found = None
        while queue and found is None:
            u = queue.popleft()
            for v in succ[u]:
                if v == s:
                    found = u
                    break
                if v not in prev:
                    prev[v] = u
                    queue.append(v)
        if found is None:
            continue
        cyc = []
        u = found
        while u is not None:
            cyc.append(u)
            u = prev[u]
        cyc.reverse()
        if best is None or len(cyc) < len(best):
            best = cyc
            if len(best) == 2:
                break
    if best is None:
        return None
    return AlternatingCycle(tuple(pairs[i] for i in best))


def is_reversible(p: Poset, s: Iterable[Pair]) -> Tuple[bool, Optional[AlternatingCycle]]:
    cyc = find_alternating_cycle(p, s)
    return cyc is None, cyc


def certify_coloring(p: Poset, coloring: Mapping[Pair, Hashable]) -> bool:
    """True iff the coloring covers every incomparable pair and no class has an alternating cycle."""
    classes: Dict[Hashable, List[Pair]] = {}
    for pair in p.incomparable_pairs():
        if pair not in coloring:
            return False
        classes.setdefault(coloring[pair], []).append(pair)
    return all(find_alternating_cycle(p, cls) is None for cls in classes.values())


def color_count(coloring: Mapping[Pair, Hashable]) -> int:
    return len(set(coloring.values()))


def critical_pairs(p: Poset) -> List[Pair]:
    """Incomparable (x, y) with every z < x below y and every z > y above x."""
    out = []
    n = len(p)
    for i in range(n):
        for j in range(n):
            if i == j or p.up[i] >> j & 1 or p.up[j] >> i & 1:
                continue
            below_x = p.down[i] & ~(1 << i)
            above_y = p.up[j] & ~(1 << j)
            if below_x & ~p.down[j] == 0 and above_y & ~p.up[i] == 0:
                out.append((p.elements[i], p.elements[j]))
    return out


def _partition_search(p: Poset, pairs: List[Pair], d: int) -> Optional[List[int]]:
    """Assign each pair one of d classes so every class is reversible."""
    n = len(p)
    idx = [(p.index[x], p.index[y]) for x, y in pairs]
    # reach[c][u]: vertices reachable from u in P plus the reversed arcs of class c
    base = list(p.up)
    assignment = [-1] * len(pairs)

    def add_arc(reach, a, b):
        # arc a -> b (a placed below b); fails if b already reaches a
        if reach[b] >> a & 1:
            return None
        new = list(reach)
        gain = reach[b]
        for u in range(n):
            if reach[u] >> a & 1:
                new[u] = reach[u] | gain
        return new

    def rec(k, reaches, used):
        if k == len(idx):
            return True
        xi, yi = idx[k]
        limit = min(used + 1, d)
        for c in range(limit):
            new = add_arc(reaches[c], yi, xi)
            if new is None:
                continue
            assignment[k] = c
            saved = reaches[c]
            reaches[c] = new
            if rec(k + 1, reaches, max(used, c + 1)):
                return True
            reaches[c] = saved
        return False

    if rec(0, [list(base) for _ in range(d)], 0):
        return assignment
    return None


def _order_pairs(p: Poset, pairs: List[Pair]) -> List[Pair]:
    # pairs that conflict with many others first; deterministic tie-break
    conflicts = {}
    for a in pairs:
        conflicts[a] = sum(1 for b in pairs
                           if p.leq(a[0], b[1]) and p.leq(b[0], a[1]))
    return sorted(pairs, key=lambda q: (-conflicts[q], q))


def brute_force_dimension(p: Poset, *, critical_only: bool = True,
                          guard: Optional[int] = None) -> int:
    """Least d such that the (critical) incomparable pairs split into d reversible sets."""
    guard = DEFAULT_GUARDS.oracle_elements if guard is None else guard
    if len(p) > guard:
        raise TooLarge(f"{len(p)} elements exceeds oracle guard {guard}")
    pairs = critical_pairs(p) if critical_only else p.incomparable_pairs()
    if not pairs:
        return 1
    pairs = _order_pairs(p, pairs)
    d = 2
    while True:
        if _partition_search(p, pairs, d) is not None:
            return d
        d += 1


def dimension_coloring(p: Poset, d: int) -> Optional[Dict[Pair, int]]:
    """A proper d-coloring of all incomparable pairs, if one exists."""
    pairs = _order_pairs(p, p.incomparable_pairs())
    if not pairs:
        return {}
    got = _partition_search(p, pairs, d)
    if got is None:
        return None
    return dict(zip(pairs, got))


# ---------------------------------------------------------------------------
# standard and Kelly examples

def standard_example(k: int) -> Poset:
    if k < 2:
        raise BadParameter("standard example needs k >= 2")
    a = [f"a{i}" for i in range(1, k + 1)]
    b = [f"b{i}" for i in range(1, k + 1)]
    covers = [(a[i], b[j]) for i in range(k) for j in range(k) if i != j]
    return poset_from_cover_relations(a + b, covers)


def kelly_names(k: int):
    """Element names (a, b, c, d) of the Kelly example; a and b cover 2..k-1."""
    a = {j: f"a{j}" for j in range(2, k)}
    b = {j: f"b{j}" for j in range(2, k)}
    c = {i: f"c{i}" for i in range(1, k)}
    d = {i: f"d{i}" for i in range(1, k)}
    return a, b, c, d


def kelly_example(k: int) -> Poset:
    """Kelly example with c ascending and d descending."""
    if k < 3:
        raise BadParameter("Kelly example needs k >= 3")
    a, b, c, d = kelly_names(k)
    rel = []
    for i in range(1, k):
        rel += [(a[j], c[i]) for j in range(2, i + 1)]
        rel += [(c[i], b[j]) for j in range(i + 1, k)]
        rel += [(a[j], d[i]) for j in range(i + 1, k)]
        rel += [(d[i], b[j]) for j in range(2, i + 1)]
    rel += [(c[i], c[i + 1]) for i in range(1, k - 1)]
    rel += [(d[i + 1], d[i]) for i in range(1, k - 1)]
    elems = list(a.values()) + list(b.values()) + list(c.values()) + list(d.values())
    return poset_from_cover_relations(elems, rel)


def kelly_standard_pairs(k: int) -> Tuple[List[str], List[str]]:
    """The pairs (c1,d1), (a2,b2), ..., (a_{k-1},b_{k-1}), (d_{k-1},c_{k-1}) inducing S_k."""
    a, b, c, d = kelly_names(k)
    xs = [c[1]] + [a[j] for j in range(2, k)] + [d[k - 1]]
    ys = [d[1]] + [b[j] for j in range(2, k)] + [c[k - 1]]
    return xs, ys


def kelly_canonical_witness(k: int):
    """(a[1..k], b[1..k], c[1..k-1], d[1..k-1]) for the Kelly example itself."""
    a, b, c, d = kelly_names(k)
    aa = [c[1]] + [a[j] for j in range(2, k)] + [d[k - 1]]
    bb = [d[1]] + [b[j] for j in range(2, k)] + [c[k - 1]]
    cc = [c[i] for i in range(1, k)]
    dd = [d[i] for i in range(1, k)]
    return aa, bb, cc, dd


def check_standard_subposet(p: Poset, a: Sequence[str], b: Sequence[str]) -> bool:
    k = len(a)
    if k != len(b) or k < 2 or len(set(a) | set(b)) != 2 * k:
        return False
    if any(x not in p.index for x in list(a) + list(b)):
        return False
    for i in range(k):
        for j in range(k):
            if i != j:
                if not p.lt(a[i], b[j]):
                    return False
                if p.comparable(a[i], a[j]) or p.comparable(b[i], b[j]):
                    return False
        if p.comparable(a[i], b[i]):
            return False
    return True


def check_kelly_conditions(p: Poset, a: Sequence[str], b: Sequence[str],
                           c: Sequence[str], d: Sequence[str]) -> bool:
    """The three sufficient conditions for inducing a Kelly example.

    Lists are 0-based: a[0] is a_1 and c[0] is c_1.
    """
    k = len(a)
    if k < 3 or len(b) != k or len(c) != k - 1 or len(d) != k - 1:
        return False
    le = p.leq
    for j in range(k - 1):
        if not (le(a[j], c[j]) and le(c[j], b[j + 1])):
            return False
        if not (le(d[j], b[j]) and le(a[j + 1], d[j])):
            return False
    for j in range(k - 2):
        if not le(c[j], c[j + 1]) or not le(d[j + 1], d[j]):
            return False
    return all(not le(a[j], b[j]) for j in range(k))


def kelly_designated(a: Sequence[str], b: Sequence[str], c: Sequence[str],
                     d: Sequence[str]) -> List[str]:
    """The 4k-6 elements a_2..a_{k-1}, b_2..b_{k-1}, c, d."""
    k = len(a)
    return list(a[1:k - 1]) + list(b[1:k - 1]) + list(c) + list(d)


def is_isomorphic(p: Poset, q: Poset) -> bool:
    g1 = nx.DiGraph()
    g1.add_nodes_from(p.elements)
    g1.add_edges_from(p.strict_relations())
    g2 = nx.DiGraph()
    g2.add_nodes_from(q.elements)
    g2.add_edges_from(q.strict_relations())
    return nx.is_isomorphic(g1, g2)


def standard_example_number(p: Poset, *, guard: Optional[int] = None) -> int:
    """Largest k with S_k a subposet, 1 if there is none.

    Incomparable pairs (x, y) and (x', y') can sit together in a standard
    example iff x < y' and x' < y; the answer is a maximum clique in that
    compatibility graph.
    """
    guard = DEFAULT_GUARDS.oracle_elements if guard is None else guard
    if len(p) > guard:
        raise TooLarge(f"{len(p)} elements exceeds oracle guard {guard}")
    pairs = p.incomparable_pairs()
    if not pairs:
        return 1
    g = nx.Graph()
    g.add_nodes_from(pairs)
    for (x, y), (u, v) in itertools.combinations(pairs, 2):
        if len({x, y, u, v}) == 4 and p.lt(x, v) and p.lt(u, y):
            g.add_edge((x, y), (u, v))
    best = 1
    for clique in nx.find_cliques(g):
        if len(clique) >= 2 and len(clique) > best:
            a = [x for x, _ in clique]
            b = [y for _, y in clique]
            if check_standard_subposet(p, a, b):
                best = len(clique)
    return best


def chain(n: int, prefix: str = "x") -> Poset:
    elems = [f"{prefix}{i}" for i in range(n)]
    return poset_from_cover_relations(elems, list(zip(elems, elems[1:])))


def antichain(n: int, prefix: str = "x") -> Poset:
    return poset_from_cover_relations([f"{prefix}{i}" for i in range(n)], [])
