"""Splits of rooted trees and the structures they induce.

A split assigns a level in ``1..order`` to every inner node (non-root,
non-leaf).  Forward Ramseyan splits are found by :func:`colcombet_split`,
which searches level by level and is always re-checked by the independent
:func:`is_forward_ramseyan`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from .config import DEFAULT_GUARDS
from .errors import BadParameter, NotDecent, SearchExhausted, TooLarge
from .nlc import NLCDecomposition
from .semigroup import FiniteSemigroup, SemigroupLabeledTree
from .trees import RootedTree


@dataclass(frozen=True)
class Split:
    assignment: Mapping[Hashable, int]
    order: int

    def __getitem__(self, u) -> int:
        return self.assignment[u]

    def get(self, u, default=None):
        return self.assignment.get(u, default)

    def is_valid_for(self, tree: RootedTree) -> bool:
        return (set(self.assignment) == set(tree.inner_nodes())
                and all(1 <= v <= self.order for v in self.assignment.values()))


@dataclass(frozen=True)
class HSubtree:
    root: Hashable
    nodes: Tuple[Hashable, ...]
    leaves: Tuple[Hashable, ...]

    def inner(self) -> Tuple[Hashable, ...]:
        ls = set(self.leaves)
        return tuple(u for u in self.nodes if u != self.root and u not in ls)


@dataclass(frozen=True)
class HChain:
    h: int
    nodes: Tuple[Hashable, ...]

    @property
    def length(self) -> int:
        return len(self.nodes) - 1


@dataclass(frozen=True)
class HCross:
    h: int
    u: Hashable
    v: Hashable
    x: str
    y: str
    sigma: Tuple[int, ...]


@dataclass(frozen=True)
class EhClassPartition:
    h: int
    classes: Tuple[Tuple[int, ...], ...]

    def class_of(self, g: int) -> Tuple[int, ...]:
        for c in self.classes:
            if g in c:
                return c
        raise KeyError(g)


# ---------------------------------------------------------------------------
# neighbors and subtrees

def h_neighbors(tree: RootedTree, s: Split, h: int) -> List[Tuple[Hashable, Hashable]]:
    out = []
    for v in tree.preorder():
        if s.get(v) != h:
            continue
        for a in tree.ancestors(v):
            sa = s.get(a)
            if sa is None or sa > h:
                break
            if sa == h:
                out.append((a, v))
    return out


def h_subtrees(tree: RootedTree, s: Split, h: int) -> List[HSubtree]:
    """Maximal proper subtrees whose inner nodes all have level <= h."""
    if not 0 <= h <= s.order:
        raise BadParameter(f"level {h} outside 0..{s.order}")
    roots = [tree.root] + [u for u in tree.inner_nodes() if s[u] > h]
    out = []
    for r in roots:
        nodes = [r]
        leaves = []
        stack = list(reversed(tree.children(r)))
        while stack:
            w = stack.pop()
            nodes.append(w)
            if tree.is_leaf(w) or s[w] > h:
                leaves.append(w)
            else:
                stack.extend(reversed(tree.children(w)))
        out.append(HSubtree(r, tuple(nodes), tuple(leaves)))
    return out


def trivial_split(tree: RootedTree) -> Split:
    """Level = 1 + the longest downward distance to an inner node."""
    height: Dict[Hashable, int] = {}
    for u in tree.postorder():
        if tree.is_leaf(u) or u == tree.root:
            continue
        height[u] = 1 + max((height[c] for c in tree.children(u) if c in height), default=0)
    return Split(height, max(height.values(), default=0))


# ---------------------------------------------------------------------------
# forward Ramseyan check

def is_forward_ramseyan(lt: SemigroupLabeledTree, s: Split):
    """Return (True, None) or (False, (h, (u, v), (u2, v2))) for a violating pair."""
    tree = lt.tree
    inner = set(tree.inner_nodes())
    # neighbor pairs recomputed here from the definition
    by_level: Dict[int, List[Tuple[Hashable, Hashable]]] = {}
    for u in inner:
        for v in inner:
            if u == v or not tree.is_ancestor(u, v) or s[u] != s[v]:
                continue
            between = tree.path(u, v)[1:-1]
            if all(s[w] <= s[u] for w in between):
                by_level.setdefault(s[u], []).append((u, v))
    for h in sorted(by_level):
        pairs = sorted(by_level[h], key=repr)
        for a in pairs:
            la = lt.lam(*a)
            for b in pairs:
                if lt.mul(la, lt.lam(*b)) != la:
                    return False, (h, a, b)
    return True, None


# ---------------------------------------------------------------------------
# split search

_MARK = ("__mark__",)


def _left_zero_families(values: List[Hashable], mul) -> List[Tuple[Hashable, ...]]:
    """Maximal sets of idempotents e with ef = e for all members e, f."""
    idem = [e for e in values if mul(e, e) == e]
    if not idem:
        return [()]
    g = nx.Graph()
    g.add_nodes_from(range(len(idem)))
    for i, j in itertools.combinations(range(len(idem)), 2):
        e, f = idem[i], idem[j]
        if mul(e, f) == e and mul(f, e) == f:
            g.add_edge(i, j)
    cliques = sorted(tuple(sorted(c)) for c in nx.find_cliques(g))
    return [tuple(idem[i] for i in c) for c in cliques]


def _search_with_family(lt: SemigroupLabeledTree, family: Sequence[frozenset]) -> Optional[Dict]:
    tree = lt.tree
    p = len(family)
    mul = lt.mul
    memo: Dict[Tuple[Hashable, tuple], Optional[int]] = {}

    def advance(state, label):
        return tuple(None if x is None else (label if x is _MARK else mul(x, label))
                     for x in state)

    def feasible(v, state) -> bool:
        key = (v, state)
        if key in memo:
            return memo[key] is not None
        kids = tree.children(v)
        if not kids:
            memo[key] = 0
            return True
        if v == tree.root:
            choices = [0]
        else:
            choices = range(1, p + 1)
        memo[key] = None
        for h in choices:
            if h:
                cur = state[h - 1]
                if cur is not None and cur not in family[h - 1]:
                    continue
                new = tuple(None if i < h - 1 else (_MARK if i == h - 1 else state[i])
                            for i in range(p))
            else:
                new = state
            if all(feasible(c, advance(new, lt.labels[c])) for c in kids):
                memo[key] = h
                return True
        return False

    start = tuple([None] * p)
    if not feasible(tree.root, start):
        return None
    assignment = {}

    def rebuild(v, state):
        h = memo[(v, state)]
        kids = tree.children(v)
        if not kids:
            return
        if h:
            assignment[v] = h
            new = tuple(None if i < h - 1 else (_MARK if i == h - 1 else state[i])
                        for i in range(p))
        else:
            new = state
        for c in kids:
            rebuild(c, advance(new, lt.labels[c]))

    rebuild(tree.root, start)
    return assignment


def semigroup_size(lt: SemigroupLabeledTree, guard: Optional[int] = None) -> int:
    if lt.semigroup is not None:
        return lt.semigroup.size
    gen = FiniteSemigroup.generated(lt.labels.values(), lt.mul, guard=guard)
    return gen.size


def colcombet_split(lt: SemigroupLabeledTree, *, max_order: Optional[int] = None,
                    guards=DEFAULT_GUARDS) -> Split:
    """Forward Ramseyan split of least order found by search (order <= max_order).

    ``max_order`` defaults to the size of the semigroup (or of the subsemigroup
    generated by the edge labels).
    """
    tree = lt.tree
    inner = tree.inner_nodes()
    if len(inner) > guards.split_inner_nodes:
        raise TooLarge(f"{len(inner)} inner nodes exceeds split guard")
    triv = trivial_split(tree)
    if max_order is None:
        try:
            max_order = semigroup_size(lt, guards.semigroup_table)
        except TooLarge:
            # the height split is always forward Ramseyan, so it caps the search
            max_order = max(triv.order, 1)
    if not inner:
        return Split({}, 0)
    pairs = [(u, v) for u in inner for v in tree.descendants(u) if v != u and v in set(inner)]
    values = []
    seen = set()
    for u, v in sorted(pairs, key=repr):
        val = lt.lam(u, v)
        if val not in seen:
            seen.add(val)
            values.append(val)
    cliques = [frozenset(c) for c in _left_zero_families(values, lt.mul)]
    for p in range(1, max_order + 1):
        if p >= triv.order:
            return triv
        count = len(cliques) ** p
        if count > guards.split_families:
            break
        for family in itertools.product(cliques, repeat=p):
            got = _search_with_family(lt, family)
            if got is not None:
                split = Split(got, p)
                ok, _ = is_forward_ramseyan(lt, split)
                if not ok:
                    raise SearchExhausted("search produced a split that fails the checker")
                return split
    if triv.order <= max_order:
        return triv
    raise SearchExhausted(f"no forward Ramseyan split of order <= {max_order} found")


def compact_split(s: Split) -> Split:
    """Renumber levels to drop unused values while keeping their relative order."""
    used = sorted(set(s.assignment.values()))
    ren = {h: i + 1 for i, h in enumerate(used)}
    return Split({u: ren[h] for u, h in s.assignment.items()}, len(used))


# ---------------------------------------------------------------------------
# E_h, chains and crosses

def e_h(n: NLCDecomposition, s: Split, h: int) -> List[Tuple[int, ...]]:
    """Relabelings between h-neighbors; raises NotDecent if they are not absorbing."""
    out = []
    seen = set()
    for u, v in h_neighbors(n.tree, s, h):
        tab = tuple(n.rho_path(u, v).table)
        if tab not in seen:
            seen.add(tab)
            out.append(tab)
    for a in out:
        for b in out:
            if tuple(a[g] for g in b) != a:
                raise NotDecent(f"relabelings at level {h} are not absorbing")
    return out


def eh_classes(q: int, E: Sequence[Tuple[int, ...]], h: int = 0) -> EhClassPartition:
    groups: Dict[Tuple[int, ...], List[int]] = {}
    for g in range(q):
        groups.setdefault(tuple(sigma[g] for sigma in E), []).append(g)
    classes = tuple(sorted(tuple(c) for c in groups.values()))
    return EhClassPartition(h, classes)


def check_fact_eh(q: int, E: Sequence[Tuple[int, ...]], part: EhClassPartition) -> bool:
    """Each class C is closed under every tau in E, and classes match the definition."""
    for c in part.classes:
        for g in c:
            for tau in E:
                if tau[g] not in c:
                    return False
    for a in range(q):
        for b in range(q):
            same = part.class_of(a) == part.class_of(b)
            if same != all(sigma[a] == sigma[b] for sigma in E):
                return False
    return True


def find_h_chain(tree: RootedTree, s: Split, h: int, ell: int) -> Optional[HChain]:
    """ell + 1 mutual h-neighbors, bottom node earliest in preorder."""
    for v in tree.preorder():
        if s.get(v) != h:
            continue
        chain = [v]
        for a in tree.ancestors(v):
            sa = s.get(a)
            if sa is None or sa > h:
                break
            if sa == h:
                chain.append(a)
                if len(chain) == ell + 1:
                    return HChain(h, tuple(reversed(chain)))
    return None


def find_h_cross(n: NLCDecomposition, s: Split, h: int, comparable=None) -> Optional[HCross]:
    tree = n.tree
    if comparable is None:
        def comparable(x, y):
            return n.decode(x, y) or n.decode(y, x)
    E = e_h(n, s, h)
    if not E:
        return None
    for u, v in h_neighbors(tree, s, h):
        inside = set(tree.leaves_below(v))
        outside = sorted(x for x in tree.leaves_below(u) if x not in inside)
        for x in outside:
            lx = n.l_sets(x, v)
            for y in outside:
                if x == y or comparable(x, y):
                    continue
                ly = n.l_sets(y, v)
                ex, ey = n.label(u, x), n.label(u, y)
                for sigma in E:
                    if ly.ge >> sigma[ex] & 1 and lx.le >> sigma[ey] & 1:
                        return HCross(h, u, v, x, y, sigma)
    return None


# ---------------------------------------------------------------------------
# independent validators

def _neighbors_by_definition(tree: RootedTree, s: Split, u, v, h) -> bool:
    if u == v or not tree.is_ancestor(u, v):
        return False
    if s.get(u) != h or s.get(v) != h:
        return False
    w = tree.parent(v)
    while w != u:
        if s.get(w, h + 1) > h:
            return False
        w = tree.parent(w)
    return True


def is_h_chain(tree: RootedTree, s: Split, chain: HChain) -> bool:
    nodes = chain.nodes
    if len(nodes) < 2:
        return False
    return all(_neighbors_by_definition(tree, s, nodes[i], nodes[j], chain.h)
               for i in range(len(nodes)) for j in range(i + 1, len(nodes)))


def is_h_cross(n: NLCDecomposition, s: Split, c: HCross, comparable) -> bool:
    tree = n.tree
    if not _neighbors_by_definition(tree, s, c.u, c.v, c.h):
        return False
    below_u = set(tree.leaves_below(c.u))
    below_v = set(tree.leaves_below(c.v))
    if c.x not in below_u - below_v or c.y not in below_u - below_v:
        return False
    if c.x == c.y or comparable(c.x, c.y):
        return False
    inner = tree.inner_nodes()
    E = set()
    for a in inner:
        for b in inner:
            if _neighbors_by_definition(tree, s, a, b, c.h):
                E.add(tuple(n.rho_path(a, b).table))
    if c.sigma not in E:
        return False
    ly, lx = n.l_sets(c.y, c.v), n.l_sets(c.x, c.v)
    return bool(ly.ge >> c.sigma[n.label(c.u, c.x)] & 1) and bool(lx.le >> c.sigma[n.label(c.u, c.y)] & 1)


def anchored_split(tree: RootedTree, anchors) -> Split:
    """Anchors share the top level; every other inner node gets its height
    inside the region cut out by the anchors, so only anchors can be neighbors."""
    anchors = set(anchors)
    height: Dict[Hashable, int] = {}
    for u in tree.postorder():
        if tree.is_leaf(u) or u == tree.root:
            continue
        below = [height[c] for c in tree.children(u) if c in height and c not in anchors]
        height[u] = 1 + max(below, default=0)
    top = 1 + max((height[u] for u in height if u not in anchors), default=0)
    for a in anchors:
        if a not in height:
            raise BadParameter(f"anchor {a!r} is not an inner node")
        height[a] = top
    return Split(height, top)
