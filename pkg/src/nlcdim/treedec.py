"""Tree decompositions of cover graphs.

Covers validity checking, the convexity property, exact search over
elimination orders, and regularization into a binary tree whose leaves are
exactly the poset elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from .config import DEFAULT_GUARDS
from .errors import BadParameter, NotFound, TooLarge, TooSmall
from .poset import Poset, cover_graph
from .trees import RootedTree


@dataclass(frozen=True)
class TreeDecomposition:
    tree: RootedTree
    bags: Mapping[str, FrozenSet[str]]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1


@dataclass(frozen=True)
class BinaryLeafDecomposition:
    """Binary tree with leaf set X; each bag enumerated as a length-t tuple."""

    tree: RootedTree
    bags: Mapping[str, FrozenSet[str]]
    enum: Mapping[str, Tuple[str, ...]]
    t: int

    @property
    def width(self) -> int:
        return max(len(b) for b in self.bags.values()) - 1

    def as_tree_decomposition(self) -> TreeDecomposition:
        return TreeDecomposition(self.tree, self.bags)

    def z(self, u: str, i: int) -> str:
        """The i-th enumerated bag element of u, 1-based."""
        return self.enum[u][i - 1]


def validate(td: TreeDecomposition, p: Poset) -> bool:
    tree = td.tree
    if set(td.bags) != set(tree.nodes):
        return False
    elems = set(p.elements)
    for bag in td.bags.values():
        if not bag <= elems:
            return False
    for x in p.elements:
        holders = [u for u in tree.nodes if x in td.bags[u]]
        if not holders:
            return False
        # connected iff exactly one holder has a parent outside the holder set
        hs = set(holders)
        tops = [u for u in holders if tree.parent(u) not in hs]
        if len(tops) != 1:
            return False
    g = cover_graph(p)
    for x, y in g.edges():
        if not any(x in b and y in b for b in td.bags.values()):
            return False
    return True


def _tree_path(tree: RootedTree, u, v) -> List:
    w = tree.lca(u, v)
    left = tree.path(w, u)
    right = tree.path(w, v)
    return left[::-1] + right[1:]


def check_convexity(td: TreeDecomposition, p: Poset) -> bool:
    """For w on the u-v path, x in B(u), y in B(v), x <= y: some z in B(w) has x <= z <= y."""
    tree = td.tree
    nodes = tree.nodes
    for u in nodes:
        for v in nodes:
            pairs = [(x, y) for x in td.bags[u] for y in td.bags[v] if p.leq(x, y)]
            if not pairs:
                continue
            for w in _tree_path(tree, u, v):
                bag = td.bags[w]
                for x, y in pairs:
                    if not any(p.leq(x, z) and p.leq(z, y) for z in bag):
                        return False
    return True


def single_bag_decomposition(p: Poset) -> TreeDecomposition:
    tree = RootedTree("r", {"r": []})
    return TreeDecomposition(tree, {"r": frozenset(p.elements)})


# ---------------------------------------------------------------------------
# exact search over elimination orders

def _adjacency(g: nx.Graph, order: Sequence[str]) -> List[int]:
    index = {v: i for i, v in enumerate(order)}
    adj = [0] * len(order)
    for a, b in g.edges():
        adj[index[a]] |= 1 << index[b]
        adj[index[b]] |= 1 << index[a]
    return adj


def _current_neighbors(adj: List[int], eliminated: int, v: int) -> int:
    """Uneliminated vertices joined to v by a path through eliminated vertices."""
    seen = 1 << v
    frontier = adj[v]
    out = 0
    while frontier:
        frontier &= ~seen
        seen |= frontier
        out |= frontier & ~eliminated
        inner = frontier & eliminated
        frontier = 0
        m = inner
        while m:
            low = m & -m
            frontier |= adj[low.bit_length() - 1]
            m ^= low
    return out


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _elimination_order(adj: List[int], width: int) -> Optional[List[int]]:
    n = len(adj)
    full = (1 << n) - 1

    @lru_cache(maxsize=None)
    def solve(eliminated: int) -> Optional[Tuple[int, ...]]:
        if eliminated == full:
            return ()
        remaining = full & ~eliminated
        nbrs = {}
        m = remaining
        while m:
            low = m & -m
            v = low.bit_length() - 1
            nbrs[v] = _current_neighbors(adj, eliminated, v)
            m ^= low
        # a simplicial vertex of small degree can always be eliminated first
        for v, nb in nbrs.items():
            if _popcount(nb) <= width and all(nbrs[w] | (1 << w) | nb == nbrs[w] | (1 << w)
                                              for w in _iter_bits(nb)):
                rest = solve(eliminated | (1 << v))
                return None if rest is None else (v,) + rest
        for v, nb in nbrs.items():
            if _popcount(nb) <= width:
                rest = solve(eliminated | (1 << v))
                if rest is not None:
                    return (v,) + rest
        return None

    got = solve(0)
    solve.cache_clear()
    return None if got is None else list(got)


def _iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def decomposition_from_order(g: nx.Graph, order: Sequence[str]) -> TreeDecomposition:
    """Tree decomposition whose bags are {v} plus v's later neighbors in the fill graph."""
    if not order:
        raise BadParameter("empty elimination order")
    adj = _adjacency(g, order)
    pos = {v: i for i, v in enumerate(order)}
    bags: Dict[str, FrozenSet[str]] = {}
    parents: Dict[str, Optional[str]] = {}
    eliminated = 0
    roots = []
    for i, v in enumerate(order):
        nb = _current_neighbors(adj, eliminated, i)
        bags[v] = frozenset([v] + [order[j] for j in _iter_bits(nb)])
        later = [j for j in _iter_bits(nb)]
        if later:
            parents[v] = order[min(later)]
        else:
            roots.append(v)
        eliminated |= 1 << i
    top = roots[-1]
    for r in roots:
        parents[r] = None if r == top else top
    del pos
    return TreeDecomposition(RootedTree.from_parents(parents), bags)


def elimination_width(g: nx.Graph, order: Sequence[str]) -> int:
    return decomposition_from_order(g, order).width


def exact_tree_decomposition(p: Poset, max_width: int, *,
                             guard: Optional[int] = None) -> TreeDecomposition:
    """Minimum-width decomposition of the cover graph, if its width is at most max_width."""
    guard = DEFAULT_GUARDS.treedec_elements if guard is None else guard
    if len(p) == 0:
        raise TooSmall("empty poset")
    g = cover_graph(p)
    # forests are eliminated leaf by leaf without branching, so no size guard
    if len(p) > guard and not nx.is_forest(g):
        raise TooLarge(f"{len(p)} elements exceeds decomposition guard {guard}")
    order = list(p.elements)
    adj = _adjacency(g, order)
    for w in range(0, max_width + 1):
        got = _elimination_order(adj, w)
        if got is not None:
            return decomposition_from_order(g, [order[i] for i in got])
    raise NotFound(f"no tree decomposition of width <= {max_width}")


# ---------------------------------------------------------------------------
# regularization

def _fresh_ids(taken: set, count: int, stem: str) -> List[str]:
    prefix = "_"
    while any(x.startswith(prefix) for x in taken):
        prefix += "_"
    return [f"{prefix}{stem}{i}" for i in range(count)]


def _balanced(slots: List[str], ids: List[str], children: Dict[str, List[str]]) -> str:
    """Hang ``slots`` below a balanced binary tree built from ``ids``; return its root."""
    if len(slots) == 1:
        return slots[0]
    mid = (len(slots) + 1) // 2
    node = ids.pop()
    left = _balanced(slots[:mid], ids, children)
    right = _balanced(slots[mid:], ids, children)
    children[node] = [left, right]
    return node


def regularize(td: TreeDecomposition, p: Poset) -> BinaryLeafDecomposition:
    """Binary decomposition with leaf set X, same width, x in B(x), enumerated bags."""
    if len(p) < 2:
        raise TooSmall("regularization needs at least two elements")
    tree = td.tree
    phi: Dict[str, str] = {}
    for x in p.elements:
        holders = [u for u in tree.nodes if x in td.bags[u]]
        phi[x] = min(holders, key=lambda u: (tree.depth(u), tree.preorder().index(u)))
    kept = sorted(set(phi.values()), key=tree.preorder().index)
    kept_set = set(kept)
    kparent: Dict[str, Optional[str]] = {}
    for u in kept:
        a = tree.parent(u)
        while a is not None and a not in kept_set:
            a = tree.parent(a)
        kparent[u] = a
    tops = [u for u in kept if kparent[u] is None]
    for extra in tops[1:]:
        kparent[extra] = tops[0]
    kchildren: Dict[str, List[str]] = {u: [] for u in kept}
    for u in kept:
        if kparent[u] is not None:
            kchildren[kparent[u]].append(u)
    owned: Dict[str, List[str]] = {u: [] for u in kept}
    for x in p.elements:
        owned[phi[x]].append(x)

    total_inner = sum(len(kchildren[u]) + len(owned[u]) - 1 for u in kept)
    ids = _fresh_ids(set(p.elements), total_inner, "g")
    ids.reverse()
    children: Dict[str, List[str]] = {x: [] for x in p.elements}
    bags: Dict[str, FrozenSet[str]] = {}
    gadget_root: Dict[str, str] = {}

    for u in reversed(kept):  # children before parents
        before = set(children)
        slots = sorted(owned[u]) + [gadget_root[c] for c in kchildren[u]]
        gadget_root[u] = _balanced(slots, ids, children)
        for node in set(children) - before:
            bags[node] = frozenset(td.bags[u])
        for x in owned[u]:
            bags[x] = frozenset(td.bags[u])
    root = gadget_root[tops[0]]
    btree = RootedTree(root, children)
    t = max(len(b) for b in bags.values())
    enum: Dict[str, Tuple[str, ...]] = {}
    for u in btree.nodes:
        bag = bags[u]
        if btree.is_leaf(u):
            seq = [u] + sorted(bag - {u})
        else:
            seq = sorted(bag)
        seq += [seq[-1]] * (t - len(seq))
        enum[u] = tuple(seq)
    return BinaryLeafDecomposition(btree, bags, enum, t)


def check_binary_leaf(b: BinaryLeafDecomposition, p: Poset) -> bool:
    """Every structural invariant of a regularized decomposition."""
    tree = b.tree
    if not tree.is_binary() or set(tree.leaves()) != set(p.elements):
        return False
    if len(tree.leaves()) >= 2 and tree.is_leaf(tree.root):
        return False
    for u in tree.nodes:
        seq = b.enum[u]
        if len(seq) != b.t or set(seq) != set(b.bags[u]):
            return False
    for x in tree.leaves():
        if x not in b.bags[x] or b.enum[x][0] != x:
            return False
    return validate(b.as_tree_decomposition(), p) and b.width <= b.t - 1
