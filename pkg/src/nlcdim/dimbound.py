"""Recursive pair coloring over the subtrees of a decent split.

Every h-subtree S gets one coloring of the incomparable pairs inside X(root):
pairs in one cluster get the "inner" palette, pairs across clusters the
"outer" palette.  Colors are tuples built from the colorings one level
down and are interned to small integers per (subtree, type), so each palette
stays within the recurrence bound of :func:`d_bound`.

The top-level coloring either certifies dim <= colors used or the run stops
with an h-chain of length ell plus an h-cross at the same level.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Mapping, Optional, Tuple

import networkx as nx

from .errors import BadParameter
from .nlc import NLCDecomposition
from .poset import Pair, Poset
from .semigroup import SemigroupLabeledTree
from .split import HChain, HCross, Split, e_h, find_h_cross, h_subtrees

INNER = "inner"
OUTER = "outer"


def d_bound(q: int, ell: int, p: int) -> int:
    """Outer palette size after p rounds of the recurrence."""
    if q < 1 or ell < 0 or p < 0:
        raise BadParameter("need q >= 1, ell >= 0, p >= 0")
    d_in, d_out = 2, 2 * q
    for _ in range(p):
        factor = max(sum(d_in ** i for i in range(ell + 1)), 1 + 3 * q ** 3 * d_in ** 2)
        d_in, d_out = d_in * factor, d_out * factor
    return d_out


def d_bounds(q: int, ell: int, p: int) -> List[Tuple[int, int]]:
    """(inner, outer) bounds for h = 0..p."""
    out = [(2, 2 * q)]
    for _ in range(p):
        d_in, d_out = out[-1]
        factor = max(sum(d_in ** i for i in range(ell + 1)), 1 + 3 * q ** 3 * d_in ** 2)
        out.append((d_in * factor, d_out * factor))
    return out


@dataclass
class TypedColoring:
    root: Hashable
    h: int
    colors: Dict[Pair, int]
    kinds: Dict[Pair, str]

    def count(self, kind: str) -> int:
        return len({c for pr, c in self.colors.items() if self.kinds[pr] == kind})


@dataclass
class DimOutcome:
    coloring: Optional[Dict[Pair, int]] = None
    witness: Optional[Tuple[int, HChain, HCross]] = None
    colors_used: int = 0
    bound: int = 0
    order: int = 0
    level_counts: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.coloring is not None


class _Interner:
    def __init__(self):
        self.table: Dict[Tuple[str, Hashable], int] = {}
        self.sizes: Dict[str, int] = {INNER: 0, OUTER: 0}

    def __call__(self, kind: str, color: Hashable) -> int:
        key = (kind, color)
        got = self.table.get(key)
        if got is None:
            got = self.table[key] = self.sizes[kind]
            self.sizes[kind] += 1
        return got


def _incomparable_within(leaves: Tuple[str, ...], incomparable) -> List[Pair]:
    return [(x, y) for x in leaves for y in leaves if x != y and incomparable(x, y)]


def bounded_dimension_coloring(n: NLCDecomposition, s: Split, ell: int,
                               lt: Optional[SemigroupLabeledTree] = None,
                               poset: Optional[Poset] = None) -> DimOutcome:
    """Run the recursive coloring; ``lt`` is accepted for interface symmetry only."""
    if ell < 1:
        raise BadParameter("ell must be at least 1")
    tree = n.tree
    q = n.q
    p = s.order
    if poset is not None:
        def incomparable(x, y):
            return poset.incomparable(x, y)
    else:
        def incomparable(x, y):
            return not (n.decode(x, y) or n.decode(y, x))
    for h in range(1, p + 1):
        e_h(n, s, h)  # raises NotDecent

    bounds = d_bounds(q, ell, p)
    level_counts: List[Tuple[int, int]] = []

    # h = 0: node plus its children
    prev: Dict[Hashable, Dict[Pair, int]] = {}
    prev_kind: Dict[Hashable, Dict[Pair, str]] = {}
    counts = [0, 0]
    for sub in h_subtrees(tree, s, 0):
        r = sub.root
        if tree.is_leaf(r):
            continue
        left, right = tree.children(r)
        xl = set(tree.leaves_below(left))
        col: Dict[Pair, int] = {}
        kind: Dict[Pair, str] = {}
        for x, y in _incomparable_within(tree.leaves_below(r), incomparable):
            if (x in xl) == (y in xl):
                col[(x, y)] = 0 if x in xl else 1
                kind[(x, y)] = INNER
            else:
                col[(x, y)] = n.label(r, x) + (0 if x in xl else q)
                kind[(x, y)] = OUTER
        prev[r], prev_kind[r] = col, kind
        counts[0] = max(counts[0], len({c for pr, c in col.items() if kind[pr] == INNER}))
        counts[1] = max(counts[1], len({c for pr, c in col.items() if kind[pr] == OUTER}))
    level_counts.append(tuple(counts))

    for h in range(1, p + 1):
        cur: Dict[Hashable, Dict[Pair, int]] = {}
        cur_kind: Dict[Hashable, Dict[Pair, str]] = {}
        cross_checked = False
        cross: Optional[HCross] = None
        counts = [0, 0]
        for sub in h_subtrees(tree, s, h):
            r0 = sub.root
            if tree.is_leaf(r0):
                continue
            sub_leaves = set(sub.leaves)
            hnodes = {u for u in sub.nodes if u != r0 and u not in sub_leaves and s[u] == h}
            level = {r0: 0}
            for u in sub.nodes[1:]:
                level[u] = level[tree.parent(u)] + (1 if u in hnodes else 0)
            max_level = max((level[u] for u in hnodes), default=0)
            deep = max_level > ell
            if deep and not cross_checked:
                cross = find_h_cross(n, s, h, comparable=lambda a, b: not incomparable(a, b))
                cross_checked = True
            if deep and cross is not None:
                target = next(u for u in sub.nodes if u in hnodes and level[u] > ell)
                path_h = [w for w in tree.path(r0, target) if w in hnodes]
                chain = HChain(h, tuple(path_h[:ell + 1]))
                return DimOutcome(witness=(h, chain, cross), order=p,
                                  bound=bounds[p][1], level_counts=level_counts)
            intern = _Interner()
            col: Dict[Pair, int] = {}
            kind: Dict[Pair, str] = {}
            for x, y in _incomparable_within(tree.leaves_below(r0), incomparable):
                m = tree.lca(x, y)
                roots = [r0]
                is_outer = False
                for w in tree.path(r0, m)[1:]:
                    if w in sub_leaves:
                        break
                    if w in hnodes:
                        roots.append(w)
                else:
                    # the lowest common ancestor is the root or an inner node of the subtree
                    is_outer = True
                kd = OUTER if is_outer else INNER
                j = len(roots) - 1
                if not deep:
                    color = (j,) + tuple(prev[r][(x, y)] for r in roots)
                elif j == 0:
                    color = (0, prev[r0][(x, y)])
                else:
                    r, rp = roots[j], roots[j - 1]
                    color = ((j - 1) % 3 + 1, prev[r0][(x, y)], prev[r][(x, y)], prev[rp][(x, y)],
                             n.label(r, x), n.label(r, y), n.label(rp, x))
                col[(x, y)] = intern(kd, color)
                kind[(x, y)] = kd
            cur[r0], cur_kind[r0] = col, kind
            counts[0] = max(counts[0], intern.sizes[INNER])
            counts[1] = max(counts[1], intern.sizes[OUTER])
        prev, prev_kind = cur, cur_kind
        level_counts.append(tuple(counts))

    final = prev.get(tree.root, {})
    return DimOutcome(coloring=dict(final), colors_used=len(set(final.values())),
                      bound=bounds[p][1], order=p, level_counts=level_counts)


def subtree_clusters(tree, sub) -> Dict[str, Hashable]:
    """Element -> the subtree leaf whose cluster holds it."""
    out = {}
    for v in sub.leaves:
        for x in tree.leaves_below(v):
            out[x] = v
    return out


def has_monochromatic_typed_cycle(poset: Poset, cluster: Mapping[str, Hashable],
                                  coloring: Mapping[Pair, int], kind: str,
                                  max_cycles: int = 200000) -> bool:
    """Exhaustive search for a monochromatic inner/outer alternating cycle.

    Meant for desk-scale checks only; cycles are enumerated per color class.
    """
    classes: Dict[int, List[Pair]] = {}
    for pr, c in coloring.items():
        x, y = pr
        same = cluster[x] == cluster[y]
        if (kind == INNER) == same:
            classes.setdefault(c, []).append(pr)
    seen = 0
    for pairs in classes.values():
        g = nx.DiGraph()
        g.add_nodes_from(range(len(pairs)))
        for i, (xi, _) in enumerate(pairs):
            for j, (_, yj) in enumerate(pairs):
                if poset.leq(xi, yj) or (kind == OUTER and cluster[xi] == cluster[yj]):
                    g.add_edge(i, j)
        for cyc in nx.simple_cycles(g):
            seen += 1
            if seen > max_cycles:
                raise RuntimeError("too many cycles to check exhaustively")
            if len(cyc) < 2:
                continue
            if _typed_cycle_ok(poset, cluster, [pairs[i] for i in cyc], kind):
                return True
    return False


def _typed_cycle_ok(poset: Poset, cluster, cyc: List[Pair], kind: str) -> bool:
    m = len(cyc)
    for i in range(m):
        x = cyc[i][0]
        y = cyc[(i + 1) % m][1]
        if kind == INNER and not poset.leq(x, y):
            return False
    if kind == INNER and len({cluster[e] for pr in cyc for e in pr}) == 1:
        return False
    # every other pair among the listed elements must be incomparable
    items = [(i, 0, pr[0]) for i, pr in enumerate(cyc)] + [(i, 1, pr[1]) for i, pr in enumerate(cyc)]
    for a in range(len(items)):
        for b in range(a + 1, len(items)):
            ia, sa, ea = items[a]
            ib, sb, eb = items[b]
            designated = (sa == 0 and sb == 1 and ib == (ia + 1) % m) or \
                         (sb == 0 and sa == 1 and ia == (ib + 1) % m)
            if designated:
                continue
            if ea == eb:
                return False
            if poset.comparable(ea, eb):
                return False
    return True
