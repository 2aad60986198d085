"""Rooted ordered trees with ancestor queries.

Nodes are arbitrary hashable, orderable identifiers (strings throughout the
package).  Children keep their insertion order, which for binary trees is
(left, right).
"""

from __future__ import annotations

from typing import Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import BadParameter

Node = Hashable


class RootedTree:
    """Immutable rooted tree given by a parent map and ordered child lists."""

    def __init__(self, root: Node, children: Mapping[Node, Sequence[Node]]):
        self.root = root
        self._children: Dict[Node, Tuple[Node, ...]] = {}
        self._parent: Dict[Node, Optional[Node]] = {root: None}
        order: List[Node] = []
        stack = [root]
        while stack:
            u = stack.pop()
            order.append(u)
            kids = tuple(children.get(u, ()))
            self._children[u] = kids
            for c in kids:
                if c in self._parent:
                    raise BadParameter(f"node {c!r} reached twice")
                self._parent[c] = u
            stack.extend(reversed(kids))
        for u in children:
            if u not in self._parent:
                raise BadParameter(f"node {u!r} not reachable from root")
        self._preorder = order
        self._pre = {u: i for i, u in enumerate(order)}
        size = {u: 1 for u in order}
        depth = {root: 0}
        for u in order[1:]:
            depth[u] = depth[self._parent[u]] + 1
        for u in reversed(order[1:]):
            size[self._parent[u]] += size[u]
        self._size = size
        self._depth = depth
        self._leaf_cache: Dict[Node, Tuple[Node, ...]] = {}

    @classmethod
    def from_parents(cls, parents: Mapping[Node, Optional[Node]]) -> "RootedTree":
        """Build from ``node -> parent`` (root maps to None); children sorted by id."""
        roots = [u for u, p in parents.items() if p is None]
        if len(roots) != 1:
            raise BadParameter(f"expected exactly one root, found {len(roots)}")
        children: Dict[Node, List[Node]] = {u: [] for u in parents}
        for u, p in parents.items():
            if p is not None:
                if p not in children:
                    raise BadParameter(f"unknown parent {p!r}")
                children[p].append(u)
        for kids in children.values():
            kids.sort()
        return cls(roots[0], children)

    # -- basic structure ---------------------------------------------------
    @property
    def nodes(self) -> List[Node]:
        return list(self._preorder)

    def preorder(self) -> List[Node]:
        return list(self._preorder)

    def postorder(self) -> List[Node]:
        out: List[Node] = []
        stack = [(self.root, False)]
        while stack:
            u, done = stack.pop()
            if done:
                out.append(u)
                continue
            stack.append((u, True))
            for c in reversed(self._children[u]):
                stack.append((c, False))
        return out

    def __len__(self) -> int:
        return len(self._preorder)

    def __contains__(self, u) -> bool:
        return u in self._parent

    def parent(self, u: Node) -> Optional[Node]:
        return self._parent[u]

    def children(self, u: Node) -> Tuple[Node, ...]:
        return self._children[u]

    def depth(self, u: Node) -> int:
        return self._depth[u]

    def is_leaf(self, u: Node) -> bool:
        return not self._children[u]

    def leaves(self) -> List[Node]:
        return [u for u in self._preorder if not self._children[u]]

    def inner_nodes(self) -> List[Node]:
        """Nodes that are neither the root nor leaves."""
        return [u for u in self._preorder if u != self.root and self._children[u]]

    def edges(self) -> List[Tuple[Node, Node]]:
        return [(self._parent[u], u) for u in self._preorder[1:]]

    # -- ancestry ------------------------------------------------------------
    def is_ancestor(self, u: Node, v: Node) -> bool:
        """True iff u is an ancestor of v or u == v."""
        a = self._pre[u]
        return a <= self._pre[v] < a + self._size[u]

    def is_proper_ancestor(self, u: Node, v: Node) -> bool:
        return u != v and self.is_ancestor(u, v)

    def lca(self, u: Node, v: Node) -> Node:
        while self._depth[u] > self._depth[v]:
            u = self._parent[u]
        while self._depth[v] > self._depth[u]:
            v = self._parent[v]
        while u != v:
            u = self._parent[u]
            v = self._parent[v]
        return u

    def path(self, u: Node, v: Node) -> List[Node]:
        """Nodes from ancestor u down to v, both included."""
        if not self.is_ancestor(u, v):
            raise BadParameter(f"{u!r} is not an ancestor of {v!r}")
        out = [v]
        while v != u:
            v = self._parent[v]
            out.append(v)
        out.reverse()
        return out

    def ancestors(self, v: Node) -> List[Node]:
        """Proper ancestors of v, nearest first."""
        out = []
        p = self._parent[v]
        while p is not None:
            out.append(p)
            p = self._parent[p]
        return out

    def descendants(self, u: Node) -> List[Node]:
        """u and all its descendants in preorder."""
        a = self._pre[u]
        return self._preorder[a:a + self._size[u]]

    def leaves_below(self, u: Node) -> Tuple[Node, ...]:
        """Leaf set X(u) in left-to-right order."""
        got = self._leaf_cache.get(u)
        if got is None:
            got = tuple(w for w in self.descendants(u) if not self._children[w])
            self._leaf_cache[u] = got
        return got

    def child_toward(self, u: Node, v: Node) -> Node:
        """The child of u on the path to its proper descendant v."""
        if not self.is_proper_ancestor(u, v):
            raise BadParameter(f"{u!r} is not a proper ancestor of {v!r}")
        while self._parent[v] != u:
            v = self._parent[v]
        return v

    def side(self, u: Node, v: Node) -> int:
        """Index of the child of u containing v (0 = left, 1 = right)."""
        return self._children[u].index(self.child_toward(u, v))

    def is_binary(self) -> bool:
        return all(len(k) in (0, 2) for k in self._children.values())

    def induced(self, keep: Iterable[Node]) -> "RootedTree":
        """Tree on ``keep`` where each node's parent is its nearest kept ancestor.

        ``keep`` must contain the root.  Child order follows preorder.
        """
        keep = set(keep)
        if self.root not in keep:
            raise BadParameter("induced subtree must keep the root")
        children: Dict[Node, List[Node]] = {u: [] for u in keep}
        for u in self._preorder[1:]:
            if u not in keep:
                continue
            p = self._parent[u]
            while p not in keep:
                p = self._parent[p]
            children[p].append(u)
        return RootedTree(self.root, children)

    def __repr__(self) -> str:
        return f"RootedTree(root={self.root!r}, nodes={len(self)})"
