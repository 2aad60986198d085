"""Finite semigroups, semigroup-labeled trees and the cross semigroup.

Semigroup elements are hashable values; a :class:`FiniteSemigroup` knows its
element list and a product function.  Labeled trees only need the product.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from .config import DEFAULT_GUARDS
from .errors import BadParameter, TooLarge
from .nlc import NLCDecomposition, rel_compose
from .trees import RootedTree

Mul = Callable[[Hashable, Hashable], Hashable]


class FiniteSemigroup:
    """Explicit finite semigroup with an index table."""

    def __init__(self, elements: Sequence[Hashable], mul: Mul, name: str = ""):
        self.elements: Tuple[Hashable, ...] = tuple(elements)
        self.index: Dict[Hashable, int] = {e: i for i, e in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise BadParameter("duplicate semigroup elements")
        self._mul = mul
        self.name = name
        self._table: Optional[List[List[int]]] = None

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def size(self) -> int:
        return len(self.elements)

    def mul(self, a: Hashable, b: Hashable) -> Hashable:
        return self._mul(a, b)

    def __contains__(self, e) -> bool:
        return e in self.index

    @property
    def table(self) -> List[List[int]]:
        if self._table is None:
            if len(self) > DEFAULT_GUARDS.semigroup_table:
                raise TooLarge(f"semigroup of size {len(self)} too large for a table")
            ix = self.index
            self._table = [[ix[self._mul(a, b)] for b in self.elements] for a in self.elements]
        return self._table

    def is_associative(self) -> bool:
        tab = self.table
        n = len(self)
        return all(tab[tab[a][b]][c] == tab[a][tab[b][c]]
                   for a in range(n) for b in range(n) for c in range(n))

    def is_closed(self) -> bool:
        return all(self._mul(a, b) in self.index for a in self.elements for b in self.elements)

    def idempotents(self) -> List[Hashable]:
        return [e for e in self.elements if self._mul(e, e) == e]

    @classmethod
    def from_table(cls, table: Sequence[Sequence[int]], name: str = "") -> "FiniteSemigroup":
        n = len(table)
        tab = [list(row) for row in table]
        if any(len(row) != n or not all(0 <= x < n for x in row) for row in tab):
            raise BadParameter("product table must be square over 0..n-1")
        s = cls(range(n), lambda a, b: tab[a][b], name)
        s._table = tab
        return s

    @classmethod
    def generated(cls, generators: Iterable[Hashable], mul: Mul, *,
                  guard: Optional[int] = None, name: str = "") -> "FiniteSemigroup":
        """Subsemigroup generated by ``generators``, elements in discovery order."""
        guard = DEFAULT_GUARDS.semigroup_table if guard is None else guard
        elems: List[Hashable] = []
        seen = set()
        for g in generators:
            if g not in seen:
                seen.add(g)
                elems.append(g)
        gens = list(elems)
        i = 0
        while i < len(elems):
            a = elems[i]
            for g in gens:
                for c in (mul(a, g), mul(g, a)):
                    if c not in seen:
                        seen.add(c)
                        elems.append(c)
                        if len(elems) > guard:
                            raise TooLarge(f"generated semigroup exceeds {guard} elements")
            i += 1
        return cls(elems, mul, name)

    def dump(self) -> str:
        lines = [f"semigroup {self.name or '-'} size {len(self)}"]
        for i, e in enumerate(self.elements):
            lines.append(f"elem {i} {e!r}")
        for row in self.table:
            lines.append("row " + " ".join(map(str, row)))
        return "\n".join(lines) + "\n"


def compose_functions(f: Tuple[int, ...], g: Tuple[int, ...]) -> Tuple[int, ...]:
    """f . g as backward functions: apply g first."""
    return tuple(f[x] for x in g)


def relabeling_semigroup(q: int, *, guard: Optional[int] = None) -> FiniteSemigroup:
    """All functions on a q-element label set under composition."""
    guard = DEFAULT_GUARDS.semigroup_table if guard is None else guard
    if q < 1:
        raise BadParameter("label set must be nonempty")
    if q ** q > guard:
        raise TooLarge(f"{q}^{q} functions exceed guard {guard}")
    elems = list(itertools.product(range(q), repeat=q))
    return FiniteSemigroup(elems, compose_functions, name=f"T{q}")


def relation_semigroup(t: int, *, guard: Optional[int] = None) -> FiniteSemigroup:
    """All relations on [t] (bitmask encoded) under composition."""
    guard = DEFAULT_GUARDS.semigroup_table if guard is None else guard
    if t < 1:
        raise BadParameter("t must be positive")
    if 2 ** (t * t) > guard:
        raise TooLarge(f"2^{t * t} relations exceed guard {guard}")
    return FiniteSemigroup(range(2 ** (t * t)), lambda a, b: rel_compose(a, b, t),
                           name=f"Rel{t}")


# ---------------------------------------------------------------------------
# labeled trees

class SemigroupLabeledTree:
    """Rooted tree with edge labels; ``labels[v]`` sits on the edge into v.

    All path products lambda(u, v) for proper ancestors u of v are computed
    eagerly.
    """

    def __init__(self, tree: RootedTree, labels: Mapping[Hashable, Hashable], mul: Mul,
                 semigroup: Optional[FiniteSemigroup] = None):
        self.tree = tree
        self.labels = dict(labels)
        self.mul = mul
        self.semigroup = semigroup
        missing = [v for v in tree.nodes if v != tree.root and v not in self.labels]
        if missing:
            raise BadParameter(f"edges into {missing[:3]} carry no label")
        self._lam: Dict[Tuple[Hashable, Hashable], Hashable] = {}
        for v in tree.preorder()[1:]:
            p = tree.parent(v)
            lab = self.labels[v]
            self._lam[(p, v)] = lab
            for a in tree.ancestors(p):
                self._lam[(a, v)] = mul(self._lam[(a, p)], lab)

    def lam(self, u, v) -> Hashable:
        """Path product lambda(u, v) for u a proper ancestor of v."""
        return self._lam[(u, v)]

    def pairs(self):
        return self._lam.keys()

    def values(self) -> List[Hashable]:
        """Distinct path products in first-seen order."""
        out = []
        seen = set()
        for val in self._lam.values():
            if val not in seen:
                seen.add(val)
                out.append(val)
        return out

    def check_path_law(self) -> bool:
        tree = self.tree
        for (u, w), luw in self._lam.items():
            for v in tree.path(u, w)[1:-1]:
                if self.mul(self._lam[(u, v)], self._lam[(v, w)]) != luw:
                    return False
        return True


# ---------------------------------------------------------------------------
# the cross semigroup

@dataclass(frozen=True)
class CrossElement:
    """(rho, Phi, Psi): rho a label table, subsets of Q as bitmasks."""

    rho: Tuple[int, ...]
    phi: FrozenSet[Tuple[int, int, int]]
    psi: FrozenSet[Tuple[int, int, int, int]]
    _hash: int = field(default=0, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.rho, self.phi, self.psi)))

    def __hash__(self) -> int:
        return self._hash


def coimage(mask: int, rho: Tuple[int, ...]) -> int:
    """{g : rho[g] in mask}."""
    out = 0
    for g, h in enumerate(rho):
        if mask >> h & 1:
            out |= 1 << g
    return out


def cross_product(e1: CrossElement, e2: CrossElement) -> CrossElement:
    r1, r2 = e1.rho, e2.rho
    if len(r1) != len(r2):
        raise BadParameter("cross elements over different label sets")
    co: Dict[int, int] = {}

    def cim(mask: int) -> int:
        got = co.get(mask)
        if got is None:
            got = co[mask] = coimage(mask, r2)
        return got

    rho = tuple(r1[g] for g in r2)
    phi = {(a, cim(A), cim(B)) for a, A, B in e1.phi}
    phi |= {(r1[a], A, B) for a, A, B in e2.phi}
    psi = {(a, b, cim(A), cim(B)) for a, b, A, B in e1.psi}
    psi |= {(r1[a], r1[b], A, B) for a, b, A, B in e2.psi}
    for a1, A1, B1 in e1.phi:
        for a2, A2, B2 in e2.phi:
            if not ((A1 | B1) >> a2 & 1):
                psi.add((a1, r1[a2], cim(A1), B2))
                psi.add((r1[a2], a1, A2, cim(B1)))
    return CrossElement(rho, frozenset(phi), frozenset(psi))


def cross_semigroup_order(q: int) -> int:
    """The order q^(q+3) * 16^q used for the cross semigroup's split."""
    return q ** (q + 3) * 16 ** q


def direct_cross_element(n: NLCDecomposition, u, v, comparable=None) -> CrossElement:
    """lambda(u, v) straight from the definitions of Phi and Psi."""
    tree = n.tree
    if comparable is None:
        def comparable(x, y):
            return n.decode(x, y) or n.decode(y, x)
    inside = set(tree.leaves_below(v))
    outside = [x for x in tree.leaves_below(u) if x not in inside]
    lsets = {x: n.l_sets(x, v) for x in outside}
    phi = frozenset((n.label(u, x), lsets[x].le, lsets[x].ge) for x in outside)
    psi = frozenset((n.label(u, x), n.label(u, y), lsets[x].le, lsets[y].ge)
                    for x in outside for y in outside
                    if x != y and not comparable(x, y))
    return CrossElement(tuple(n.rho_path(u, v).table), phi, psi)


def cross_labeling(n: NLCDecomposition, comparable=None) -> SemigroupLabeledTree:
    tree = n.tree
    if comparable is None:
        cache: Dict[Tuple[str, str], bool] = {}

        def comparable(x, y):
            key = (x, y) if x < y else (y, x)
            got = cache.get(key)
            if got is None:
                got = cache[key] = n.decode(x, y) or n.decode(y, x)
            return got
    labels = {v: direct_cross_element(n, tree.parent(v), v, comparable)
              for v in tree.nodes if v != tree.root}
    return SemigroupLabeledTree(tree, labels, cross_product)


def check_cross_law(n: NLCDecomposition, lt: SemigroupLabeledTree) -> bool:
    """Every path product equals the directly computed element."""
    return all(lt.lam(u, v) == direct_cross_element(n, u, v) for u, v in lt.pairs())


def relabeling_labeling(n: NLCDecomposition) -> SemigroupLabeledTree:
    """Edge labels = relabeling tables, product = composition."""
    tree = n.tree
    labels = {v: tuple(n.rho[v].table) for v in tree.nodes if v != tree.root}
    return SemigroupLabeledTree(tree, labels, compose_functions)
