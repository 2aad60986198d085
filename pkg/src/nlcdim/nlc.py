"""NLC-decompositions of posets.

Labels are integers ``0..q-1``.  A relabeling acts on labels as a backward
function and is stored as its application table; ``table[g]`` is the label
that ``g`` becomes one level up.  Two relabeling algebras exist:

* :class:`FunctionRelabeling` - an arbitrary table;
* :class:`RelationPairRelabeling` - a pair of relations on ``[t]`` acting on
  labels ``(ge, le)`` of subsets of ``[t]`` by coordinatewise image.

One decomposition never mixes the two (``kind`` records which one it uses).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from .errors import BadParameter, InvalidDecomposition
from .poset import Poset
from .treedec import BinaryLeafDecomposition
from .trees import RootedTree

LabelPair = Tuple[int, int]


# ---------------------------------------------------------------------------
# relations on [t] as bitmasks: bit i*t + j holds (i, j), indices 0-based

def rel_compose(r1: int, r2: int, t: int) -> int:
    """{(i, k) : (i, j) in r1 and (j, k) in r2 for some j}."""
    rows2 = [(r2 >> (j * t)) & ((1 << t) - 1) for j in range(t)]
    out = 0
    for i in range(t):
        row = (r1 >> (i * t)) & ((1 << t) - 1)
        acc = 0
        j = 0
        while row:
            if row & 1:
                acc |= rows2[j]
            row >>= 1
            j += 1
        out |= acc << (i * t)
    return out


def rel_image(r: int, xs: int, t: int) -> int:
    """{i : (i, j) in r for some j in xs}."""
    out = 0
    for i in range(t):
        if (r >> (i * t)) & xs & ((1 << t) - 1):
            out |= 1 << i
    return out


def rel_coimage(xs: int, r: int, t: int) -> int:
    """{j : (i, j) in r for some i in xs}."""
    out = 0
    for i in range(t):
        if xs >> i & 1:
            out |= (r >> (i * t)) & ((1 << t) - 1)
    return out


def rel_from_pairs(pairs: Iterable[Tuple[int, int]], t: int) -> int:
    out = 0
    for i, j in pairs:
        out |= 1 << (i * t + j)
    return out


def rel_pairs(r: int, t: int) -> List[Tuple[int, int]]:
    return [(i, j) for i in range(t) for j in range(t) if r >> (i * t + j) & 1]


# ---------------------------------------------------------------------------
# relabelings

class Relabeling:
    kind = "abstract"
    table: Tuple[int, ...]

    def apply(self, g: int) -> int:
        return self.table[g]

    def apply_set(self, mask: int) -> int:
        """Image of a label set (bitmask)."""
        out = 0
        for g in _bits(mask):
            out |= 1 << self.table[g]
        return out

    def coimage(self, mask: int) -> int:
        """{g : self.apply(g) in mask}."""
        out = 0
        for g, h in enumerate(self.table):
            if mask >> h & 1:
                out |= 1 << g
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Relabeling) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def key(self):
        return self.table


@dataclass(frozen=True, eq=False)
class FunctionRelabeling(Relabeling):
    table: Tuple[int, ...]
    kind = "function"

    def compose(self, other: "FunctionRelabeling") -> "FunctionRelabeling":
        """self . other: apply other first, then self."""
        return FunctionRelabeling(tuple(self.table[g] for g in other.table))

    @classmethod
    def identity(cls, q: int) -> "FunctionRelabeling":
        return cls(tuple(range(q)))


class RelationPairRelabeling(Relabeling):
    """Relations (ge, le) on [t]; label index ``ge_set | le_set << t``."""

    kind = "relation"
    __slots__ = ("t", "ge", "le", "_table")

    def __init__(self, t: int, ge: int, le: int):
        self.t = t
        self.ge = ge
        self.le = le
        self._table = None

    @property
    def table(self) -> Tuple[int, ...]:
        if self._table is None:
            t = self.t
            mask = (1 << t) - 1
            ge_img = [rel_image(self.ge, s, t) for s in range(1 << t)]
            le_img = [rel_image(self.le, s, t) for s in range(1 << t)]
            self._table = tuple(ge_img[g & mask] | le_img[g >> t] << t
                                for g in range(1 << (2 * t)))
        return self._table

    def compose(self, other: "RelationPairRelabeling") -> "RelationPairRelabeling":
        return RelationPairRelabeling(self.t, rel_compose(self.ge, other.ge, self.t),
                                      rel_compose(self.le, other.le, self.t))

    @classmethod
    def identity(cls, t: int) -> "RelationPairRelabeling":
        diag = rel_from_pairs([(i, i) for i in range(t)], t)
        return cls(t, diag, diag)

    def key(self):
        return (self.t, self.ge, self.le)

    def __repr__(self) -> str:
        return f"RelationPairRelabeling(t={self.t}, ge={self.ge:#x}, le={self.le:#x})"


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits(mask: int) -> List[int]:
    return list(_bits(mask))


# ---------------------------------------------------------------------------
# tw labels

@dataclass(frozen=True)
class TwLabel:
    ge_idx: FrozenSet[int]
    le_idx: FrozenSet[int]

    def index(self, t: int) -> int:
        return sum(1 << (i - 1) for i in self.ge_idx) | sum(1 << (i - 1) for i in self.le_idx) << t

    @classmethod
    def from_index(cls, g: int, t: int) -> "TwLabel":
        return cls(frozenset(i + 1 for i in range(t) if g >> i & 1),
                   frozenset(i + 1 for i in range(t) if g >> (t + i) & 1))

    def __str__(self) -> str:
        ge = ",".join(map(str, sorted(self.ge_idx)))
        le = ",".join(map(str, sorted(self.le_idx)))
        return f"[{ge}|{le}]"


@dataclass(frozen=True)
class LSets:
    le: int  # bitmask over Q
    ge: int


# ---------------------------------------------------------------------------
# decompositions

class NLCDecomposition:
    """Binary tree over X with initial labels, edge relabelings and status relations.

    ``rho[v]`` is the relabeling on the edge from v's parent to v.  ``R[u]`` and
    ``Rp[u]`` hold (left label, right label) pairs: R for left <= right, Rp for
    right <= left.
    """

    def __init__(self, tree: RootedTree, q: int, eta: Mapping[str, int],
                 rho: Mapping[str, Relabeling], R: Mapping[str, FrozenSet[LabelPair]],
                 Rp: Mapping[str, FrozenSet[LabelPair]], *, t: Optional[int] = None,
                 source: Optional[BinaryLeafDecomposition] = None):
        if not tree.is_binary():
            raise BadParameter("NLC tree must be binary")
        kinds = {r.kind for r in rho.values()}
        if len(kinds) > 1:
            raise BadParameter("relabeling algebras must not be mixed")
        self.tree = tree
        self.q = q
        self.eta = dict(eta)
        self.rho = dict(rho)
        self.R = {u: frozenset(R.get(u, ())) for u in tree.inner_nodes() + [tree.root]
                  if not tree.is_leaf(u)}
        self.Rp = {u: frozenset(Rp.get(u, ())) for u in self.R}
        self.kind = kinds.pop() if kinds else "function"
        self.t = t
        self.source = source
        self._rho_memo: Dict[Tuple[str, str], Relabeling] = {}
        self._labels: Dict[str, Dict[str, int]] = {}
        self._l_memo: Dict[Tuple[str, str], LSets] = {}
        for u in tree.postorder():
            if tree.is_leaf(u):
                self._labels[u] = {u: self.eta[u]}
            else:
                here = {}
                for c in tree.children(u):
                    tab = self.rho[c].table
                    for x, g in self._labels[c].items():
                        here[x] = tab[g]
                self._labels[u] = here

    @property
    def elements(self) -> List[str]:
        return self.tree.leaves()

    def identity(self) -> Relabeling:
        if self.kind == "relation":
            return RelationPairRelabeling.identity(self.t)
        return FunctionRelabeling.identity(self.q)

    def rho_path(self, u: str, v: str) -> Relabeling:
        """rho(u, v) for u an ancestor-or-equal of v."""
        if u == v:
            return self.identity()
        key = (u, v)
        got = self._rho_memo.get(key)
        if got is None:
            p = self.tree.parent(v)
            edge = self.rho[v]
            got = edge if p == u else self.rho_path(u, p).compose(edge)
            self._rho_memo[key] = got
        return got

    def label(self, u: str, x: str) -> int:
        """eta(u, x) for a leaf x below u."""
        return self._labels[u][x]

    def labels_at(self, u: str) -> Mapping[str, int]:
        return self._labels[u]

    def decode(self, x: str, y: str) -> bool:
        if x == y:
            raise BadParameter("decode needs distinct leaves")
        tree = self.tree
        u = tree.lca(x, y)
        if tree.side(u, x) == 0:
            return (self.label(u, x), self.label(u, y)) in self.R[u]
        return (self.label(u, y), self.label(u, x)) in self.Rp[u]

    def l_sets(self, x: str, v: str) -> LSets:
        key = (x, v)
        got = self._l_memo.get(key)
        if got is not None:
            return got
        tree = self.tree
        if tree.is_ancestor(v, x):
            raise BadParameter(f"{v} is an ancestor of {x}")
        u = tree.lca(x, v)
        ex = self.label(u, x)
        tab = self.rho_path(u, v).table
        le = ge = 0
        if tree.side(u, x) == 0:
            R, Rp = self.R[u], self.Rp[u]
            for g in range(self.q):
                pair = (ex, tab[g])
                if pair in R:
                    le |= 1 << g
                if pair in Rp:
                    ge |= 1 << g
        else:
            R, Rp = self.R[u], self.Rp[u]
            for g in range(self.q):
                pair = (tab[g], ex)
                if pair in Rp:
                    le |= 1 << g
                if pair in R:
                    ge |= 1 << g
        got = LSets(le, ge)
        self._l_memo[key] = got
        return got


def decode(n: NLCDecomposition, x: str, y: str) -> bool:
    return n.decode(x, y)


def validate(n: NLCDecomposition, p: Poset) -> bool:
    if set(n.elements) != set(p.elements):
        return False
    for x in p.elements:
        for y in p.elements:
            if x != y and n.decode(x, y) != p.lt(x, y):
                return False
    return True


def decoded_poset(n: NLCDecomposition) -> Optional[Poset]:
    """The order encoded by ``n`` if the decoded relation is a strict order."""
    from .poset import poset_from_leq

    elems = sorted(n.elements)
    rel = {(x, y) for x in elems for y in elems if x != y and n.decode(x, y)}
    for x, y in rel:
        if (y, x) in rel:
            return None
        for z in elems:
            if (y, z) in rel and z != x and (x, z) not in rel:
                return None
    return poset_from_leq(elems, lambda a, b: (a, b) in rel)


def l_sets(n: NLCDecomposition, x: str, v: str) -> LSets:
    return n.l_sets(x, v)


# ---------------------------------------------------------------------------
# construction from a binary leaf decomposition

def tw_status_relations(t: int) -> Tuple[FrozenSet[LabelPair], FrozenSet[LabelPair]]:
    q = 1 << (2 * t)
    mask = (1 << t) - 1
    R = frozenset((a, b) for a in range(q) for b in range(q) if (a & mask) & (b >> t))
    Rp = frozenset((a, b) for a in range(q) for b in range(q) if (a >> t) & (b & mask))
    return R, Rp


def nlc_from_treedec(p: Poset, b: BinaryLeafDecomposition) -> NLCDecomposition:
    t = b.t
    tree = b.tree
    eta = {}
    for x in tree.leaves():
        ge = sum(1 << i for i in range(t) if p.leq(x, b.z(x, i + 1)))
        le = sum(1 << i for i in range(t) if p.leq(b.z(x, i + 1), x))
        eta[x] = ge | le << t
    rho: Dict[str, Relabeling] = {}
    for u, v in tree.edges():
        ge = rel_from_pairs([(i, j) for i in range(t) for j in range(t)
                             if p.leq(b.z(v, j + 1), b.z(u, i + 1))], t)
        le = rel_from_pairs([(i, j) for i in range(t) for j in range(t)
                             if p.leq(b.z(u, i + 1), b.z(v, j + 1))], t)
        rho[v] = RelationPairRelabeling(t, ge, le)
    R, Rp = tw_status_relations(t)
    inner = [u for u in tree.nodes if not tree.is_leaf(u)]
    n = NLCDecomposition(tree, 1 << (2 * t), eta, rho, {u: R for u in inner},
                         {u: Rp for u in inner}, t=t, source=b)
    if not validate(n, p):
        raise InvalidDecomposition("compiled NLC-decomposition does not decode the poset")
    return n


def tw_l_sets_expected(p: Poset, n: NLCDecomposition, x: str, v: str) -> LSets:
    """Closed form of the L-sets for the tree-decomposition route."""
    b = n.source
    t = n.t
    le = ge = 0
    for g in range(n.q):
        ge_idx, le_idx = g & ((1 << t) - 1), g >> t
        if any(le_idx >> j & 1 and p.leq(x, b.z(v, j + 1)) for j in range(t)):
            le |= 1 << g
        if any(ge_idx >> j & 1 and p.leq(b.z(v, j + 1), x) for j in range(t)):
            ge |= 1 << g
    return LSets(le, ge)


def as_function_decomposition(n: NLCDecomposition) -> NLCDecomposition:
    """Same decomposition with every relabeling replaced by its table."""
    rho = {v: FunctionRelabeling(tuple(r.table)) for v, r in n.rho.items()}
    return NLCDecomposition(n.tree, n.q, n.eta, rho, n.R, n.Rp)


def check_l_sets(n: NLCDecomposition, p: Poset) -> bool:
    """Exhaustive check that L-sets predict comparabilities with X(v)."""
    tree = n.tree
    for v in tree.nodes:
        below = tree.leaves_below(v)
        for x in p.elements:
            if tree.is_ancestor(v, x):
                continue
            ls = n.l_sets(x, v)
            for y in below:
                g = n.label(v, y)
                if bool(ls.le >> g & 1) != p.leq(x, y):
                    return False
                if bool(ls.ge >> g & 1) != p.leq(y, x):
                    return False
    return True


def check_composition_law(n: NLCDecomposition) -> bool:
    """rho(u,v) rho(v,w) = rho(u,w) and eta(u,x) = rho(u,v) eta(v,x)."""
    tree = n.tree
    for u in tree.nodes:
        for v in tree.descendants(u):
            ruv = n.rho_path(u, v)
            for w in tree.descendants(v):
                if ruv.compose(n.rho_path(v, w)).table != n.rho_path(u, w).table:
                    return False
            for x in tree.leaves_below(v):
                if ruv.apply(n.label(v, x)) != n.label(u, x):
                    return False
    return True
