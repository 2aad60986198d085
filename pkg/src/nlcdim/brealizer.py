"""Boolean realizers built from linear orders over decomposition trees.

Three layers:

* :func:`color_detection` encodes the colors of the two children of
  lca(x, y) into ``2 * ceil(log2 |C|)`` orders (a :class:`DirTable`).
* :func:`composition_orders` stacks such tables along a forward Ramseyan
  split so that the path products (lambda(u, x), lambda(u, y)) at u = lca(x, y)
  can be read back (an :class:`AggStructure`).
* :func:`boolean_realizer_nlc` and :func:`boolean_realizer_treedec` assemble
  the orders and a structured decoder into a :class:`BooleanRealizer`.

Decoders only ever see the bit vector ``[x <=_i y]``; they hold palettes and
the semigroup product, never the tree.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

from .config import DEFAULT_GUARDS, Guards
from .errors import BadParameter, NotForwardRamseyan, SearchExhausted, TooLarge
from .nlc import NLCDecomposition, as_function_decomposition, rel_compose
from .poset import Poset
from .semigroup import FiniteSemigroup, SemigroupLabeledTree, compose_functions
from .split import Split, colcombet_split, is_forward_ramseyan, trivial_split
from .treedec import BinaryLeafDecomposition
from .trees import RootedTree

Bits = Tuple[int, ...]


def code_width(size: int) -> int:
    """ceil(log2(size)) for size >= 1."""
    if size < 1:
        return 0
    return (size - 1).bit_length()


# ---------------------------------------------------------------------------
# palettes: injective codes of colors as fixed-width bit strings

class Palette:
    kind = "abstract"

    @property
    def size(self) -> int:
        raise NotImplementedError

    @property
    def width(self) -> int:
        return code_width(self.size)

    def encode(self, color) -> int:
        raise NotImplementedError

    def decode(self, code: int):
        """Raises KeyError for codes that name no color."""
        raise NotImplementedError


@dataclass(frozen=True)
class ListPalette(Palette):
    colors: Tuple[Hashable, ...]
    kind = "list"

    def __post_init__(self):
        object.__setattr__(self, "_index", {c: i for i, c in enumerate(self.colors)})
        if len(self._index) != len(self.colors):
            raise BadParameter("palette colors must be distinct")

    @property
    def size(self) -> int:
        return len(self.colors)

    def encode(self, color) -> int:
        return self._index[color]

    def decode(self, code: int):
        if not 0 <= code < len(self.colors):
            raise KeyError(code)
        return self.colors[code]


@dataclass(frozen=True)
class FunctionPalette(Palette):
    """All maps [q] -> [q] as tables, coded in base q."""

    q: int
    kind = "functions"

    @property
    def size(self) -> int:
        return self.q ** self.q

    def encode(self, color) -> int:
        out = 0
        for g in reversed(color):
            out = out * self.q + g
        return out

    def decode(self, code: int):
        if not 0 <= code < self.size:
            raise KeyError(code)
        out = []
        for _ in range(self.q):
            code, g = divmod(code, self.q)
            out.append(g)
        return tuple(out)


@dataclass(frozen=True)
class RelationPalette(Palette):
    """All relations on [t] as t*t-bit masks."""

    t: int
    kind = "relations"

    @property
    def size(self) -> int:
        return 2 ** (self.t * self.t)

    def encode(self, color) -> int:
        return color

    def decode(self, code: int):
        if not 0 <= code < self.size:
            raise KeyError(code)
        return code


BIT_PALETTE = ListPalette((0, 1))


@dataclass(frozen=True, eq=False)
class ExplicitSemigroup:
    """A finite semigroup used directly; its palette is its element list."""

    sg: FiniteSemigroup
    kind = "explicit"

    def mul(self, a, b):
        return self.sg.mul(a, b)

    def palette(self) -> Palette:
        return ListPalette(self.sg.elements)

    @property
    def size(self) -> int:
        return self.sg.size


@dataclass(frozen=True)
class SemigroupRef:
    """Named product usable by a decoder."""

    kind: str  # "functions" or "relations"
    n: int

    def mul(self, a, b):
        if self.kind == "functions":
            return compose_functions(a, b)
        if self.kind == "relations":
            return rel_compose(a, b, self.n)
        raise BadParameter(f"unknown semigroup kind {self.kind!r}")

    def palette(self) -> Palette:
        return FunctionPalette(self.n) if self.kind == "functions" else RelationPalette(self.n)

    @property
    def size(self) -> int:
        return self.palette().size


# the per-bit lookup: (ref, bit of order 2i+1, bit of order 2i+2) -> (c_i, d_i)
DIR_RULE: Dict[Tuple[int, int, int], Tuple[int, int]] = {
    (ref, b1, b2): ((1 - b1, 1 - b2) if ref else (b2, b1))
    for ref in (0, 1) for b1 in (0, 1) for b2 in (0, 1)
}


def dir_rule_hex() -> str:
    """The lookup table packed as 16 bits (c_i, d_i per entry), in hex."""
    word = 0
    for key in sorted(DIR_RULE):
        c, d = DIR_RULE[key]
        idx = key[0] << 2 | key[1] << 1 | key[2]
        word |= (c << 1 | d) << (2 * idx)
    return f"{word:04x}"


# ---------------------------------------------------------------------------
# consistent orders

def consistent_leaf_order(tree: RootedTree) -> List[Hashable]:
    """Leaves left to right (children in stored order)."""
    return [u for u in tree.preorder() if tree.is_leaf(u)]


def is_consistent(tree: RootedTree, order: Sequence[Hashable]) -> bool:
    """Every node's leaf set is a contiguous interval of ``order``."""
    pos = {x: i for i, x in enumerate(order)}
    if set(pos) != set(tree.leaves()) or len(pos) != len(order):
        return False
    for u in tree.nodes:
        ps = [pos[x] for x in tree.leaves_below(u)]
        if max(ps) - min(ps) + 1 != len(ps):
            return False
    return True


# ---------------------------------------------------------------------------
# color detection

@dataclass(frozen=True)
class DirBlock:
    """Decoder half of a color detection table: 2 * width bits."""

    palette: Palette

    @property
    def count(self) -> int:
        return 2 * self.palette.width

    def decode(self, ref_bit: int, bits: Sequence[int]):
        c = d = 0
        for i in range(self.palette.width):
            ci, di = DIR_RULE[(ref_bit, bits[2 * i], bits[2 * i + 1])]
            c |= ci << i
            d |= di << i
        return self.palette.decode(c), self.palette.decode(d)


@dataclass(frozen=True)
class DirTable:
    block: DirBlock
    orders: Tuple[Tuple[Hashable, ...], ...]

    @property
    def k(self) -> int:
        return len(self.orders)

    @property
    def colors(self) -> Palette:
        return self.block.palette

    def decode(self, ref_bit: int, bits: Sequence[int]):
        return self.block.decode(ref_bit, bits)


def _arranged_leaves(tree: RootedTree, first: Mapping[Hashable, int],
                     arrange: Callable[[List[Hashable]], List[Hashable]]) -> Tuple[Hashable, ...]:
    out = []
    stack = [tree.root]
    while stack:
        u = stack.pop()
        kids = tree.children(u)
        if not kids:
            out.append(u)
            continue
        kids = arrange(sorted(kids, key=first.__getitem__))
        stack.extend(reversed(kids))
    return tuple(out)


def _first_positions(tree: RootedTree, pos: Mapping[Hashable, int]) -> Dict[Hashable, int]:
    first: Dict[Hashable, int] = {}
    for u in tree.postorder():
        kids = tree.children(u)
        first[u] = pos[u] if not kids else min(first[c] for c in kids)
    return first


def default_palette(tree: RootedTree, coloring: Mapping[Hashable, Hashable]) -> ListPalette:
    """Colors in order of first appearance in preorder."""
    seen: Dict[Hashable, None] = {}
    for u in tree.preorder()[1:]:
        seen.setdefault(coloring[u], None)
    return ListPalette(tuple(seen))


def color_detection(tree: RootedTree, coloring: Mapping[Hashable, Hashable],
                    ref: Sequence[Hashable], palette: Optional[Palette] = None) -> DirTable:
    """Orders from which the colors of the two children of lca(x, y) can be read.

    ``ref`` must be consistent with ``tree``.  For each bit position i of the
    color code there are two orders: in the first the children of every node
    with bit 0 come first in reference order, followed by those with bit 1 in
    reverse reference order; the second puts the reversed bit-1 children first.
    """
    if palette is None:
        palette = default_palette(tree, coloring)
    pos = {x: i for i, x in enumerate(ref)}
    first = _first_positions(tree, pos)
    code = {u: palette.encode(coloring[u]) for u in tree.preorder()[1:]}
    orders = []
    for i in range(palette.width):
        def zeros(kids, i=i):
            return [c for c in kids if not code[c] >> i & 1]

        def ones(kids, i=i):
            return [c for c in kids if code[c] >> i & 1][::-1]

        orders.append(_arranged_leaves(tree, first, lambda ks: zeros(ks) + ones(ks)))
        orders.append(_arranged_leaves(tree, first, lambda ks: ones(ks) + zeros(ks)))
    return DirTable(DirBlock(palette), tuple(orders))


# ---------------------------------------------------------------------------
# composition orders

@dataclass(frozen=True)
class AggBlock:
    """Decoder half of the composition orders.

    Layout: one block over the full palette for h = 0, then per level h the
    blocks psi, zeta0, zeta1 (two orders each) and phi0, phi1, phi_next.
    """

    semigroup: SemigroupRef
    order: int
    palette: Palette

    @property
    def k(self) -> int:
        return 2 * self.palette.width

    @property
    def count(self) -> int:
        return self.k + self.order * (3 * self.k + 6)

    def decode(self, ref_bit: int, bits: Sequence[int]):
        full, bit = DirBlock(self.palette), DirBlock(BIT_PALETTE)
        at = 0

        def take(block):
            nonlocal at
            got = block.decode(ref_bit, bits[at:at + block.count])
            at += block.count
            return got

        acc_x, acc_y = take(full)
        mul = self.semigroup.mul
        for _ in range(self.order):
            psi = take(bit)
            z0 = take(bit)
            z1 = take(bit)
            p0 = take(full)
            p1 = take(full)
            pn = take(full)
            terms = []
            for side in (0, 1):
                if z0[side] and z1[side]:
                    terms.append(None)
                elif z0[side] != z1[side]:
                    terms.append(pn[side])
                elif psi[side] == 0:
                    terms.append(mul(p1[side], pn[side]))
                else:
                    terms.append(mul(p0[side], pn[side]))
            if terms[0] is not None:
                acc_x = mul(acc_x, terms[0])
            if terms[1] is not None:
                acc_y = mul(acc_y, terms[1])
        return acc_x, acc_y


@dataclass(frozen=True)
class AggStructure:
    block: AggBlock
    orders: Tuple[Tuple[Hashable, ...], ...]
    split: Split

    @property
    def d(self) -> int:
        return len(self.orders)

    def decode(self, ref_bit: int, bits: Sequence[int]):
        return self.block.decode(ref_bit, bits)


def agg_formula(size: int) -> int:
    """(6|L| + 2) * ceil(log2 |L|) + 6|L|."""
    return (6 * size + 2) * code_width(size) + 6 * size


def _levels(tree: RootedTree, s: Split, top: int) -> Dict[Hashable, int]:
    lev = {u: top for u in tree.nodes}
    lev.update(s.assignment)
    return lev


def composition_orders(lt: SemigroupLabeledTree, s: Split, ref: Sequence[Hashable],
                       semigroup, *, order: Optional[int] = None,
                       check: bool = True) -> AggStructure:
    """Orders recovering (lambda(u, x), lambda(u, y)) at u = lca(x, y).

    ``semigroup`` is a :class:`SemigroupRef` or :class:`ExplicitSemigroup`;
    its palette fixes the block widths.  ``order`` may exceed the split's own
    order; the extra levels are empty.
    """
    tree = lt.tree
    if check:
        ok, bad = is_forward_ramseyan(lt, s)
        if not ok:
            raise NotForwardRamseyan(f"split violates absorption at {bad}")
    p = s.order if order is None else order
    if p < s.order:
        raise BadParameter("order must be at least the split order")
    palette = semigroup.palette()
    lev = _levels(tree, s, p + 1)
    nodes = tree.nodes

    def parent_in(keep_level: int):
        """Nearest proper ancestor with level >= keep_level."""
        out = {}
        for v in nodes[1:]:
            a = tree.parent(v)
            while lev[a] < keep_level:
                a = tree.parent(a)
            out[v] = a
        return out

    orders: List[Tuple[Hashable, ...]] = []
    phi1 = {v: lt.lam(tree.parent(v), v) for v in nodes[1:]}
    orders.extend(color_detection(tree, phi1, ref, palette).orders)
    for h in range(1, p + 1):
        ge_h = [v for v in nodes if lev[v] >= h]
        up = parent_in(h)
        phi = {v: lt.lam(up[v], v) for v in ge_h if v != tree.root}
        parity: Dict[Hashable, int] = {}
        for v in ge_h:
            if lev[v] != h:
                continue
            cnt = 0
            for a in tree.ancestors(v):
                if lev[a] > h:
                    break
                if lev[a] == h:
                    cnt += 1
            parity[v] = cnt % 2
        psi = {v: parity.get(v, 0) for v in phi}
        zeta = {v: 0 if lev[v] == h else 1 for v in phi}
        above = [v for v in nodes if lev[v] > h]
        w0 = above + [v for v, i in parity.items() if i == 0]
        w1 = above + [v for v, i in parity.items() if i == 1]
        t_ge = tree.induced(ge_h)
        t0 = tree.induced(w0)
        t1 = tree.induced(w1)
        t_up = tree.induced(above)

        def restrict(col, t):
            return {v: col[v] for v in t.nodes if v != t.root}

        orders.extend(color_detection(t_ge, restrict(psi, t_ge), ref, BIT_PALETTE).orders)
        orders.extend(color_detection(t0, restrict(zeta, t0), ref, BIT_PALETTE).orders)
        orders.extend(color_detection(t1, restrict(zeta, t1), ref, BIT_PALETTE).orders)
        orders.extend(color_detection(t0, restrict(phi, t0), ref, palette).orders)
        orders.extend(color_detection(t1, restrict(phi, t1), ref, palette).orders)
        orders.extend(color_detection(t_up, restrict(phi, t_up), ref, palette).orders)
    block = AggBlock(semigroup, p, palette)
    if len(orders) != block.count:
        raise AssertionError("order count disagrees with the block layout")
    return AggStructure(block, tuple(orders), s)


def choose_split(lt: SemigroupLabeledTree, size: int,
                 guards: Guards = DEFAULT_GUARDS) -> Tuple[Split, bool]:
    """colcombet_split with trivial_split as fallback; returns (split, searched)."""
    try:
        return colcombet_split(lt, max_order=size if size <= guards.semigroup_table else None,
                               guards=guards), True
    except (SearchExhausted, TooLarge):
        return trivial_split(lt.tree), False


def padded_order(s: Split, size: int, guards: Guards = DEFAULT_GUARDS) -> int:
    if s.order <= size <= guards.pad_semigroup:
        return size
    return s.order


# ---------------------------------------------------------------------------
# realizers

class Decoder:
    route = "abstract"

    @property
    def count(self) -> int:
        """Number of orders after the reference order."""
        raise NotImplementedError

    def decide(self, bits: Bits) -> bool:
        raise NotImplementedError


@dataclass(frozen=True)
class TrivialDecoder(Decoder):
    """For ground sets with fewer than two elements: no pairs to answer."""

    route = "trivial"

    @property
    def count(self) -> int:
        return 0

    def decide(self, bits: Bits) -> bool:
        return False


@dataclass(frozen=True)
class NlcDecoder(Decoder):
    agg: AggBlock
    rel: DirBlock
    init: DirBlock
    route = "nlc"

    @property
    def count(self) -> int:
        return self.agg.count + self.rel.count + self.init.count

    def decide(self, bits: Bits) -> bool:
        ref = bits[0]
        a, r = 1, 1 + self.agg.count
        i = r + self.rel.count
        try:
            rho_x, rho_y = self.agg.decode(ref, bits[a:r])
            rel_x, _ = self.rel.decode(ref, bits[r:i])
            eta_x, eta_y = self.init.decode(ref, bits[i:i + self.init.count])
            ex, ey = rho_x[eta_x], rho_y[eta_y]
        except (KeyError, IndexError, TypeError):
            return False
        # x on the right reads the right-child relation with the pair swapped
        return ((ex, ey) if ref else (ey, ex)) in rel_x


@dataclass(frozen=True)
class TreedecDecoder(Decoder):
    ge: AggBlock
    le: AggBlock
    t: int
    route = "treedec"

    @property
    def count(self) -> int:
        return self.ge.count + self.le.count

    def decide(self, bits: Bits) -> bool:
        ref = bits[0]
        mid = 1 + self.ge.count
        try:
            ge_x, _ = self.ge.decode(ref, bits[1:mid])
            _, le_y = self.le.decode(ref, bits[mid:mid + self.le.count])
        except (KeyError, IndexError):
            return False
        t = self.t
        return any(ge_x >> (i * t) & le_y >> (i * t) & 1 for i in range(t))


@dataclass(frozen=True)
class BooleanRealizer:
    elements: Tuple[str, ...]
    orders: Tuple[Tuple[str, ...], ...]
    decoder: Decoder
    info: Mapping[str, int] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_pos", [{x: i for i, x in enumerate(o)} for o in self.orders])

    @property
    def b(self) -> int:
        return len(self.orders)

    def bits(self, x: str, y: str) -> Bits:
        return tuple(1 if pos[x] < pos[y] else 0 for pos in self._pos)

    def decide(self, x: str, y: str) -> bool:
        return self.decoder.decide(self.bits(x, y))


def verify_realizer(p: Poset, r: BooleanRealizer) -> bool:
    """decoder(bits(x, y)) == [x <= y] for every ordered pair of distinct elements."""
    elems = list(p.elements)
    if sorted(r.elements) != sorted(elems):
        return False
    for o in r.orders:
        if len(o) != len(elems) or set(o) != set(elems):
            return False
    if len(elems) >= 2 and r.b != 1 + r.decoder.count:
        return False
    for x in elems:
        for y in elems:
            if x != y and r.decide(x, y) != p.leq(x, y):
                return False
    return True


def first_failure(p: Poset, r: BooleanRealizer) -> Optional[Tuple[str, str]]:
    for x in p.elements:
        for y in p.elements:
            if x != y and r.decide(x, y) != p.leq(x, y):
                return x, y
    return None


def _trivial(elements: Sequence[str]) -> BooleanRealizer:
    return BooleanRealizer(tuple(elements), (), TrivialDecoder(), {"b": 0})


def boolean_realizer_nlc(n: NLCDecomposition, guards: Guards = DEFAULT_GUARDS,
                         split: Optional[Split] = None) -> BooleanRealizer:
    """Realizer with b = 1 + d + (rel block) + 2*ceil(log2 q)."""
    tree = n.tree
    elements = tuple(tree.leaves())
    if len(elements) < 2:
        return _trivial(elements)
    if n.kind != "function":
        n = as_function_decomposition(n)
    q = n.q
    sg = SemigroupRef("functions", q)
    labels = {v: tuple(n.rho[v].table) for v in tree.nodes if v != tree.root}
    lt = SemigroupLabeledTree(tree, labels, compose_functions)
    size = q ** q
    searched = split is None
    if split is None:
        split, searched = choose_split(lt, size, guards)
    ref = consistent_leaf_order(tree)
    agg = composition_orders(lt, split, ref, sg, order=padded_order(split, size, guards))

    rel_col = {}
    for u in tree.nodes:
        kids = tree.children(u)
        if kids:
            rel_col[kids[0]] = n.R[u]
            rel_col[kids[1]] = n.Rp[u]
    rel = color_detection(tree, rel_col, ref)
    flat = RootedTree("__root__", {"__root__": list(ref)})
    init = color_detection(flat, {x: n.eta[x] for x in ref}, ref, ListPalette(tuple(range(q))))

    orders = (tuple(ref),) + agg.orders + rel.orders + init.orders
    dec = NlcDecoder(agg.block, rel.block, init.block)
    info = {"b": len(orders), "d": agg.d, "rel": rel.k, "init": init.k,
            "split_order": split.order, "agg_order": agg.block.order,
            "searched": int(searched)}
    return BooleanRealizer(elements, orders, dec, info)


def bag_labelings(p: Poset, b: BinaryLeafDecomposition):
    """(rho_ge, rho_le) edge labels as relations on [t]: (i, j) iff z^u_i >= / <= z^v_j."""
    tree = b.tree
    t = b.t
    ge: Dict[Hashable, int] = {}
    le: Dict[Hashable, int] = {}
    for v in tree.nodes:
        u = tree.parent(v)
        if u is None:
            continue
        g = l = 0
        for i in range(t):
            zu = b.z(u, i + 1)
            for j in range(t):
                zv = b.z(v, j + 1)
                if p.leq(zv, zu):
                    g |= 1 << (i * t + j)
                if p.leq(zu, zv):
                    l |= 1 << (i * t + j)
        ge[v], le[v] = g, l
    return ge, le


def boolean_realizer_treedec(p: Poset, b: BinaryLeafDecomposition,
                             guards: Guards = DEFAULT_GUARDS) -> BooleanRealizer:
    """Realizer with b = 2d + 1 over the relation semigroup on [t]."""
    tree = b.tree
    elements = tuple(tree.leaves())
    if len(elements) < 2:
        return _trivial(elements)
    t = b.t
    sg = SemigroupRef("relations", t)
    mul = lambda a, c: rel_compose(a, c, t)  # noqa: E731
    ge_lab, le_lab = bag_labelings(p, b)
    ref = consistent_leaf_order(tree)
    size = 2 ** (t * t)
    blocks = []
    info: Dict[str, int] = {}
    for name, labels in (("ge", ge_lab), ("le", le_lab)):
        lt = SemigroupLabeledTree(tree, labels, mul)
        split, searched = choose_split(lt, size, guards)
        blocks.append(composition_orders(lt, split, ref, sg, order=padded_order(split, size, guards)))
        info[f"{name}_split_order"] = split.order
        info[f"{name}_searched"] = int(searched)
    # both blocks share one order count so that b = 2d + 1
    if blocks[0].block.order != blocks[1].block.order:
        top = max(blocks[0].block.order, blocks[1].block.order)
        blocks = [composition_orders(a_lt, a.split, ref, sg, order=top, check=False)
                  for a, a_lt in zip(blocks, (SemigroupLabeledTree(tree, ge_lab, mul),
                                              SemigroupLabeledTree(tree, le_lab, mul)))]
    orders = (tuple(ref),) + blocks[0].orders + blocks[1].orders
    info.update({"b": len(orders), "d": blocks[0].d})
    return BooleanRealizer(elements, orders, TreedecDecoder(blocks[0].block, blocks[1].block, t),
                           info)


# ---------------------------------------------------------------------------
# mutations for negative controls

def mutate_reverse(r: BooleanRealizer, i: int) -> BooleanRealizer:
    orders = list(r.orders)
    orders[i] = tuple(reversed(orders[i]))
    return replace(r, orders=tuple(orders))


def mutate_swap(r: BooleanRealizer, i: int, a: int, b: int) -> BooleanRealizer:
    orders = list(r.orders)
    o = list(orders[i])
    o[a], o[b] = o[b], o[a]
    orders[i] = tuple(o)
    return replace(r, orders=tuple(orders))


def mutate_transpose(r: BooleanRealizer, x: str, y: str) -> BooleanRealizer:
    """Exchange x and y in every order; the result decides [pi(a) <= pi(b)]."""
    swap = {x: y, y: x}
    orders = tuple(tuple(swap.get(e, e) for e in o) for o in r.orders)
    return replace(r, orders=orders)


def mutate_drop(r: BooleanRealizer, i: int) -> BooleanRealizer:
    orders = list(r.orders)
    del orders[i]
    return replace(r, orders=tuple(orders))


def random_mutations(r: BooleanRealizer, count: int, seed: int = 0) -> List[BooleanRealizer]:
    """Swaps of a random adjacent pair in the reference order or order reversals."""
    rng = random.Random(seed)
    out = []
    m = len(r.elements)
    for j in range(count):
        if j % 2 == 0 or r.b < 2:
            a = rng.randrange(m - 1)
            out.append(mutate_swap(r, 0, a, a + 1))
        else:
            out.append(mutate_reverse(r, rng.randrange(1, r.b)))
    return out
