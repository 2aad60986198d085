"""Seeded instance generators, hand-built fixtures and the shared test corpus."""

from __future__ import annotations

import itertools
import random
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import BadParameter, SearchExhausted
from .nlc import FunctionRelabeling, NLCDecomposition, decoded_poset
from .poset import Poset, antichain, chain, kelly_example, poset_from_cover_relations, standard_example
from .semigroup import FiniteSemigroup, SemigroupLabeledTree, compose_functions
from .split import Split, anchored_split
from .treedec import BinaryLeafDecomposition
from .trees import RootedTree


# ---------------------------------------------------------------------------
# posets

def random_poset(n: int, width: int, seed: int, *, density: float = 0.7,
                 prefix: str = "x") -> Poset:
    """Random partial width-tree, oriented by a random linear order, then closed.

    Cover pairs of the closure are arcs of the oriented graph, so the cover
    graph keeps treewidth <= width.
    """
    if n < 1 or width < 0:
        raise BadParameter("need n >= 1 and width >= 0")
    rng = random.Random(seed)
    base = min(n, width + 1)
    edges = {(i, j) for j in range(base) for i in range(j)}
    cliques = [tuple(range(base))]
    for v in range(base, n):
        c = list(rng.choice(cliques))
        if len(c) > width:
            c.remove(rng.choice(c))
        edges.update((u, v) for u in c)
        cliques.append(tuple(c) + (v,))
    kept = [e for e in sorted(edges) if rng.random() < density]
    rank = list(range(n))
    rng.shuffle(rank)
    names = [f"{prefix}{i}" for i in range(n)]
    arcs = [(names[a], names[b]) if rank[a] < rank[b] else (names[b], names[a]) for a, b in kept]
    return poset_from_cover_relations(names, arcs)


def random_cover_poset(n: int, width: int, seed: int) -> Poset:
    return random_poset(n, width, seed)


# ---------------------------------------------------------------------------
# trees

def random_binary_tree(leaves: Sequence[str], rng: random.Random, stem: str = "_u") -> RootedTree:
    """Uniformly random merges of the given leaves; inner ids ``stem0``..."""
    if not leaves:
        raise BadParameter("need at least one leaf")
    pool = list(leaves)
    children: Dict[str, List[str]] = {}
    count = 0
    while len(pool) > 1:
        i, j = sorted(rng.sample(range(len(pool)), 2))
        a, b = pool[i], pool[j]
        if rng.random() < 0.5:
            a, b = b, a
        name = f"{stem}{count}"
        count += 1
        children[name] = [a, b]
        pool[i] = name
        pool.pop(j)
    return RootedTree(pool[0], children)


def random_tree(inner: int, rng: random.Random, *, max_extra_leaves: int = 2) -> RootedTree:
    """Random rooted tree with exactly ``inner`` non-root non-leaf nodes."""
    children: Dict[str, List[str]] = {"r": []}
    inner_names = [f"u{i}" for i in range(inner)]
    for i, name in enumerate(inner_names):
        par = rng.choice(["r"] + inner_names[:i])
        children[par].append(name)
        children[name] = []
    leaf = 0
    for u in ["r"] + inner_names:
        extra = rng.randint(0 if children[u] else 1, max_extra_leaves)
        for _ in range(extra):
            name = f"x{leaf}"
            leaf += 1
            children[u].append(name)
        rng.shuffle(children[u])
    if not children["r"]:
        children["r"].append(f"x{leaf}")
    return RootedTree("r", children)


# ---------------------------------------------------------------------------
# semigroups

def random_semigroup(max_size: int, rng: random.Random, *, degree: int = 3) -> FiniteSemigroup:
    """Subsemigroup of the maps on [degree] generated by one or two random maps."""
    if max_size < 1:
        raise BadParameter("max_size must be positive")
    for _ in range(10000):
        gens = [tuple(rng.randrange(degree) for _ in range(degree))
                for _ in range(rng.randint(1, 2))]
        try:
            sg = FiniteSemigroup.generated(gens, compose_functions, guard=max_size)
        except Exception:
            continue
        if sg.size <= max_size:
            return sg
    raise SearchExhausted("no small subsemigroup found")


def random_labeled_tree(sg: FiniteSemigroup, inner: int, rng: random.Random) -> SemigroupLabeledTree:
    tree = random_tree(inner, rng)
    labels = {v: rng.choice(sg.elements) for v in tree.nodes if v != tree.root}
    return SemigroupLabeledTree(tree, labels, sg.mul, sg)


# ---------------------------------------------------------------------------
# NLC-decompositions

def random_nlc(n: int, q: int, seed: int, *, density: float = 0.25,
               max_tries: int = 5000) -> NLCDecomposition:
    """Random decomposition of a poset by rejection: resample until the
    decoded relation is a partial order."""
    rng = random.Random(seed)
    names = [f"x{i}" for i in range(n)]
    all_pairs = [(a, b) for a in range(q) for b in range(q)]
    for _ in range(max_tries):
        tree = random_binary_tree(names, rng)
        eta = {x: rng.randrange(q) for x in names}
        rho = {v: FunctionRelabeling(tuple(rng.randrange(q) for _ in range(q)))
               for v in tree.nodes if v != tree.root}
        R, Rp = {}, {}
        for u in tree.nodes:
            if tree.is_leaf(u):
                continue
            R[u] = frozenset(pr for pr in all_pairs if rng.random() < density)
            Rp[u] = frozenset(pr for pr in all_pairs if pr not in R[u] and rng.random() < density)
        dec = NLCDecomposition(tree, q, eta, rho, R, Rp)
        if decoded_poset(dec) is not None:
            return dec
    raise SearchExhausted(f"no valid decomposition in {max_tries} tries")


def caterpillar_nlc(k: int, *, noise: bool = False) -> NLCDecomposition:
    """Spine w1..w_{k-1}, each with a gadget g_i holding a_i and b_i.

    Decodes to S_k (a_i < b_j for i != j).  With ``noise`` the gadget also
    holds an isolated element c_i with a third label, and the edges into the
    gadgets swap the first two labels.
    """
    if k < 2:
        raise BadParameter("k must be at least 2")
    A, B, C = 0, 1, 2
    children: Dict[str, List[str]] = {}
    for i in range(1, k):
        children[f"w{i}"] = [f"g{i}", f"w{i + 1}" if i < k - 1 else f"g{k}"]
    q = 3 if noise else 2
    eta: Dict[str, int] = {}
    for i in range(1, k + 1):
        if noise:
            children[f"g{i}"] = [f"a{i}", f"h{i}"]
            children[f"h{i}"] = [f"b{i}", f"c{i}"]
            eta[f"a{i}"], eta[f"b{i}"], eta[f"c{i}"] = B, A, C
        else:
            children[f"g{i}"] = [f"a{i}", f"b{i}"]
            eta[f"a{i}"], eta[f"b{i}"] = A, B
    tree = RootedTree("w1", children)
    ident = FunctionRelabeling(tuple(range(q)))
    swap = FunctionRelabeling((1, 0, 2))
    rho = {v: (swap if noise and v.startswith("g") else ident) for v in tree.nodes if v != tree.root}
    R = {f"w{i}": {(A, B)} for i in range(1, k)}
    Rp = {f"w{i}": {(B, A)} for i in range(1, k)}
    return NLCDecomposition(tree, q, eta, rho, R, Rp)


def caterpillar_parity_split(n: NLCDecomposition) -> Split:
    """Gadget nodes at the bottom levels, then odd spine nodes, then even ones.

    Only even spine nodes end up as neighbors of one another.
    """
    inner = n.tree.inner_nodes()
    gadget = sorted({u[0] for u in inner if u[0] != "w"}, reverse=True)  # "h" below "g"
    base = {c: i + 1 for i, c in enumerate(gadget)}
    top = len(gadget)
    s = {}
    for u in inner:
        if u[0] == "w":
            s[u] = top + (2 if int(u[1:]) % 2 == 0 else 1)
        else:
            s[u] = base[u[0]]
    return Split(s, top + 2)


def kelly_path_decomposition(k: int) -> BinaryLeafDecomposition:
    """Path-shaped binary decomposition of K_k with bags of size 4.

    Elements are introduced one per spine node in the order c1, d1, then
    a_{i+1}, c_{i+1}, d_{i+1}, b_{i+1} for i = 1..k-2; spine node ``_s{j}``
    holds the bag of the j-th introduced element as its left leaf.
    """
    if k < 3:
        raise BadParameter("k must be at least 3")
    t = 4
    seq: List[Tuple[str, List[str]]] = [("c1", ["c1"]), ("d1", ["d1", "c1"])]
    for i in range(1, k - 1):
        a, c, d, b = f"a{i + 1}", f"c{i}", f"d{i}", f"b{i + 1}"
        c2, d2 = f"c{i + 1}", f"d{i + 1}"
        seq += [(a, [a, c, d]), (c2, [c2, a, c, d]), (d2, [d2, c2, c, d]), (b, [b, c2, d2, c])]
    # K_k has no a_1, b_1, a_k or b_k; c_1 and d_1 open the path instead
    children: Dict[str, List[str]] = {}
    bags: Dict[str, frozenset] = {}
    enum: Dict[str, Tuple[str, ...]] = {}
    m = len(seq)
    for idx, (x, e) in enumerate(seq):
        e = e + [e[-1]] * (t - len(e))
        bags[x] = frozenset(e)
        enum[x] = tuple(e)
        if idx < m - 1:
            spine = f"_s{idx}"
            bags[spine] = frozenset(e)
            enum[spine] = tuple(e)
            children[spine] = [x, f"_s{idx + 1}" if idx + 1 < m - 1 else seq[-1][0]]
    return BinaryLeafDecomposition(RootedTree("_s0", children), bags, enum, t)


def kelly_phase_nodes(k: int) -> List[str]:
    """Spine nodes that introduce a_2, a_3, ... (one per stage)."""
    return [f"_s{2 + 4 * i}" for i in range(k - 2)]


def kelly_anchored_split(b: BinaryLeafDecomposition, k: int, *, offset: int = 0,
                         spacing: int = 3) -> Split:
    return anchored_split(b.tree, kelly_phase_nodes(k)[offset::spacing])


# ---------------------------------------------------------------------------
# corpus

def corpus(max_elements: Optional[int] = None) -> List[Tuple[str, Poset]]:
    """Deterministic list of named posets shared by the property tests."""
    items: List[Tuple[str, Poset]] = []
    for k in (2, 3, 4):
        items.append((f"standard{k}", standard_example(k)))
    for k in (3, 4, 5):
        items.append((f"kelly{k}", kelly_example(k)))
    for n in (1, 2, 5):
        items.append((f"chain{n}", chain(n)))
    for n in (2, 3):
        items.append((f"antichain{n}", antichain(n)))
    for seed, (n, w) in enumerate(itertools.product((6, 9, 12), (1, 2))):
        items.append((f"random{n}w{w}s{seed}", random_poset(n, w, seed)))
    for seed, n in enumerate((16, 22, 30)):
        items.append((f"forest{n}s{seed}", random_poset(n, 1, 100 + seed)))
    if max_elements is not None:
        items = [(name, p) for name, p in items if len(p) <= max_elements]
    return items
