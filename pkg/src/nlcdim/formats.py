"""Plain-text line formats for every artifact the CLI reads or writes.

Each ``write_*`` returns a string and each ``read_*`` parses one; writers are
deterministic so that ``write(read(write(x))) == write(x)``.  Blank lines and
``#`` comments are ignored by every reader.  Malformed input raises
:class:`ParseError` carrying the 1-based line number.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .brealizer import (AggBlock, BooleanRealizer, DirBlock, ListPalette, NlcDecoder,
                        Palette, SemigroupRef, TreedecDecoder, TrivialDecoder, dir_rule_hex)
from .errors import CycleInInput, NlcDimError, ParseError
from .nlc import (FunctionRelabeling, NLCDecomposition, RelationPairRelabeling, rel_from_pairs,
                  rel_pairs, tw_status_relations)
from .poset import Poset, cover_graph, poset_from_cover_relations
from .split import Split
from .treedec import BinaryLeafDecomposition, TreeDecomposition
from .trees import RootedTree


def _lines(text: str) -> Iterator[Tuple[int, List[str]]]:
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line.split()


def _int(tok: str, no: int, source) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok!r}", no, source) from None


# ---------------------------------------------------------------------------
# posets

def write_poset(p: Poset, name: str = "P") -> str:
    out = [f"poset {name}"]
    out += [f"elem {x}" for x in p.elements]
    g = cover_graph(p)
    covers = sorted((a, b) if p.leq(a, b) else (b, a) for a, b in g.edges())
    out += [f"lt {a} {b}" for a, b in covers]
    return "\n".join(out) + "\n"


def read_poset(text: str, source=None) -> Tuple[str, Poset]:
    name = None
    elems: List[str] = []
    rels: List[Tuple[str, str]] = []
    declared = set()
    for no, toks in _lines(text):
        head = toks[0]
        if head == "poset" and len(toks) == 2:
            if name is not None:
                raise ParseError("second poset header", no, source)
            name = toks[1]
        elif head == "elem" and len(toks) == 2:
            if toks[1] in declared:
                raise ParseError(f"element {toks[1]} declared twice", no, source)
            declared.add(toks[1])
            elems.append(toks[1])
        elif head == "lt" and len(toks) == 3:
            for x in toks[1:]:
                if x not in declared:
                    raise ParseError(f"undeclared element {x}", no, source)
            rels.append((toks[1], toks[2]))
        else:
            raise ParseError(f"unrecognized line {' '.join(toks)!r}", no, source)
    if name is None:
        raise ParseError("missing 'poset <name>' header", None, source)
    try:
        return name, poset_from_cover_relations(elems, rels)
    except CycleInInput as exc:
        raise ParseError(f"relations contain a cycle ({exc})", None, source) from None


# ---------------------------------------------------------------------------
# trees, tree decompositions

def _tree_lines(tree: RootedTree, side: bool = False) -> List[str]:
    out = []
    for u in tree.preorder():
        par = tree.parent(u)
        line = f"node {u} parent {'none' if par is None else par}"
        if side and par is not None:
            line += " side " + ("left" if tree.children(par)[0] == u else "right")
        out.append(line)
    return out


def _build_tree(nodes: List[Tuple[str, Optional[str]]], no_of: Dict[str, int], source) -> RootedTree:
    roots = [u for u, par in nodes if par is None]
    if len(roots) != 1:
        raise ParseError(f"expected one root, found {len(roots)}", None, source)
    children: Dict[str, List[str]] = {u: [] for u, _ in nodes}
    for u, par in nodes:
        if par is not None:
            if par not in children:
                raise ParseError(f"unknown parent {par}", no_of[u], source)
            children[par].append(u)
    try:
        return RootedTree(roots[0], children)
    except NlcDimError as exc:
        raise ParseError(str(exc), None, source) from None


def write_treedec(td, name: str = "T") -> str:
    """Plain or regularized decomposition; the latter adds ``enum`` lines."""
    out = [f"treedec {name}"]
    out += _tree_lines(td.tree)
    for u in td.tree.preorder():
        out.append(f"bag {u} " + " ".join(sorted(td.bags[u])))
    if isinstance(td, BinaryLeafDecomposition):
        out.append(f"t {td.t}")
        for u in td.tree.preorder():
            out.append(f"enum {u} " + " ".join(td.enum[u]))
    return "\n".join(out) + "\n"


def read_treedec(text: str, source=None):
    nodes: List[Tuple[str, Optional[str]]] = []
    no_of: Dict[str, int] = {}
    bags: Dict[str, frozenset] = {}
    enum: Dict[str, Tuple[str, ...]] = {}
    t = None
    for no, toks in _lines(text):
        head = toks[0]
        if head == "treedec" and len(toks) == 2:
            continue
        if head == "node" and len(toks) == 4 and toks[2] == "parent":
            if toks[1] in no_of:
                raise ParseError(f"node {toks[1]} declared twice", no, source)
            no_of[toks[1]] = no
            nodes.append((toks[1], None if toks[3] == "none" else toks[3]))
        elif head == "bag" and len(toks) >= 2:
            bags[toks[1]] = frozenset(toks[2:])
        elif head == "enum" and len(toks) >= 3:
            enum[toks[1]] = tuple(toks[2:])
        elif head == "t" and len(toks) == 2:
            t = _int(toks[1], no, source)
        else:
            raise ParseError(f"unrecognized line {' '.join(toks)!r}", no, source)
    tree = _build_tree(nodes, no_of, source)
    missing = [u for u in tree.nodes if u not in bags]
    if missing:
        raise ParseError(f"node {missing[0]} has no bag", None, source)
    if enum or t is not None:
        if t is None or set(enum) != set(tree.nodes):
            raise ParseError("regularized decomposition needs 't' and one enum line per node",
                             None, source)
        for u, e in enum.items():
            if len(e) != t or frozenset(e) != bags[u]:
                raise ParseError(f"enum of {u} does not list its bag in {t} slots", None, source)
        return BinaryLeafDecomposition(tree, bags, enum, t)
    return TreeDecomposition(tree, bags)


# ---------------------------------------------------------------------------
# NLC-decompositions

def _pairs_text(pairs) -> str:
    return " ".join(f"{a}.{b}" for a, b in sorted(pairs))


def _parse_pairs(toks: Sequence[str], no: int, source) -> List[Tuple[int, int]]:
    out = []
    for tok in toks:
        a, dot, b = tok.partition(".")
        if not dot:
            raise ParseError(f"expected a pair a.b, got {tok!r}", no, source)
        out.append((_int(a, no, source), _int(b, no, source)))
    return out


def write_nlc(n: NLCDecomposition, name: str = "N") -> str:
    tree = n.tree
    head = f"nlc {name} q {n.q}"
    if n.kind == "relation":
        head += f" t {n.t}"
    out = [head]
    out += _tree_lines(tree, side=True)
    for x in tree.preorder():
        if tree.is_leaf(x):
            out.append(f"eta {x} {n.eta[x]}")
    for v in tree.preorder()[1:]:
        r = n.rho[v]
        par = tree.parent(v)
        if n.kind == "relation":
            out.append(f"rho {par} {v} ge {_pairs_text(rel_pairs(r.ge, r.t))} "
                       f"le {_pairs_text(rel_pairs(r.le, r.t))}".rstrip())
        else:
            out.append(f"rho {par} {v} " + " ".join(f"{g}:{h}" for g, h in enumerate(r.table)))
    tw = tw_status_relations(n.t) if n.kind == "relation" else (None, None)
    for u in tree.preorder():
        if not tree.is_leaf(u):
            # the canonical bag-derived relations are written as the token "tw"
            for tag, rel, canon in (("R", n.R[u], tw[0]), ("Rp", n.Rp[u], tw[1])):
                body = "tw" if rel == canon else _pairs_text(rel)
                out.append(f"{tag} {u} {body}".rstrip())
    if n.source is not None:
        for u in tree.preorder():
            out.append(f"enum {u} " + " ".join(n.source.enum[u]))
    return "\n".join(out) + "\n"


def read_nlc(text: str, source=None) -> NLCDecomposition:
    q = t = None
    nodes: List[Tuple[str, Optional[str]]] = []
    sides: Dict[str, str] = {}
    no_of: Dict[str, int] = {}
    eta: Dict[str, int] = {}
    rho_raw: Dict[str, Tuple[int, List[str]]] = {}
    R: Dict[str, List[Tuple[int, int]]] = {}
    Rp: Dict[str, List[Tuple[int, int]]] = {}
    enum: Dict[str, Tuple[str, ...]] = {}
    for no, toks in _lines(text):
        head = toks[0]
        if head == "nlc" and len(toks) in (4, 6) and toks[2] == "q":
            q = _int(toks[3], no, source)
            if len(toks) == 6:
                if toks[4] != "t":
                    raise ParseError("expected 't <t>' in header", no, source)
                t = _int(toks[5], no, source)
        elif head == "node" and len(toks) in (4, 6) and toks[2] == "parent":
            no_of[toks[1]] = no
            nodes.append((toks[1], None if toks[3] == "none" else toks[3]))
            if len(toks) == 6:
                if toks[4] != "side" or toks[5] not in ("left", "right"):
                    raise ParseError("expected 'side left|right'", no, source)
                sides[toks[1]] = toks[5]
        elif head == "eta" and len(toks) == 3:
            eta[toks[1]] = _int(toks[2], no, source)
        elif head == "rho" and len(toks) >= 3:
            rho_raw[toks[2]] = (no, toks[3:])
        elif head in ("R", "Rp") and len(toks) >= 2:
            if toks[2:] == ["tw"]:
                if t is None:
                    raise ParseError("'tw' relations need 't' in the header", no, source)
                rel = tw_status_relations(t)[0 if head == "R" else 1]
            else:
                rel = _parse_pairs(toks[2:], no, source)
            (R if head == "R" else Rp)[toks[1]] = rel
        elif head == "enum" and len(toks) >= 3:
            enum[toks[1]] = tuple(toks[2:])
        else:
            raise ParseError(f"unrecognized line {' '.join(toks)!r}", no, source)
    if q is None:
        raise ParseError("missing 'nlc <name> q <q>' header", None, source)
    # order children by their side tags
    nodes.sort(key=lambda it: 0 if sides.get(it[0], "left") == "left" else 1)
    tree = _build_tree(nodes, no_of, source)
    rho = {}
    for v in tree.preorder()[1:]:
        if v not in rho_raw:
            raise ParseError(f"edge into {v} has no rho line", no_of[v], source)
        no, body = rho_raw[v]
        if t is not None:
            if "le" not in body or body[0] != "ge":
                raise ParseError("relation rho needs 'ge ... le ...'", no, source)
            cut = body.index("le")
            ge = rel_from_pairs(_parse_pairs(body[1:cut], no, source), t)
            le = rel_from_pairs(_parse_pairs(body[cut + 1:], no, source), t)
            rho[v] = RelationPairRelabeling(t, ge, le)
        else:
            table = [None] * q
            for tok in body:
                g, colon, h = tok.partition(":")
                if not colon:
                    raise ParseError(f"expected g:h, got {tok!r}", no, source)
                gi, hi = _int(g, no, source), _int(h, no, source)
                if not (0 <= gi < q and 0 <= hi < q):
                    raise ParseError(f"label outside 0..{q - 1}", no, source)
                table[gi] = hi
            if None in table:
                raise ParseError("relabeling table is not total", no, source)
            rho[v] = FunctionRelabeling(tuple(table))
    for x in tree.leaves():
        if x not in eta:
            raise ParseError(f"leaf {x} has no eta line", no_of[x], source)
    src = None
    if enum:
        bags = {u: frozenset(e) for u, e in enum.items()}
        src = BinaryLeafDecomposition(tree, bags, enum, t)
    try:
        return NLCDecomposition(tree, q, eta, rho, {u: frozenset(v) for u, v in R.items()},
                                {u: frozenset(v) for u, v in Rp.items()}, t=t, source=src)
    except NlcDimError as exc:
        raise ParseError(str(exc), None, source) from None


# ---------------------------------------------------------------------------
# splits

def write_split(s: Split, tree: Optional[RootedTree] = None) -> str:
    out = [f"split order {s.order}"]
    keys = [u for u in tree.preorder() if u in s.assignment] if tree else sorted(s.assignment)
    out += [f"s {u} {s[u]}" for u in keys]
    return "\n".join(out) + "\n"


def read_split(text: str, source=None) -> Split:
    order = None
    assignment: Dict[str, int] = {}
    for no, toks in _lines(text):
        if toks[:2] == ["split", "order"] and len(toks) == 3:
            order = _int(toks[2], no, source)
        elif toks[0] == "s" and len(toks) == 3:
            h = _int(toks[2], no, source)
            if order is not None and not 1 <= h <= order:
                raise ParseError(f"level {h} outside 1..{order}", no, source)
            assignment[toks[1]] = h
        else:
            raise ParseError(f"unrecognized line {' '.join(toks)!r}", no, source)
    if order is None:
        raise ParseError("missing 'split order <p>' header", None, source)
    return Split(assignment, order)


# ---------------------------------------------------------------------------
# witnesses

@dataclass(frozen=True)
class WitnessRecord:
    kind: str  # "standard" or "kelly"
    k: int
    h: int
    chain: Tuple[str, ...]
    lists: Dict[str, Tuple[str, ...]] = field(default_factory=dict)
    steps: Tuple[Tuple[int, int], ...] = ()

    def get(self, key: str) -> Tuple[str, ...]:
        return self.lists.get(key, ())


_WITNESS_KEYS = {"standard": ("x", "y"), "kelly": ("a", "b", "c", "d", "r", "s")}


def standard_record(w) -> WitnessRecord:
    return WitnessRecord("standard", w.k, w.chain.h, tuple(w.chain.nodes),
                         {"x": tuple(w.xs), "y": tuple(w.ys)},
                         tuple((st.alpha, st.beta) for st in w.steps))


def kelly_record(w, h: int) -> WitnessRecord:
    return WitnessRecord("kelly", w.k, h, tuple(w.chain),
                         {"a": w.a, "b": w.b, "c": w.c, "d": w.d,
                          "r": tuple(map(str, w.r)), "s": tuple(map(str, w.s))})


def write_witness(w: WitnessRecord) -> str:
    out = [f"witness {w.kind} k {w.k} h {w.h}", "chain " + " ".join(w.chain)]
    for key in _WITNESS_KEYS[w.kind]:
        out.append(f"{key} " + " ".join(w.get(key)))
    for j, (a, b) in enumerate(w.steps, 1):
        out.append(f"step {j} {a} {b}")
    return "\n".join(line.rstrip() for line in out) + "\n"


def read_witness(text: str, source=None) -> WitnessRecord:
    kind = None
    k = h = 0
    chain: Tuple[str, ...] = ()
    lists: Dict[str, Tuple[str, ...]] = {}
    steps: List[Tuple[int, int]] = []
    for no, toks in _lines(text):
        head = toks[0]
        if head == "witness" and len(toks) == 6 and toks[2] == "k" and toks[4] == "h":
            kind = toks[1]
            if kind not in _WITNESS_KEYS:
                raise ParseError(f"unknown witness kind {kind}", no, source)
            k, h = _int(toks[3], no, source), _int(toks[5], no, source)
        elif head == "chain":
            chain = tuple(toks[1:])
        elif head == "step" and len(toks) == 4:
            if _int(toks[1], no, source) != len(steps) + 1:
                raise ParseError("steps out of order", no, source)
            steps.append((_int(toks[2], no, source), _int(toks[3], no, source)))
        elif kind is not None and head in _WITNESS_KEYS[kind]:
            lists[head] = tuple(toks[1:])
        else:
            raise ParseError(f"unrecognized line {' '.join(toks)!r}", no, source)
    if kind is None:
        raise ParseError("missing 'witness <kind> k <k> h <h>' header", None, source)
    return WitnessRecord(kind, k, h, chain, lists, tuple(steps))


# ---------------------------------------------------------------------------
# Boolean realizers

def _color_text(c) -> str:
    if isinstance(c, int):
        return f"i{c}"
    if isinstance(c, frozenset):
        return "r" + ",".join(f"{a}.{b}" for a, b in sorted(c))
    raise ValueError(f"cannot serialize color {c!r}")


def _color_parse(tok: str, no: int, source):
    if tok.startswith("i"):
        return _int(tok[1:], no, source)
    if tok.startswith("r"):
        body = tok[1:]
        return frozenset(_parse_pairs(body.split(",") if body else [], no, source))
    raise ParseError(f"bad color token {tok!r}", no, source)


def _palette_text(p: Palette) -> str:
    if isinstance(p, ListPalette):
        return f"list {len(p.colors)} " + " ".join(_color_text(c) for c in p.colors)
    return f"{p.kind} {p.q if p.kind == 'functions' else p.t}"


def _palette_parse(toks: Sequence[str], no: int, source) -> Palette:
    kind = toks[0]
    if kind == "list":
        cnt = _int(toks[1], no, source)
        cols = tuple(_color_parse(tok, no, source) for tok in toks[2:])
        if len(cols) != cnt:
            raise ParseError(f"palette lists {len(cols)} colors, header says {cnt}", no, source)
        return ListPalette(cols)
    if kind in ("functions", "relations") and len(toks) == 2:
        return SemigroupRef(kind, _int(toks[1], no, source)).palette()
    raise ParseError(f"bad palette {' '.join(toks)!r}", no, source)


def _agg_text(tag: str, a: AggBlock) -> str:
    return (f"agg {tag} semigroup {a.semigroup.kind} {a.semigroup.n} order {a.order} "
            f"palette {_palette_text(a.palette)}")


def write_realizer(r: BooleanRealizer) -> str:
    out = [f"orders {r.b}"]
    out += ["o " + " ".join(o) for o in r.orders]
    dec = r.decoder
    out.append(f"decoder {dec.route}")
    out.append("elements " + " ".join(r.elements))
    if not isinstance(dec, TrivialDecoder):
        out.append(f"dir-rule {dir_rule_hex()}")
    if isinstance(dec, NlcDecoder):
        out.append(_agg_text("rho", dec.agg))
        out.append(f"block rel palette {_palette_text(dec.rel.palette)}")
        out.append(f"block init palette {_palette_text(dec.init.palette)}")
        out.append("predicate status-membership")
    elif isinstance(dec, TreedecDecoder):
        out.append(_agg_text("ge", dec.ge))
        out.append(_agg_text("le", dec.le))
        out.append(f"predicate bag-witness {dec.t}")
    out.append("end")
    return "\n".join(out) + "\n"


def read_realizer(text: str, source=None) -> BooleanRealizer:
    b = None
    orders: List[Tuple[str, ...]] = []
    route = None
    elements: Tuple[str, ...] = ()
    aggs: Dict[str, AggBlock] = {}
    blocks: Dict[str, DirBlock] = {}
    pred: Optional[List[str]] = None
    ended = False
    for no, toks in _lines(text):
        head = toks[0]
        if ended:
            raise ParseError("content after 'end'", no, source)
        if head == "orders" and len(toks) == 2:
            b = _int(toks[1], no, source)
        elif head == "o":
            orders.append(tuple(toks[1:]))
        elif head == "decoder" and len(toks) == 2:
            route = toks[1]
        elif head == "elements":
            elements = tuple(toks[1:])
        elif head == "dir-rule" and len(toks) == 2:
            if toks[1] != dir_rule_hex():
                raise ParseError("unsupported dir-rule table", no, source)
        elif head == "agg" and len(toks) >= 9 and toks[2] == "semigroup" and toks[5] == "order" \
                and toks[7] == "palette":
            sg = SemigroupRef(toks[3], _int(toks[4], no, source))
            aggs[toks[1]] = AggBlock(sg, _int(toks[6], no, source),
                                     _palette_parse(toks[8:], no, source))
        elif head == "block" and len(toks) >= 4 and toks[2] == "palette":
            blocks[toks[1]] = DirBlock(_palette_parse(toks[3:], no, source))
        elif head == "predicate":
            pred = toks[1:]
        elif head == "end":
            ended = True
        else:
            raise ParseError(f"unrecognized line {' '.join(toks)!r}", no, source)
    if b is None or len(orders) != b:
        raise ParseError(f"header announces {b} orders, found {len(orders)}", None, source)
    if not ended:
        raise ParseError("missing 'end' line (truncated file?)", None, source)
    if route == "trivial":
        dec = TrivialDecoder()
    elif route == "nlc":
        if "rho" not in aggs or not {"rel", "init"} <= set(blocks) or pred != ["status-membership"]:
            raise ParseError("nlc decoder needs agg rho, blocks rel/init and its predicate",
                             None, source)
        dec = NlcDecoder(aggs["rho"], blocks["rel"], blocks["init"])
    elif route == "treedec":
        if not {"ge", "le"} <= set(aggs) or not pred or pred[0] != "bag-witness" or len(pred) != 2:
            raise ParseError("treedec decoder needs agg ge/le and its predicate", None, source)
        dec = TreedecDecoder(aggs["ge"], aggs["le"], _int(pred[1], None, source))
    else:
        raise ParseError(f"unknown decoder route {route!r}", None, source)
    return BooleanRealizer(elements, tuple(orders), dec)
