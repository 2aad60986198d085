"""Standard and Kelly examples from an h-chain and an h-cross.

Both extractions assume the split is forward Ramseyan for the full cross
labeling; when that fails the pair search comes up empty and
:class:`WitnessNotFound` is raised.  Every witness is re-checked by the
poset validators before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, List, Optional, Tuple

from .errors import BadParameter, WitnessNotFound
from .nlc import NLCDecomposition, RelationPairRelabeling
from .poset import Poset, check_kelly_conditions, check_standard_subposet
from .semigroup import SemigroupLabeledTree, coimage
from .split import HChain, HCross, Split, e_h, eh_classes


@dataclass(frozen=True)
class StepData:
    alpha: int
    beta: int
    A: int  # bitmask of labels, equals L>=(y_j, u_j)
    B: int  # bitmask of labels, equals L<=(x_j, u_j)
    tau: Tuple[int, ...]


@dataclass(frozen=True)
class StandardExampleWitness:
    k: int
    xs: Tuple[str, ...]
    ys: Tuple[str, ...]
    chain: HChain
    class_a: Tuple[int, ...]
    class_b: Tuple[int, ...]
    steps: Tuple[StepData, ...]


@dataclass(frozen=True)
class KellyWitness:
    k: int
    a: Tuple[str, ...]
    b: Tuple[str, ...]
    c: Tuple[str, ...]
    d: Tuple[str, ...]
    r: Tuple[int, ...]  # 1-based bag positions
    s: Tuple[int, ...]
    chain: Tuple[Hashable, ...]


def _mask(labels) -> int:
    out = 0
    for g in labels:
        out |= 1 << g
    return out


def _comparable_fn(n: NLCDecomposition, poset: Optional[Poset]):
    if poset is not None:
        return poset.comparable
    return lambda x, y: n.decode(x, y) or n.decode(y, x)


def _standard_pairs(n: NLCDecomposition, lt: Optional[SemigroupLabeledTree], s: Split,
                    chain: HChain, cross: HCross, comparable):
    if chain.h != cross.h:
        raise BadParameter("chain and cross must share the level")
    k = chain.length
    if k < 3:
        raise BadParameter("extraction needs a chain of length at least 3")
    tree = n.tree
    h = chain.h
    E = e_h(n, s, h)
    part = eh_classes(n.q, E, h)
    u, v = cross.u, cross.v
    class_a = part.class_of(n.label(u, cross.x))
    class_b = part.class_of(n.label(u, cross.y))
    A, B = _mask(class_a), _mask(class_b)
    sigma = cross.sigma
    Aj = coimage(n.l_sets(cross.y, v).ge, sigma)
    Bj = coimage(n.l_sets(cross.x, v).le, sigma)
    nodes = chain.nodes
    xs: List[str] = []
    ys: List[str] = []
    steps: List[StepData] = []
    for j in range(1, k + 1):
        top, bot = nodes[j - 1], nodes[j]
        tau = tuple(n.rho_path(top, bot).table)
        alphas = {tau[g] for g in class_a}
        betas = {tau[g] for g in class_b}
        if len(alphas) != 1 or len(betas) != 1:
            raise WitnessNotFound("relabeling does not collapse the label classes")
        alpha, beta = alphas.pop(), betas.pop()
        if j > 1:
            Aj = coimage(Aj, tau)
            Bj = coimage(Bj, tau)
        if A & ~Aj or B & ~Bj:
            raise WitnessNotFound(f"class containment fails at step {j}")
        if lt is not None:
            psi = lt.lam(top, bot).psi
            if (alpha, beta, Bj, Aj) not in psi:
                raise WitnessNotFound(f"step {j} quadruple missing from the path label")
        inside = set(tree.leaves_below(bot))
        outside = sorted(x for x in tree.leaves_below(top) if x not in inside)
        found = None
        for x in outside:
            if n.label(top, x) != alpha or n.l_sets(x, bot).le != Bj:
                continue
            for y in outside:
                if x == y or n.label(top, y) != beta or n.l_sets(y, bot).ge != Aj:
                    continue
                if comparable(x, y):
                    continue
                found = (x, y)
                break
            if found:
                break
        if found is None:
            raise WitnessNotFound(f"no pair realizes step {j}")
        xs.append(found[0])
        ys.append(found[1])
        steps.append(StepData(alpha, beta, Aj, Bj, tau))
    return xs, ys, class_a, class_b, steps


def extract_standard(n: NLCDecomposition, lt: Optional[SemigroupLabeledTree], s: Split,
                     chain: HChain, cross: HCross, poset: Optional[Poset] = None
                     ) -> StandardExampleWitness:
    comparable = _comparable_fn(n, poset)
    xs, ys, ca, cb, steps = _standard_pairs(n, lt, s, chain, cross, comparable)
    wit = StandardExampleWitness(len(xs), tuple(xs), tuple(ys), chain, ca, cb, tuple(steps))
    check_on = poset
    if check_on is None:
        from .nlc import decoded_poset
        check_on = decoded_poset(n)
    if check_on is None or not check_standard_subposet(check_on, xs, ys):
        raise WitnessNotFound("extracted pairs do not induce a standard example")
    return wit


def extract_kelly(n: NLCDecomposition, lt: Optional[SemigroupLabeledTree], s: Split,
                  chain: HChain, cross: HCross, poset: Poset) -> KellyWitness:
    """Kelly example for decompositions compiled from a tree decomposition."""
    if n.kind != "relation" or n.source is None:
        raise BadParameter("Kelly extraction needs a decomposition built from bags")
    t = n.t
    b = n.source
    xs, ys, _, _, steps = _standard_pairs(n, lt, s, chain, cross, poset.comparable)
    k = len(xs)
    nodes = chain.nodes
    le_bits = lambda g: [i for i in range(t) if g >> (t + i) & 1]  # noqa: E731
    ge_bits = lambda g: [i for i in range(t) if g >> i & 1]  # noqa: E731
    rs: List[int] = []
    ss: List[int] = []
    for j in range(1, k):
        uj = nodes[j]
        beta_next = steps[j].beta
        alpha_next = steps[j].alpha
        if j == 1:
            r_opts = [i for i in le_bits(beta_next) if poset.leq(xs[0], b.z(uj, i + 1))]
            s_opts = [i for i in ge_bits(alpha_next) if poset.leq(b.z(uj, i + 1), ys[0])]
        else:
            tau = n.rho_path(nodes[j - 1], uj)
            if not isinstance(tau, RelationPairRelabeling):
                raise BadParameter("relabelings must be relation pairs")
            r_prev, s_prev = rs[-1], ss[-1]
            r_opts = [i for i in le_bits(beta_next) if tau.le >> (r_prev * t + i) & 1]
            s_opts = [i for i in ge_bits(alpha_next) if tau.ge >> (s_prev * t + i) & 1]
        if not r_opts or not s_opts:
            raise WitnessNotFound(f"no bag index at step {j}")
        rs.append(r_opts[0])
        ss.append(s_opts[0])
    c = tuple(b.z(nodes[j], rs[j - 1] + 1) for j in range(1, k))
    d = tuple(b.z(nodes[j], ss[j - 1] + 1) for j in range(1, k))
    wit = KellyWitness(k, tuple(xs), tuple(ys), c, d, tuple(r + 1 for r in rs),
                       tuple(x + 1 for x in ss), tuple(nodes))
    if not check_kelly_conditions(poset, xs, ys, list(c), list(d)):
        raise WitnessNotFound("extracted elements fail the Kelly conditions")
    return wit


def l_set_comparabilities_hold(n: NLCDecomposition, wit: StandardExampleWitness,
                               poset: Poset) -> bool:
    """Re-derive x_j <= y_i and x_i <= y_j (i < j) through L-set membership."""
    nodes = wit.chain.nodes
    for i in range(1, wit.k + 1):
        ui = nodes[i]
        lx = n.l_sets(wit.xs[i - 1], ui)
        ly = n.l_sets(wit.ys[i - 1], ui)
        for j in range(i + 1, wit.k + 1):
            xj, yj = wit.xs[j - 1], wit.ys[j - 1]
            via_ly = bool(ly.ge >> n.label(ui, xj) & 1)
            via_lx = bool(lx.le >> n.label(ui, yj) & 1)
            if via_ly != poset.leq(xj, wit.ys[i - 1]) or not via_ly:
                return False
            if via_lx != poset.leq(wit.xs[i - 1], yj) or not via_lx:
                return False
    return True
