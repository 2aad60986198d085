from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from nlcdim.errors import BadParameter, NotDecent
from nlcdim.generators import (caterpillar_nlc, caterpillar_parity_split, random_labeled_tree,
                               random_nlc, random_semigroup, random_tree)
from nlcdim.nlc import FunctionRelabeling, NLCDecomposition
from nlcdim.semigroup import (FiniteSemigroup, SemigroupLabeledTree, compose_functions,
                              cross_labeling, relabeling_labeling)
from nlcdim.split import (Split, check_fact_eh, colcombet_split, compact_split, e_h,
                          eh_classes, find_h_chain, find_h_cross, h_neighbors, h_subtrees,
                          is_forward_ramseyan, is_h_chain, is_h_cross, trivial_split)
from nlcdim.trees import RootedTree


def neighbor_pairs_naive(tree, s):
    """(u, v) with u a proper ancestor of v, same level, nothing higher in between."""
    inner = set(tree.inner_nodes())
    out = {}
    for v in inner:
        path = [v]
        w = tree.parent(v)
        while w is not None and w in inner:
            path.append(w)
            if s[w] == s[v] and all(s[z] <= s[v] for z in path[1:-1]):
                out.setdefault(s[v], set()).add((w, v))
            w = tree.parent(w)
    return out


def forward_ramseyan_naive(lt, s):
    for pairs in neighbor_pairs_naive(lt.tree, s).values():
        for a in pairs:
            for b in pairs:
                la = lt.lam(*a)
                if lt.mul(la, lt.lam(*b)) != la:
                    return False
    return True


def random_split(tree, rng, order):
    return Split({u: rng.randint(1, order) for u in tree.inner_nodes()}, order)


labeled = st.builds(lambda seed, inner: (seed, inner), st.integers(0, 10 ** 6), st.integers(0, 10))


def make_labeled(seed, inner, max_size=3):
    rng = random.Random(seed)
    sg = random_semigroup(max_size, rng)
    return sg, random_labeled_tree(sg, inner, rng), rng


@given(labeled)
def test_checker_agrees_with_naive_version(args):
    sg, lt, rng = make_labeled(*args)
    for order in (1, 2, 3):
        s = random_split(lt.tree, rng, order)
        assert is_forward_ramseyan(lt, s)[0] == forward_ramseyan_naive(lt, s)


@given(labeled)
def test_neighbors_match_naive_definition(args):
    _, lt, rng = make_labeled(*args)
    s = random_split(lt.tree, rng, 3)
    naive = neighbor_pairs_naive(lt.tree, s)
    for h in (1, 2, 3):
        assert set(h_neighbors(lt.tree, s, h)) == naive.get(h, set())


@given(labeled)
def test_colcombet_split_properties(args):
    sg, lt, _ = make_labeled(*args)
    s = colcombet_split(lt)
    assert s.is_valid_for(lt.tree)
    assert s.order <= max(sg.size, 1)
    assert forward_ramseyan_naive(lt, s)


@given(labeled)
def test_trivial_split_has_no_neighbors(args):
    _, lt, _ = make_labeled(*args)
    s = trivial_split(lt.tree)
    assert s.is_valid_for(lt.tree)
    assert all(not h_neighbors(lt.tree, s, h) for h in range(1, s.order + 1))
    assert is_forward_ramseyan(lt, s)[0]


@given(labeled)
def test_h_subtrees_partition_nodes(args):
    _, lt, rng = make_labeled(*args)
    s = random_split(lt.tree, rng, 3)
    for h in range(0, 4):
        subs = h_subtrees(lt.tree, s, h)
        inner = [u for sub in subs for u in sub.inner()]
        assert sorted(inner, key=repr) == sorted(
            [u for u in lt.tree.inner_nodes() if s[u] <= h], key=repr)


def test_h_subtrees_level_range():
    tree = random_tree(3, random.Random(0))
    with pytest.raises(BadParameter):
        h_subtrees(tree, trivial_split(tree), 99)


def test_non_idempotent_chain_is_not_forward_ramseyan():
    # Z_2 on a path: lambda(u, v) * lambda(u, v) is the identity, not lambda(u, v)
    sg = FiniteSemigroup.from_table([[0, 1], [1, 0]])
    tree = RootedTree("r", {"r": ["u1", "x0"], "u1": ["u2", "x1"], "u2": ["x2", "x3"]})
    lt = SemigroupLabeledTree(tree, {v: 1 for v in tree.nodes if v != "r"}, sg.mul, sg)
    flat = Split({"u1": 1, "u2": 1}, 1)
    ok, why = is_forward_ramseyan(lt, flat)
    assert not ok and why[0] == 1
    assert is_forward_ramseyan(lt, colcombet_split(lt))[0]


def test_compact_split_keeps_relative_levels():
    s = compact_split(Split({"a": 2, "b": 5, "c": 2}, 6))
    assert s.order == 2 and s["a"] == s["c"] == 1 and s["b"] == 2


# --- E_h, chains and crosses -------------------------------------------------

def test_caterpillar_parity_split_is_decent():
    n = caterpillar_nlc(9)
    s = caterpillar_parity_split(n)
    for h in range(1, s.order + 1):
        E = e_h(n, s, h)
        assert check_fact_eh(n.q, E, eh_classes(n.q, E, h))
    assert is_forward_ramseyan(cross_labeling(n), s)[0]


@given(st.integers(4, 8), st.integers(1, 3), st.integers(0, 10 ** 4))
def test_fact_eh_on_relabeling_splits(size, q, seed):
    n = random_nlc(size, q, seed)
    s = colcombet_split(relabeling_labeling(n))
    for h in range(1, s.order + 1):
        E = e_h(n, s, h)
        assert check_fact_eh(n.q, E, eh_classes(n.q, E, h))


def test_not_decent_raised():
    n = random_nlc(5, 2, 0)
    swap = (1, 0)
    rho = {v: FunctionRelabeling(swap) for v in n.rho}
    m = NLCDecomposition(n.tree, 2, n.eta, rho, n.R, n.Rp)
    inner = m.tree.inner_nodes()
    pairs = [(u, v) for u in inner for v in inner if m.tree.parent(v) == u]
    if not pairs:
        pytest.skip("tree has no inner parent-child pair")
    s = Split({u: 1 for u in inner}, 1)
    # a pair of neighbors one edge apart carries the swap, which does not absorb itself
    with pytest.raises(NotDecent):
        e_h(m, s, 1)


def test_chain_and_cross_on_caterpillar():
    n = caterpillar_nlc(9)
    s = caterpillar_parity_split(n)
    comparable = lambda x, y: n.decode(x, y) or n.decode(y, x)  # noqa: E731
    found = False
    for h in range(1, s.order + 1):
        ch = find_h_chain(n.tree, s, h, 3)
        cr = find_h_cross(n, s, h, comparable)
        if ch is not None:
            assert is_h_chain(n.tree, s, ch) and ch.length == 3
        if cr is not None:
            assert is_h_cross(n, s, cr, comparable)
        found |= ch is not None and cr is not None
    assert found


def test_random_split_chains_validate():
    rng = random.Random(3)
    for seed in range(20):
        n = random_nlc(8, 2, seed)
        s = random_split(n.tree, rng, 2)
        for h in (1, 2):
            ch = find_h_chain(n.tree, s, h, 1)
            if ch is not None:
                assert is_h_chain(n.tree, s, ch)


def test_compose_functions_order():
    # apply g first, then f
    assert compose_functions((1, 1, 2), (2, 0, 1)) == (2, 1, 1)
