from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from nlcdim.errors import BadParameter
from nlcdim.generators import caterpillar_nlc, corpus, random_nlc, random_poset
from nlcdim.nlc import (FunctionRelabeling, RelationPairRelabeling, TwLabel,
                        as_function_decomposition, check_composition_law, check_l_sets,
                        decoded_poset, l_sets, nlc_from_treedec, rel_compose, rel_from_pairs,
                        rel_pairs, tw_l_sets_expected, validate)
from nlcdim.poset import standard_example
from nlcdim.treedec import exact_tree_decomposition, regularize
from nlcdim.trees import RootedTree


def label_by_walk(n, u, x):
    """eta(u, x) by applying edge tables from x up to u."""
    g = n.eta[x]
    v = x
    while v != u:
        g = n.rho[v].table[g]
        v = n.tree.parent(v)
    return g


def decode_by_walk(n, x, y):
    tree = n.tree
    u = x
    while y not in tree.leaves_below(u):
        u = tree.parent(u)
    left, right = tree.children(u)
    gx, gy = label_by_walk(n, u, x), label_by_walk(n, u, y)
    if x in tree.leaves_below(left):
        return (gx, gy) in n.R[u]
    return (gy, gx) in n.Rp[u]


def compiled(p):
    return nlc_from_treedec(p, regularize(exact_tree_decomposition(p, 4), p))


posets = st.builds(random_poset, st.integers(2, 9), st.integers(0, 2), st.integers(0, 10 ** 6))


@given(posets)
def test_compiled_decomposition_decodes_poset(p):
    n = compiled(p)
    t = n.t
    assert n.q == 4 ** t
    assert validate(n, p)
    for x in p.elements:
        for y in p.elements:
            if x != y:
                assert decode_by_walk(n, x, y) == p.lt(x, y)


@given(posets)
def test_l_sets_and_closed_form(p):
    n = compiled(p)
    assert check_l_sets(n, p)
    for v in n.tree.nodes:
        for x in p.elements:
            if not n.tree.is_ancestor(v, x):
                assert l_sets(n, x, v) == tw_l_sets_expected(p, n, x, v)


@given(posets)
def test_composition_law(p):
    assert check_composition_law(compiled(p))


@given(st.integers(3, 9), st.integers(1, 3), st.integers(0, 10 ** 5))
def test_random_decomposition_walk_decoder(size, q, seed):
    n = random_nlc(size, q, seed)
    p = decoded_poset(n)
    assert p is not None and p.is_valid()
    assert validate(n, p) and check_l_sets(n, p) and check_composition_law(n)
    for x in p.elements:
        for y in p.elements:
            if x != y:
                assert n.decode(x, y) == decode_by_walk(n, x, y)


def test_function_form_decodes_the_same():
    p = standard_example(3)
    n = compiled(p)
    f = as_function_decomposition(n)
    assert f.kind == "function" and validate(f, p)


def test_caterpillar_decodes_standard_example():
    from nlcdim.poset import is_isomorphic
    for k in (3, 5):
        assert is_isomorphic(decoded_poset(caterpillar_nlc(k)), standard_example(k))
        assert is_isomorphic(decoded_poset(caterpillar_nlc(k, noise=True)).subposet(
            [f"{c}{i}" for c in "ab" for i in range(1, k + 1)]), standard_example(k))


def test_mixed_relabelings_rejected():
    tree = RootedTree("r", {"r": ["x", "y"]})
    with pytest.raises(BadParameter):
        from nlcdim.nlc import NLCDecomposition
        NLCDecomposition(tree, 4, {"x": 0, "y": 0},
                         {"x": FunctionRelabeling((0, 1, 2, 3)),
                          "y": RelationPairRelabeling.identity(1)}, {}, {})


def test_relation_composition_small():
    t = 2
    r1 = rel_from_pairs([(0, 1)], t)
    r2 = rel_from_pairs([(1, 0), (1, 1)], t)
    assert rel_pairs(rel_compose(r1, r2, t), t) == [(0, 0), (0, 1)]


def test_tw_label_roundtrip():
    for g in range(16):
        assert TwLabel.from_index(g, 2).index(2) == g


@pytest.mark.parametrize("name,p", [item for item in corpus() if len(item[1]) >= 2])
def test_corpus_compiles(name, p):
    n = compiled(p)
    assert validate(n, p) and check_l_sets(n, p)
