from __future__ import annotations

import pytest

from nlcdim.dimbound import (INNER, OUTER, bounded_dimension_coloring, d_bound, d_bounds,
                             has_monochromatic_typed_cycle, subtree_clusters)
from nlcdim.errors import BadParameter
from nlcdim.generators import caterpillar_nlc, corpus, random_nlc
from nlcdim.nlc import decoded_poset, nlc_from_treedec
from nlcdim.poset import (brute_force_dimension, certify_coloring, color_count,
                          dimension_coloring)
from nlcdim.semigroup import cross_labeling
from nlcdim.split import (colcombet_split, h_subtrees, is_h_chain, is_h_cross,
                          trivial_split)
from nlcdim.treedec import exact_tree_decomposition, regularize


def test_d_bound_values():
    assert d_bound(1, 1, 0) == 2
    assert d_bound(1, 1, 1) == 26
    assert d_bounds(1, 1, 1) == [(2, 2), (26, 26)]
    assert d_bound(2, 3, 1) == 4 * max(1 + 2 + 4 + 8, 1 + 3 * 8 * 4)


def test_d_bound_monotone():
    for q in (1, 2, 3):
        vals = [d_bound(q, 2, p) for p in range(4)]
        assert vals == sorted(vals)


def test_d_bound_rejects_bad_args():
    with pytest.raises(BadParameter):
        d_bound(0, 1, 1)


def _compiled(p):
    return nlc_from_treedec(p, regularize(exact_tree_decomposition(p, 4), p))


@pytest.mark.parametrize("name,p", [item for item in corpus(12) if len(item[1]) >= 2])
def test_coloring_branch_certifies(name, p):
    n = _compiled(p)
    s = trivial_split(n.tree)
    out = bounded_dimension_coloring(n, s, 3, poset=p)
    assert out.certified
    assert certify_coloring(p, out.coloring)
    assert color_count(out.coloring) == out.colors_used <= out.bound
    assert out.bound == d_bound(n.q, 3, s.order)
    if len(p) <= 10 and p.incomparable_pairs():
        assert out.colors_used >= brute_force_dimension(p)


def test_random_decompositions_certify():
    for seed in range(15):
        n = random_nlc(8, 2, seed)
        p = decoded_poset(n)
        s = colcombet_split(cross_labeling(n))
        out = bounded_dimension_coloring(n, s, 2)
        if out.certified:
            assert certify_coloring(p, out.coloring) and out.colors_used <= out.bound
        else:
            h, ch, cr = out.witness
            assert is_h_chain(n.tree, s, ch) and is_h_cross(n, s, cr, p.comparable)


@pytest.mark.parametrize("ell", [1, 2, 3])
def test_witness_branch_on_caterpillar(ell):
    n = caterpillar_nlc(9)
    p = decoded_poset(n)
    s = colcombet_split(cross_labeling(n))
    out = bounded_dimension_coloring(n, s, ell, poset=p)
    assert not out.certified
    h, ch, cr = out.witness
    assert ch.length == ell and ch.h == h == cr.h
    assert is_h_chain(n.tree, s, ch) and is_h_cross(n, s, cr, p.comparable)


def test_ell_must_be_positive():
    n = caterpillar_nlc(3)
    with pytest.raises(BadParameter):
        bounded_dimension_coloring(n, trivial_split(n.tree), 0)


def test_typed_cycle_detector_on_merged_colors():
    n = caterpillar_nlc(4)
    p = decoded_poset(n)
    top = h_subtrees(n.tree, trivial_split(n.tree), 0)[0]
    cluster = subtree_clusters(n.tree, top)
    # one color for all pairs of S_4 holds an alternating cycle across clusters
    single = {pr: 0 for pr in p.incomparable_pairs()}
    assert has_monochromatic_typed_cycle(p, cluster, single, INNER)
    optimal = dimension_coloring(p, 4)
    assert not has_monochromatic_typed_cycle(p, cluster, optimal, INNER)
    assert not has_monochromatic_typed_cycle(p, cluster, optimal, OUTER)
