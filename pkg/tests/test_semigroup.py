from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, strategies as st

from nlcdim.errors import BadParameter, TooLarge
from nlcdim.generators import caterpillar_nlc, random_labeled_tree, random_nlc, random_semigroup
from nlcdim.nlc import decoded_poset
from nlcdim.semigroup import (FiniteSemigroup, check_cross_law, compose_functions,
                              cross_labeling, cross_product, cross_semigroup_order,
                              direct_cross_element, relabeling_labeling, relabeling_semigroup,
                              relation_semigroup)


def test_small_semigroup_sizes():
    assert relabeling_semigroup(2).size == 4
    assert relabeling_semigroup(3).size == 27
    assert relation_semigroup(1).size == 2
    assert relation_semigroup(2).size == 16


def test_associativity_of_builtins():
    assert relabeling_semigroup(3).is_associative()
    assert relation_semigroup(2).is_associative()


def test_from_table_checks_shape_and_law():
    sg = FiniteSemigroup.from_table([[0, 0], [0, 1]])
    assert sg.is_associative() and sg.idempotents() == [0, 1]
    with pytest.raises(BadParameter):
        FiniteSemigroup.from_table([[0, 1]])
    # x*y = y+1 mod 2 is not associative
    assert not FiniteSemigroup.from_table([[1, 0], [1, 0]]).is_associative()


def test_generated_guard():
    gens = [(1, 2, 0, 3, 4), (1, 0, 2, 3, 4), (0, 0, 2, 3, 4)]
    with pytest.raises(TooLarge):
        FiniteSemigroup.generated(gens, compose_functions, guard=10)


def test_cyclic_generated():
    sg = FiniteSemigroup.generated([(1, 2, 0)], compose_functions)
    assert sg.size == 3 and sg.is_closed()


def test_cross_order_constant():
    assert cross_semigroup_order(1) == 16
    assert cross_semigroup_order(2) == 2 ** 5 * 256


@given(st.integers(0, 10 ** 6), st.integers(1, 8))
def test_path_law_on_random_labeled_trees(seed, inner):
    rng = random.Random(seed)
    sg = random_semigroup(6, rng)
    lt = random_labeled_tree(sg, inner, rng)
    assert lt.check_path_law()
    assert set(lt.values()) <= set(sg.elements)


@given(st.integers(3, 8), st.integers(1, 3), st.integers(0, 10 ** 5))
def test_cross_law_on_random_decompositions(size, q, seed):
    n = random_nlc(size, q, seed)
    assert check_cross_law(n, cross_labeling(n))


def test_cross_law_on_caterpillars():
    for n in (caterpillar_nlc(5), caterpillar_nlc(4, noise=True)):
        assert check_cross_law(n, cross_labeling(n))


def test_cross_product_is_associative_on_occurring_elements():
    n = random_nlc(7, 2, 11)
    lt = cross_labeling(n)
    vals = lt.values()[:8]
    for a, b, c in itertools.product(vals, repeat=3):
        assert cross_product(cross_product(a, b), c) == cross_product(a, cross_product(b, c))


def test_direct_element_respects_given_comparability():
    n = caterpillar_nlc(4)
    p = decoded_poset(n)
    u, v = "w1", "w2"
    assert direct_cross_element(n, u, v) == direct_cross_element(n, u, v, p.comparable)


def test_relabeling_labeling_matches_rho_paths():
    n = random_nlc(6, 3, 5)
    lt = relabeling_labeling(n)
    for u, v in lt.pairs():
        assert lt.lam(u, v) == tuple(n.rho_path(u, v).table)
