from __future__ import annotations

import pytest

from conftest import FIXTURE_NAMES, load_fixture
from nlcdim.errors import BadParameter, WitnessNotFound
from nlcdim.extract import extract_kelly, extract_standard, l_set_comparabilities_hold
from nlcdim.generators import caterpillar_nlc, caterpillar_parity_split
from nlcdim.nlc import decoded_poset
from nlcdim.poset import (check_kelly_conditions, check_standard_subposet, kelly_designated,
                          poset_from_cover_relations)
from nlcdim.semigroup import cross_labeling
from nlcdim.split import find_h_chain, find_h_cross, is_forward_ramseyan


def triggers(n, s, p, ell=3):
    for h in range(1, s.order + 1):
        ch = find_h_chain(n.tree, s, h, ell)
        if ch is None:
            continue
        cr = find_h_cross(n, s, h, p.comparable)
        if cr is not None:
            yield h, ch, cr


def test_at_least_five_fixtures():
    assert len(FIXTURE_NAMES) >= 5


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_fixture_extraction(name):
    n, s, p = load_fixture(name)
    assert decoded_poset(n) == p or all(
        n.decode(x, y) == p.lt(x, y) for x in p.elements for y in p.elements if x != y)
    lt = cross_labeling(n, comparable=p.comparable)
    assert is_forward_ramseyan(lt, s)[0]
    found = list(triggers(n, s, p))
    assert found, "fixture must trigger extraction"
    for h, ch, cr in found:
        wit = extract_standard(n, lt, s, ch, cr, p)
        assert wit.k >= 3
        assert check_standard_subposet(p, wit.xs, wit.ys)
        assert l_set_comparabilities_hold(n, wit, p)
        if n.kind == "relation":
            kw = extract_kelly(n, lt, s, ch, cr, p)
            assert check_kelly_conditions(p, kw.a, kw.b, kw.c, kw.d)
            assert len(set(kelly_designated(kw.a, kw.b, kw.c, kw.d))) == 4 * kw.k - 6


def test_longer_chain_gives_larger_example():
    n = caterpillar_nlc(11)
    s = caterpillar_parity_split(n)
    p = decoded_poset(n)
    lt = cross_labeling(n, comparable=p.comparable)
    sizes = []
    for ell in (3, 4):
        h, ch, cr = next(triggers(n, s, p, ell))
        sizes.append(extract_standard(n, lt, s, ch, cr, p).k)
    assert sizes == [3, 4]


def test_kelly_needs_bag_decomposition():
    n = caterpillar_nlc(9)
    s = caterpillar_parity_split(n)
    p = decoded_poset(n)
    h, ch, cr = next(triggers(n, s, p))
    with pytest.raises(BadParameter):
        extract_kelly(n, None, s, ch, cr, p)


def test_wrong_poset_is_refused():
    n = caterpillar_nlc(9)
    s = caterpillar_parity_split(n)
    p = decoded_poset(n)
    h, ch, cr = next(triggers(n, s, p))
    flat = poset_from_cover_relations(p.elements, [])
    with pytest.raises(WitnessNotFound):
        extract_standard(n, None, s, ch, cr, flat)
