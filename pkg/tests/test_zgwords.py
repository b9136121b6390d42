"""
Tests for group ring words
"""

import pytest

from core import zgwords
from core.errors import PreconditionError
from core.zgwords import GroupRingWord


def test_canonical_form_merges_and_sorts():
    w = GroupRingWord.from_terms(2, [(2, 1, 1), (1, 3, 2), (1, 3, -2), (-1, 2, 1)])
    assert w.terms == ((1, 2, -1), (2, 1, 1))


def test_cancellation_gives_zero():
    w = GroupRingWord.from_terms(1, [(1, 2, 1)])
    assert (w - w).is_zero
    assert not (w - w)
    assert GroupRingWord.zero(3).is_zero


def test_pairs_expand_coefficients():
    w = zgwords.from_pairs([[1, 2], [1, 2], [-2, 1]], 2)
    assert w.terms == ((1, 2, 2), (2, 1, -1))
    assert w.to_pairs() == [[1, 2], [1, 2], [-2, 1]]


def test_pair_expansion_limit():
    w = GroupRingWord.from_terms(1, [(1, 1, 3)])
    with pytest.raises(PreconditionError):
        w.to_pairs(expand_limit=2)
    assert w.to_triples() == [[1, 1, 3]]


def test_pair_limit_follows_settings(settings):
    settings.set_pair_expand_limit(1)
    with pytest.raises(PreconditionError):
        GroupRingWord.from_terms(1, [(1, 1, 2)]).to_pairs()


def test_from_json_detects_form():
    assert zgwords.from_json([[1, 2, 5]], 1).terms == ((1, 2, 5),)
    assert zgwords.from_json([[-1, 2]], 1).terms == ((1, 2, -1),)
    assert zgwords.from_json([], 1).is_zero


def test_generator_out_of_range():
    with pytest.raises(PreconditionError):
        GroupRingWord.from_terms(1, [(2, 1, 1)])
    with pytest.raises(PreconditionError):
        zgwords.from_pairs([[1, 1, 1]], 1)


def test_rank_mismatch():
    with pytest.raises(PreconditionError):
        GroupRingWord.unit(1, 1) + GroupRingWord.unit(2, 1)


def test_augmentation_and_coefficients():
    w = GroupRingWord.from_terms(2, [(1, 2, 3), (1, 1, -1), (2, 3, 4)])
    assert w.augmentation() == 6
    assert w.coefficient_vector() == [2, 4]
    assert w.generator_part(1) == {1: -1, 2: 3}
    assert zgwords.scale(w, 0).is_zero
    assert zgwords.add(w, w) == w.scale(2)


def test_act_multiplies_on_the_left(c3):
    # in C3 index 2 is the generator and index 3 its square
    w = GroupRingWord.unit(1, 1, elt=2)
    assert zgwords.act(c3, 2, w).terms == ((1, 3, 1),)
    assert zgwords.act(c3, 1, w) == w
    with pytest.raises(PreconditionError):
        zgwords.act(c3, 4, w)


def test_act_keeps_distinct_terms_distinct(s3):
    w = GroupRingWord.from_terms(1, [(1, g, g) for g in s3.indices()])
    moved = zgwords.act(s3, 4, w)
    assert len(moved) == s3.order
    assert moved.augmentation() == w.augmentation()


def test_substitute_is_module_linear(c3):
    image = GroupRingWord.from_terms(2, [(1, 1, 1), (2, 2, 1)])
    w = GroupRingWord.unit(1, 1, elt=2)
    assert zgwords.substitute(c3, w, [image]).terms == ((1, 2, 1), (2, 3, 1))


def test_substitute_with_transport(c3):
    image = GroupRingWord.unit(1, 1)
    w = GroupRingWord.unit(1, 1, elt=2)
    moved = zgwords.substitute(c3, w, [image], transport=lambda e: 3 if e == 2 else e)
    assert moved.terms == ((1, 3, 1),)


def test_substitute_checks_image_count(c3):
    with pytest.raises(PreconditionError):
        zgwords.substitute(c3, GroupRingWord.unit(2, 1), [GroupRingWord.unit(1, 1)])
