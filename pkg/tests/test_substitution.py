"""Combinatorics of substitutions: parsing, incidence data, the prefix
automaton, coincidence, periodic points and the adic successor."""
import pytest

from pisotiles.errors import ValidationError
from pisotiles.substitution import Substitution, abelianization, parse_word


def test_parse_word_caret_powers():
    assert parse_word("121") == (1, 2, 1)
    assert parse_word("1^5 2") == (1, 1, 1, 1, 1, 2)
    assert parse_word("2121^3") == (2, 1, 2, 1, 1, 1)


def test_parse_rules():
    sub = Substitution.parse("1->1^5 2;2->1^3")
    assert sub.image(1) == (1, 1, 1, 1, 1, 2)
    assert sub.image(2) == (1, 1, 1)
    assert sub.n == 2


def test_parse_rejects_gaps_and_empty_images():
    with pytest.raises(ValidationError):
        Substitution.parse("1->13;3->1")   # letter 2 missing
    with pytest.raises(ValidationError):
        Substitution.parse("1->;2->1")


def test_abelianization():
    assert abelianization((1, 2, 1), 2) == (2, 1)
    assert abelianization((), 3) == (0, 0, 0)


def test_incidence_matrix_counts_letters_of_images():
    sub = Substitution.parse("1->121;2->11")
    # M[a][b] = number of occurrences of a in the image of b
    assert sub.incidence_matrix() == [[2, 2], [1, 0]]


def test_apply_morphism_property():
    sub = Substitution.parse("1->121;2->11")
    w1, w2 = (1, 2), (2, 1, 1)
    assert sub.apply(w1 + w2) == sub.apply(w1) + sub.apply(w2)


def test_power_agrees_with_iterated_apply():
    sub = Substitution.parse("1->1113;2->11;3->2")
    assert sub.power(3).image(1) == sub.apply(sub.apply(sub.image(1)))


def test_primitivity():
    for rules in ("1->121;2->11", "1->1^5 2;2->1^3",
                  "1->1113;2->11;3->2", "1->2121^3;2->12"):
        assert Substitution.parse(rules).is_primitive()
    assert not Substitution.parse("1->12;2->2").is_primitive()


def test_prefix_automaton_one_edge_per_image_position(quad_ram):
    sub = quad_ram.sub
    edges = sub.prefix_automaton()
    assert len(edges) == sum(len(sub.image(b)) for b in range(1, sub.n + 1))
    for e in edges:
        assert sub.image(e.source) == e.prefix + (e.target,) + e.suffix
    assert len(sub.edges_into(1)) == 4
    assert len(sub.edges_into(2)) == 1


def test_strong_coincidence_holds_for_worked_examples():
    for rules in ("1->121;2->11", "1->1^5 2;2->1^3",
                  "1->1113;2->11;3->2", "1->2121^3;2->12"):
        assert Substitution.parse(rules).strong_coincidence()


def test_periodic_point_seeds():
    assert Substitution.parse("1->121;2->11").periodic_point_seed() == (1, 1)
    assert Substitution.parse("1->1^5 2;2->1^3").periodic_point_seed() == (1, 1)
    assert Substitution.parse("1->1113;2->11;3->2").periodic_point_seed() == (1, 1)
    # first-letter map swaps 1 and 2, so the seed needs the square
    seed, period = Substitution.parse("1->2121^3;2->12").periodic_point_seed()
    assert period == 2
    assert seed in (1, 2)


def test_fixed_point_prefix_is_shift_invariant():
    for rules in ("1->121;2->11", "1->2121^3;2->12"):
        sub = Substitution.parse(rules)
        w = sub.fixed_point_prefix(60)
        assert len(w) == 60
        seed, period = sub.periodic_point_seed()
        image = sub.power(period).apply(w) if period > 1 else sub.apply(w)
        assert image[:60] == w


def test_fixed_point_prefix_frozen_quad_ram():
    sub = Substitution.parse("1->121;2->11")
    assert sub.fixed_point_prefix(10) == (1, 2, 1, 1, 1, 1, 2, 1, 1, 2)


def test_position_development_reconstructs_prefix(quad_ram):
    sub = quad_ram.sub
    w = sub.fixed_point_prefix(120)
    for j in (0, 1, 7, 50, 100):
        dev = sub.position_development(j, 10)
        # digits are least-significant first: expanding from the top level
        # down, the concatenated prefixes rebuild w[:j]
        rebuilt = ()
        for prefix, _, _ in reversed(dev):
            rebuilt = sub.apply(rebuilt) + prefix
        assert rebuilt == w[:j]


def test_adic_successor_is_the_shift(quad_ram):
    sub = quad_ram.sub
    for j in range(120):
        succ = sub.adic_successor(sub.position_development(j, 10))
        assert succ == sub.position_development(j + 1, 10)
