"""Fibred numeration: the one-step map, digit expansions with exact cycle
detection, sigma-integers and padding."""
from fractions import Fraction

import pytest

from pisotiles.errors import ValidationError
from pisotiles.numeration import (expand, expand_real, finite_expansion,
                                  is_sigma_integer, paddable_letters,
                                  sigma_integer_level, sigma_integer_walks,
                                  t_inverse, t_sigma)


def _digit_names(system, expansion):
    f = system.field
    d1 = system.delta_letter(1)
    d12 = d1 + f.one()
    names = {tuple(f.zero().coeffs): "0", tuple(d1.coeffs): "d1",
             tuple(d12.coeffs): "d12"}
    return tuple(names.get(tuple(d.coeffs), repr(d)) for d in expansion.digits)


def test_t_sigma_is_inverted_by_t_inverse(quad_ram):
    f = quad_ram.field
    x = f.from_rational(Fraction(1, 4))
    (state, edge) = t_sigma(quad_ram, x, 1)
    pre = t_inverse(quad_ram, *state)
    assert any(y == x and b == 1 for (y, b), _ in pre)


def test_t_sigma_rejects_states_outside_domain(quad_ram):
    with pytest.raises(ValidationError):
        expand(quad_ram, quad_ram.field.from_rational(2), 2)   # 2 >= delta(2) = 1


def test_expansion_quarter(quad_ram):
    e = expand(quad_ram, quad_ram.field.from_rational(Fraction(1, 4)), 1)
    assert e.kind == "finite"
    assert _digit_names(quad_ram, e) == ("0", "d1", "d1")


def test_expansion_purely_periodic(quad_ram):
    x = (quad_ram.field.alpha() - 1) * Fraction(1, 3)
    e = expand(quad_ram, x, 2)
    assert e.kind == "eventually_periodic"
    assert (e.preperiod, e.period) == (0, 2)
    assert _digit_names(quad_ram, e) == ("d1", "0")


def test_expansion_mixed(quad_ram):
    e = expand(quad_ram, quad_ram.field.alpha() - 2, 1)
    assert e.kind == "eventually_periodic"
    assert (e.preperiod, e.period) == (2, 2)
    assert _digit_names(quad_ram, e) == ("d1", "d1", "0", "d12")


def test_expansion_finite_with_composite_digit(quad_ram):
    x = (quad_ram.field.alpha() - 1) * Fraction(1, 4)
    e = expand(quad_ram, x, 1)
    assert e.kind == "finite"
    assert _digit_names(quad_ram, e) == ("0", "d12", "d12")


def test_expansion_reconstructs_exactly(quad_ram, quad_unram):
    # x = sum d_i alpha^-(i+1) + alpha^-k x_k along the orbit, exactly
    import random
    rng = random.Random(7)
    for system in (quad_ram, quad_unram):
        f = system.field
        inv = f.alpha().inverse()
        for _ in range(20):
            a = rng.randrange(1, system.n + 1)
            q = Fraction(rng.randrange(0, 997), 997)
            x = system.delta_letter(a) * q
            e = expand(system, x, a, max_steps=60)
            acc = f.zero()
            w = inv
            for edge in e.edges:
                acc = acc + system.delta(edge.prefix) * w
                w = w * inv
            assert acc + _tail_value(system, e, len(e.edges)) == x


def _tail_value(system, e, k):
    """alpha^-k times the state reached after the listed digits."""
    f = system.field
    if k < len(e.states):
        tail_state = e.states[k][0]
    else:
        # recompute by stepping from the last listed state
        x, a = e.states[-1]
        (x, a), _ = t_sigma(system, x, a)
        tail_state = x
    return tail_state * (f.alpha().inverse() ** k)


def test_states_remain_in_domain(quad_ram):
    x = quad_ram.field.alpha() - 2
    e = expand(quad_ram, x, 1)
    for y, a in e.states:
        assert y.sign() >= 0 and y < quad_ram.delta_letter(a)


def test_walk_counts_match_matrix_power(quad_ram, quad_unram):
    for system in (quad_ram, quad_unram):
        M = system.matrix
        n = system.n
        P = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        for k in range(1, 7):
            P = [[sum(M[i][t] * P[t][j] for t in range(n)) for j in range(n)]
                 for i in range(n)]
            for a in range(1, n + 1):
                walks = sigma_integer_walks(system, a, k)
                assert len(walks) == sum(P[a - 1][b] for b in range(n))


def test_paddable_letters(quad_ram, quad_unram, nofin):
    assert paddable_letters(quad_ram) == {1}
    assert paddable_letters(quad_unram) == {1}
    assert paddable_letters(nofin) == {1, 2}


def test_integer_facts_frozen(quad_ram):
    f = quad_ram.field
    x = f.alpha() * Fraction(3, 2) + 1
    assert is_sigma_integer(quad_ram, x, 1)
    assert not is_sigma_integer(quad_ram, x, 2)
    assert x in sigma_integer_level(quad_ram, 2, 2)
    assert x not in sigma_integer_level(quad_ram, 2, 3)


def test_zero_integer_status_depends_on_reachability(quad_ram):
    # 0 is realized by an all-empty-prefix walk, which needs the letter to
    # sit under the padding closure; for letter 2 every incoming edge
    # carries a positive digit, so 0 is not a (sigma, 2)-integer
    assert is_sigma_integer(quad_ram, quad_ram.field.zero(), 1)
    assert not is_sigma_integer(quad_ram, quad_ram.field.zero(), 2)


def test_negative_values_are_not_sigma_integers(quad_ram):
    assert not is_sigma_integer(quad_ram, -quad_ram.field.one(), 1)


def test_expand_real_scales_into_domain(quad_ram):
    f = quad_ram.field
    m, a, e = expand_real(quad_ram, f.from_rational(5))
    y = f.from_rational(5) * (f.alpha().inverse() ** m)
    assert y.sign() >= 0 and y < quad_ram.delta_letter(a)
    assert m > 0


def test_finite_expansion_helper(quad_ram):
    assert finite_expansion(quad_ram, quad_ram.field.from_rational(Fraction(1, 4)), 1)
    assert not finite_expansion(quad_ram, quad_ram.field.alpha() - 2, 1)
