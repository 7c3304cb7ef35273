"""Shared fixtures: the four worked substitutions used across the suite.

quad_ram:  1 -> 121,    2 -> 11      (x^2 - 2x - 2, p = 2, ramified)
quad_unram:  1 -> 1^5 2,  2 -> 1^3     (x^2 - 5x - 3, p = 3, unramified)
cubic:  1 -> 1113,   2 -> 11, 3 -> 2  (x^3 - 3x^2 - 2, p = 2, ramified quadratic)
nofin:  1 -> 2121^3, 2 -> 12      (x^2 - 5x + 2, finiteness property fails)
"""
from fractions import Fraction

import pytest

from pisotiles.system import build_system

RULES_QUAD_RAM = "1->121;2->11"
RULES_QUAD_UNRAM = "1->1^5 2;2->1^3"
RULES_CUBIC = "1->1113;2->11;3->2"
RULES_NOFIN = "1->2121^3;2->12"


@pytest.fixture(scope="session")
def quad_ram():
    return build_system(RULES_QUAD_RAM)


@pytest.fixture(scope="session")
def quad_unram():
    return build_system(RULES_QUAD_UNRAM)


@pytest.fixture(scope="session")
def cubic():
    return build_system(RULES_CUBIC)


@pytest.fixture(scope="session")
def nofin():
    return build_system(RULES_NOFIN)


def frac(a, b=1):
    return Fraction(a, b)
