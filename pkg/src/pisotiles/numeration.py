"""Fibred numeration: the transformation T(y, b) = (alpha*y - delta(p), a)
and everything built on it (expansions, sigma-integers, membership tests).

States are pairs (x, a) with x an exact field element in [0, delta(a)).
Cycle detection is exact, so eventual periodicity is decided, never guessed
from float drift.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ResourceCapError, ValidationError
from .numberfield import FieldElement
from .substitution import PrefixEdge, Word
from .system import PisotSystem

State = tuple[FieldElement, int]


def check_state(system: PisotSystem, x: FieldElement, a: int) -> None:
    if not 1 <= a <= system.n:
        raise ValidationError(f"letter {a} outside alphabet")
    if x.sign() < 0 or x >= system.delta_letter(a):
        raise ValidationError("state value outside [0, delta(a))")


def t_sigma(system: PisotSystem, x: FieldElement, a: int
            ) -> tuple[State, PrefixEdge]:
    """One step: the unique decomposition sigma(a) = p b s with
    alpha*x - delta(p) in [0, delta(b))."""
    z = x * system.field.alpha()
    hit = None
    for e in system.edges_from(a):
        y = z - system.delta(e.prefix)
        if y.sign() >= 0 and y < system.delta_letter(e.target):
            if hit is not None:
                raise ValidationError("numeration step not unique; "
                                      "state outside the fundamental domain")
            hit = ((y, e.target), e)
    if hit is None:
        raise ValidationError("no admissible numeration step; "
                              "state outside the fundamental domain")
    return hit


def t_inverse(system: PisotSystem, x: FieldElement, a: int
              ) -> list[tuple[State, PrefixEdge]]:
    """All preimages under the extended transformation: one per prefix
    automaton edge into a."""
    inv_alpha = system.field.alpha().inverse()
    out = []
    for e in system.edges_into(a):
        y = (x + system.delta(e.prefix)) * inv_alpha
        out.append(((y, e.source), e))
    return out


@dataclass(frozen=True)
class Expansion:
    kind: str                         # finite | eventually_periodic | truncated
    digits: tuple[FieldElement, ...]  # canonical digit values
    preperiod: int
    period: int
    edges: tuple[PrefixEdge, ...]
    states: tuple[State, ...]

    def digit_words(self) -> tuple[Word, ...]:
        return tuple(e.prefix for e in self.edges)


def expand(system: PisotSystem, x: FieldElement, a: int,
           max_steps: int = 2000) -> Expansion:
    check_state(system, x, a)
    state: State = (x, a)
    seen: dict[State, int] = {}
    states: list[State] = []
    edges: list[PrefixEdge] = []
    digits: list[FieldElement] = []
    while len(states) < max_steps:
        if state in seen:
            i = seen[state]
            pre, per = _minimize(digits, i, len(digits) - i)
            cycle = digits[pre:pre + per]
            if all(d.is_zero() for d in cycle):
                canon = digits[:pre]
                while canon and canon[-1].is_zero():
                    canon.pop()
                return Expansion("finite", tuple(canon), len(canon), 0,
                                 tuple(edges[:len(canon)]),
                                 tuple(states[:len(canon)]))
            return Expansion("eventually_periodic",
                             tuple(digits[:pre + per]), pre, per,
                             tuple(edges[:pre + per]), tuple(states[:pre + per]))
        seen[state] = len(states)
        states.append(state)
        (state, edge) = t_sigma(system, *state)
        edges.append(edge)
        digits.append(system.delta(edge.prefix))
    return Expansion("truncated", tuple(digits), len(digits), 0,
                     tuple(edges), tuple(states))


def _minimize(digits: list[FieldElement], pre: int, per: int) -> tuple[int, int]:
    """Minimal digit-level preperiod/period of an eventually periodic
    sequence known to repeat with (pre, per)."""
    tail = digits[pre:pre + per]
    best = per
    for p in range(1, per):
        if per % p == 0 and all(tail[i] == tail[i % p] for i in range(per)):
            best = p
            break
    while pre > 0 and digits[pre - 1] == digits[pre - 1 + best]:
        pre -= 1
    return pre, best


def expand_real(system: PisotSystem, x: FieldElement,
                max_scale: int = 200) -> tuple[int, int, Expansion]:
    """(m, a, expansion): minimal m >= 0 with alpha^-m * x in [0, delta(a));
    ties broken by the smallest letter.  The first m digits of the expansion
    are the integer part of x."""
    if x.sign() < 0:
        raise ValidationError("expand_real needs x >= 0")
    inv = system.field.alpha().inverse()
    y = x
    for m in range(max_scale):
        for a in range(1, system.n + 1):
            if y < system.delta_letter(a):
                return m, a, expand(system, y, a)
        y = y * inv
    raise ResourceCapError("no admissible scale found within the cap")


# -------------------------------------------------------------------------
# sigma-integers
# -------------------------------------------------------------------------

def sigma_integer_walks(system: PisotSystem, a: int, k: int,
                        cap: int = 10**6) -> list[tuple[FieldElement, int]]:
    """All (value, start letter) of length-k backward walks ending at a:
    value = sum delta(p_i) alpha^i over the edge prefixes."""
    alpha = system.field.alpha()
    frontier: list[tuple[FieldElement, int]] = [(system.field.zero(), a)]
    weight = system.field.one()
    for _ in range(k):
        nxt = []
        for val, vert in frontier:
            for e in system.edges_into(vert):
                d = system.delta(e.prefix)
                nxt.append((val + d * weight if not d.is_zero() else val,
                            e.source))
        if len(nxt) > cap:
            raise ResourceCapError(f"walk enumeration exceeded cap {cap}")
        frontier = nxt
        weight = weight * alpha
    return frontier


def sigma_integer_level(system: PisotSystem, a: int, k: int,
                        cap: int = 10**6) -> set[FieldElement]:
    return {v for v, _ in sigma_integer_walks(system, a, k, cap)}


def paddable_letters(system: PisotSystem) -> set[int]:
    """Letters from which the empty-prefix padding can be extended backward
    forever: the forward closure of the cycles of the first-letter map."""
    first = system.sub.first_letter_map()
    on_cycle = set()
    for a in first:
        seen = []
        b = a
        while b not in seen:
            seen.append(b)
            b = first[b]
        on_cycle.update(seen[seen.index(b):])
    closure = set(on_cycle)
    frontier = set(on_cycle)
    while frontier:
        nxt = {first[b] for b in frontier} - closure
        closure |= nxt
        frontier = nxt
    return closure


def is_sigma_integer(system: PisotSystem, x: FieldElement, a: int,
                     k_max: int = 12, cap: int = 10**6) -> bool:
    """x is a (sigma, a)-integer: some length-k walk ending at a has value x
    and a start letter that can be padded by empty prefixes forever."""
    if x.sign() < 0:
        return False
    pad = paddable_letters(system)
    alpha = system.field.alpha()
    # prune partial sums above x: digits are nonnegative
    frontier: dict[tuple[tuple, int], None] = {}
    cur: set[tuple[FieldElement, int]] = {(system.field.zero(), a)}
    weight = system.field.one()
    for k in range(k_max + 1):
        for val, vert in cur:
            if val == x and vert in pad:
                return True
        nxt = set()
        for val, vert in cur:
            for e in system.edges_into(vert):
                nv = val + system.delta(e.prefix) * weight
                if nv <= x:
                    nxt.add((nv, e.source))
        if len(nxt) > cap:
            raise ResourceCapError("sigma-integer search exceeded cap")
        cur = nxt
        weight = weight * alpha
        if not cur:
            break
    return False


def frac_membership(system: PisotSystem, x: FieldElement, a: int) -> bool:
    """x in Frac(sigma, a) = V.Z[1/alpha] intersected with [0, delta(a))."""
    if x.sign() < 0 or x >= system.delta_letter(a):
        return False
    return system.membership(x).member


def finite_expansion(system: PisotSystem, x: FieldElement, a: int,
                     max_digits: int = 200) -> bool:
    exp = expand(system, x, a, max_steps=max_digits)
    return exp.kind == "finite"
