"""Substitutions on a finite alphabet {1..n} and their combinatorics.

Words are tuples of ints.  A substitution is given by the tuple of images
sigma(1), ..., sigma(n).  This module knows nothing about number fields:
everything here is integer combinatorics (incidence matrix, primitivity,
prefix automaton, coincidence search, desubstitution developments).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ResourceCapError, ValidationError

Word = tuple[int, ...]

EPSILON: Word = ()

_RULE_RE = re.compile(r"^\s*([1-9])\s*->\s*(.*?)\s*$")
_TOKEN_RE = re.compile(r"([1-9])(?:\^([0-9]+))?|(\S)")


def parse_word(text: str) -> Word:
    """Parse a word like ``121`` or ``1^5 2``; letters are single digits 1-9
    and ``^k`` repeats the preceding letter."""
    out: list[int] = []
    for m in _TOKEN_RE.finditer(text):
        if m.group(3) is not None:
            raise ValidationError(f"bad character {m.group(3)!r} in word {text!r}")
        letter = int(m.group(1))
        rep = int(m.group(2)) if m.group(2) else 1
        out.extend([letter] * rep)
    return tuple(out)


def abelianization(word: Word, n: int) -> tuple[int, ...]:
    counts = [0] * n
    for a in word:
        counts[a - 1] += 1
    return tuple(counts)


@dataclass(frozen=True)
class PrefixEdge:
    """Edge source -> target of the prefix automaton: sigma(source) = p a s
    with a = target."""

    source: int
    target: int
    prefix: Word
    suffix: Word

    @property
    def index(self) -> int:
        return len(self.prefix)


class Substitution:
    def __init__(self, images: dict[int, Word] | tuple[Word, ...]):
        if isinstance(images, dict):
            letters = sorted(images)
            imgs = tuple(tuple(images[a]) for a in letters)
            if letters != list(range(1, len(letters) + 1)):
                raise ValidationError(f"alphabet must be 1..n, got {letters}")
        else:
            imgs = tuple(tuple(w) for w in images)
        n = len(imgs)
        if n == 0:
            raise ValidationError("empty substitution")
        for a, w in enumerate(imgs, start=1):
            if not w:
                raise ValidationError(f"image of {a} is empty")
            for b in w:
                if not 1 <= b <= n:
                    raise ValidationError(f"letter {b} in sigma({a}) outside 1..{n}")
        self.images = imgs
        self.n = n
        if not self._grows():
            raise ValidationError("substitution is non-growing: no image length "
                                  "tends to infinity")

    @classmethod
    def parse(cls, text: str) -> "Substitution":
        rules: dict[int, Word] = {}
        for part in text.split(";"):
            if not part.strip():
                continue
            m = _RULE_RE.match(part)
            if not m:
                raise ValidationError(f"cannot parse rule {part!r}")
            a = int(m.group(1))
            if a in rules:
                raise ValidationError(f"duplicate rule for letter {a}")
            rules[a] = parse_word(m.group(2))
        if not rules:
            raise ValidationError("no rules given")
        return cls(rules)

    def __repr__(self) -> str:
        body = ";".join(
            f"{a}->{''.join(map(str, w))}" for a, w in enumerate(self.images, 1))
        return f"Substitution({body})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Substitution) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def image(self, a: int) -> Word:
        return self.images[a - 1]

    def apply(self, word: Word) -> Word:
        out: list[int] = []
        for a in word:
            out.extend(self.images[a - 1])
        return tuple(out)

    def apply_power(self, word: Word, k: int, cap: int = 10**7) -> Word:
        for _ in range(k):
            word = self.apply(word)
            if len(word) > cap:
                raise ResourceCapError(f"word length exceeded cap {cap}")
        return word

    def power(self, k: int) -> "Substitution":
        if k < 1:
            raise ValidationError("power must be >= 1")
        return Substitution(tuple(self.apply_power((a,), k)
                                  for a in range(1, self.n + 1)))

    def _occurrence_graph(self) -> dict[int, set[int]]:
        return {a: set(self.image(a)) for a in range(1, self.n + 1)}

    def _grows(self) -> bool:
        # |sigma^k(a)| -> infinity for some a iff some cycle of the occurrence
        # graph passes through a letter whose image has length >= 2.
        graph = self._occurrence_graph()
        reach: dict[int, set[int]] = {}
        for a in graph:
            seen = set(graph[a])
            frontier = set(graph[a])
            while frontier:
                nxt = set()
                for b in frontier:
                    nxt |= graph[b] - seen
                seen |= nxt
                frontier = nxt
            reach[a] = seen
        for c in graph:
            if c in reach[c] and len(self.image(c)) >= 2:
                return True
            # a fat letter on a cycle through c also works
            if c in reach[c]:
                cycle = {b for b in reach[c] if c in reach[b]}
                if any(len(self.image(b)) >= 2 for b in cycle):
                    return True
        return False

    # --- incidence matrix -------------------------------------------------

    def incidence_matrix(self) -> list[list[int]]:
        """M[a][b] = number of occurrences of letter a+1 in sigma(b+1)."""
        n = self.n
        M = [[0] * n for _ in range(n)]
        for b in range(1, n + 1):
            for a in self.image(b):
                M[a - 1][b - 1] += 1
        return M

    def is_primitive(self) -> bool:
        """Some power of the incidence matrix is entrywise positive; by the
        Wielandt bound it suffices to look at the (n-1)^2 + 1 power."""
        n = self.n
        kmax = (n - 1) ** 2 + 1
        M = self.incidence_matrix()
        B = [[1 if M[i][j] else 0 for j in range(n)] for i in range(n)]
        P = B
        for _ in range(kmax - 1):
            if all(all(row) for row in P):
                return True
            P = [[1 if any(P[i][k] and B[k][j] for k in range(n)) else 0
                  for j in range(n)] for i in range(n)]
        return all(all(row) for row in P)

    # --- prefix automaton -------------------------------------------------

    def prefix_automaton(self) -> tuple[PrefixEdge, ...]:
        edges = []
        for b in range(1, self.n + 1):
            w = self.image(b)
            for i, a in enumerate(w):
                edges.append(PrefixEdge(source=b, target=a,
                                        prefix=w[:i], suffix=w[i + 1:]))
        return tuple(edges)

    def edges_into(self, a: int) -> tuple[PrefixEdge, ...]:
        return tuple(e for e in self.prefix_automaton() if e.target == a)

    # --- strong coincidence ----------------------------------------------

    def strong_coincidence(self, k_max: int = 8, cap: int = 10**6) -> bool:
        """Every pair of letters admits a coincidence with equal abelianized
        prefixes (or, symmetrically, suffixes) in some sigma^k, k <= k_max."""
        n = self.n
        pending = {(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1)}
        words = {a: (a,) for a in range(1, n + 1)}
        for _ in range(k_max):
            for a in words:
                words[a] = self.apply(words[a])
                if len(words[a]) > cap:
                    raise ResourceCapError(f"coincidence search word exceeded {cap}")
            done = set()
            for (a, b) in pending:
                if self._coincide(words[a], words[b]):
                    done.add((a, b))
            pending -= done
            if not pending:
                return True
        return False

    def _coincide(self, w1: Word, w2: Word) -> bool:
        for w, v in ((w1, w2), (tuple(reversed(w1)), tuple(reversed(w2)))):
            seen = set()
            counts = [0] * self.n
            for a in w:
                seen.add((a, tuple(counts)))
                counts[a - 1] += 1
            counts = [0] * self.n
            for a in v:
                if (a, tuple(counts)) in seen:
                    return True
                counts[a - 1] += 1
        return False

    # --- fixed / periodic points -----------------------------------------

    def first_letter_map(self) -> dict[int, int]:
        return {a: self.image(a)[0] for a in range(1, self.n + 1)}

    def periodic_point_seed(self) -> tuple[int, int]:
        """A letter a and minimal period k >= 1 with sigma^k(a) starting
        with a; prefers a fixed seed (k = 1) when one exists."""
        first = self.first_letter_map()
        best = None
        for a in range(1, self.n + 1):
            b, k = a, 0
            seen = {a}
            while True:
                b = first[b]
                k += 1
                if b == a:
                    if k == 1:
                        return a, 1
                    if best is None or k < best[1]:
                        best = (a, k)
                    break
                if b in seen:
                    break
                seen.add(b)
        if best is None:
            raise ValidationError("no periodic first-letter seed found")
        return best

    def fixed_point_prefix(self, length: int, cap: int = 10**7) -> Word:
        """Prefix of the one-sided fixed point of sigma^k starting from the
        periodic seed letter."""
        a, k = self.periodic_point_seed()
        sub = self if k == 1 else self.power(k)
        w: Word = (a,)
        while len(w) < length:
            nxt = sub.apply(w)
            if nxt == w:
                raise ValidationError("fixed point is finite; substitution "
                                      "does not grow from its seed")
            w = nxt
            if len(w) > cap:
                break
        if len(w) < length:
            raise ResourceCapError(f"fixed point prefix cap {cap} exceeded")
        return w[:length]

    # --- developments (desubstitution) ------------------------------------

    def position_development(self, j: int, depth: int) -> tuple[tuple[Word, int, Word], ...]:
        """Leading ``depth`` digits (p_i, a_i, s_i) of the development of
        position j in the fixed point: u_j sits at offset |p_0| inside
        sigma(u_{j'}) = p_0 a_0 s_0 at the next level up, and so on."""
        a0, k = self.periodic_point_seed()
        sub = self if k == 1 else self.power(k)
        digits: list[tuple[Word, int, Word]] = []
        pos = j
        for _ in range(depth):
            # find the parent position: largest m with |sub(u_0..u_{m-1})| <= pos
            parent = 0
            consumed = 0
            prefix_word = sub.fixed_point_prefix_letters(pos, a0)
            for m, letter in enumerate(prefix_word):
                ln = len(sub.image(letter))
                if consumed + ln > pos:
                    parent = m
                    break
                consumed += ln
            else:
                parent = len(prefix_word)
            parent_letter = sub.fixed_point_prefix_letters(parent + 1, a0)[parent]
            img = sub.image(parent_letter)
            off = pos - consumed
            digits.append((img[:off], img[off], img[off + 1:]))
            pos = parent
        return tuple(digits)

    def fixed_point_prefix_letters(self, length: int, seed: int) -> Word:
        """Prefix of the fixed point of *this* substitution from ``seed``
        (assumes sigma(seed) starts with seed)."""
        w: Word = (seed,)
        while len(w) < length:
            nxt = self.apply(w)
            if nxt == w:
                break
            w = nxt
            if len(w) > 10**7:
                raise ResourceCapError("fixed point prefix cap exceeded")
        return w[:length]

    def adic_successor(self, digits: tuple[tuple[Word, int, Word], ...]
                       ) -> tuple[tuple[Word, int, Word], ...]:
        """Successor of a development: locate the first index with a nonempty
        suffix, advance one position there, and restart every level below
        along leftmost branches."""
        i0 = None
        for i, (_, _, s) in enumerate(digits):
            if s:
                i0 = i
                break
        if i0 is None:
            raise ValidationError("development has no nonempty suffix; "
                                  "successor would leave the truncation depth")
        p, a, s = digits[i0]
        q = p + (a,)
        b = s[0]
        new = list(digits)
        new[i0] = (q, b, s[1:])
        # below i0: leftmost path into the new letter
        letter = b
        for i in range(i0 - 1, -1, -1):
            img = self.image(letter)
            new[i] = (EPSILON, img[0], img[1:])
            letter = img[0]
        return tuple(new)


def abelianization_fraction(word: Word, n: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(c) for c in abelianization(word, n))
