"""Pipeline hub: bundle a substitution with all certified algebraic data.

Everything downstream (numeration, tiles, analysis, CLI) works through a
PisotSystem so the expensive objects (field, eigenvectors, p-adic rings,
representation space) are built and checked once.
"""
from __future__ import annotations

from functools import lru_cache

from .errors import ValidationError
from .numberfield import (EigenData, FieldElement, NumberField, char_poly,
                          digit_set, eigen_data, membership_v_z_alpha_inv,
                          pisot_verdict)
from .padic import AlphaPartRing
from .embedding import RepresentationSpace
from .substitution import PrefixEdge, Substitution, Word


class PisotSystem:
    def __init__(self, sub: Substitution, normalization: int | None = None,
                 precision: int = 64):
        self.sub = sub
        self.warnings: list[str] = []
        if not sub.is_primitive():
            raise ValidationError("substitution is not primitive")
        self.matrix = sub.incidence_matrix()
        self.char_poly = char_poly(self.matrix)
        verdict = pisot_verdict(self.char_poly)
        if not verdict.is_pisot:
            raise ValidationError(
                f"incidence matrix is not irreducible Pisot: {verdict.reason}")
        self.verdict = verdict
        if verdict.is_unit:
            raise ValidationError("unit Pisot substitution: the p-adic part "
                                  "of the representation space is empty")
        if not sub.strong_coincidence():
            self.warnings.append("strong coincidence not confirmed within the "
                                 "search bound")
        self.field = NumberField(self.char_poly, _skip_checks=True)
        self.eig = eigen_data(self.field, self.matrix,
                              normalization=normalization)
        self.space = RepresentationSpace(self.field, precision=precision)
        self.warnings += self.space.warnings
        self.edges: tuple[PrefixEdge, ...] = sub.prefix_automaton()
        self.digits = digit_set(sub, self.eig)
        self._delta_cache: dict[Word, FieldElement] = {}

    # convenience -----------------------------------------------------------

    @property
    def n(self) -> int:
        return self.sub.n

    def delta(self, word: Word) -> FieldElement:
        if word not in self._delta_cache:
            self._delta_cache[word] = self.eig.delta(word)
        return self._delta_cache[word]

    def delta_letter(self, a: int) -> FieldElement:
        return self.eig.left[a - 1]

    def max_delta(self) -> FieldElement:
        out = self.delta_letter(1)
        for a in range(2, self.n + 1):
            d = self.delta_letter(a)
            if d > out:
                out = d
        return out

    def edges_into(self, a: int) -> list[PrefixEdge]:
        return [e for e in self.edges if e.target == a]

    def edges_from(self, b: int) -> list[PrefixEdge]:
        return [e for e in self.edges if e.source == b]

    def digit_values(self) -> list[FieldElement]:
        return list(self.digits)

    def membership(self, x: FieldElement):
        return membership_v_z_alpha_inv(self.eig, x)

    def d_p_values(self) -> list[int]:
        """Per p-adic ring, the minimal valuation over the eigenvector
        entries: the tile's p-adic coordinates live in that power of the
        maximal ideal."""
        out = []
        for ring in self.space.rings:
            vals = []
            for v in self.eig.left:
                z = ring.embed_field_element(v)
                val = ring.valuation(z)
                if val is not None:
                    vals.append(val)
            out.append(min(vals))
        return out

    def bound_m(self) -> float:
        return self.space.bound_m(self.digit_values())

    def escalated(self) -> "PisotSystem":
        return PisotSystem(self.sub, precision=self.space.rings[0].N * 2
                           if self.space.rings else 128)


@lru_cache(maxsize=32)
def build_system(rules: str, normalization: int | None = None,
                 precision: int = 64) -> PisotSystem:
    return PisotSystem(Substitution.parse(rules), normalization=normalization,
                       precision=precision)
