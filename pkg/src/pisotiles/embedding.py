"""The representation space for a non-unit Pisot number.

K = (product of the non-dominant Archimedean completions) x (alpha parts of
the p-adic completions at the primes dividing N(alpha)).  Complex places
contribute the *square* modulus as their absolute value so that the product
formula comes out with exponent one per place.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import ValidationError
from .numberfield import FieldElement, NumberField
from .padic import AlphaPartRing, PadicElement, alpha_primes


@dataclass(frozen=True)
class ArchPlace:
    kind: str       # "real" or "complex"
    root: complex   # the conjugate of alpha at this place (im > 0 if complex)

    def evaluate(self, coeffs) -> complex:
        acc = 0j
        for c in reversed([Fraction(x) for x in coeffs]):
            acc = acc * self.root + complex(c)
        return acc if self.kind == "complex" else complex(acc.real, 0.0)

    def abs_value(self, z: complex) -> float:
        return abs(z) if self.kind == "real" else abs(z) ** 2


def archimedean_places(field: NumberField, dps: int = 40) -> tuple[float, list[ArchPlace]]:
    """(dominant root, non-dominant places), one place per conjugate pair."""
    with mpmath.workdps(dps):
        roots = mpmath.polyroots([mpmath.mpf(c) for c in reversed(field.coeffs)],
                                 maxsteps=200, extraprec=200)
    parsed = [complex(r) for r in roots]
    tol = 1e-25
    real = [r.real for r in parsed if abs(r.imag) <= tol]
    cplx = [r for r in parsed if r.imag > tol]
    dominant = max(real)
    places = [ArchPlace("real", complex(r, 0.0))
              for r in sorted(real) if r != dominant]
    places += [ArchPlace("complex", r) for r in sorted(cplx, key=lambda z: z.real)]
    return dominant, places


@dataclass(frozen=True)
class EmbeddedPoint:
    arch: tuple[complex, ...]
    padic: tuple[PadicElement, ...]

    def __add__(self, other):
        return EmbeddedPoint(tuple(a + b for a, b in zip(self.arch, other.arch)),
                             tuple(a + b for a, b in zip(self.padic, other.padic)))

    def __sub__(self, other):
        return EmbeddedPoint(tuple(a - b for a, b in zip(self.arch, other.arch)),
                             tuple(a - b for a, b in zip(self.padic, other.padic)))


class RepresentationSpace:
    def __init__(self, field: NumberField, precision: int = 64):
        self.field = field
        self.primes = alpha_primes(field.coeffs)
        if not self.primes:
            raise ValidationError("unit Pisot number: the p-adic part of the "
                                  "representation space is empty")
        self.rings = [AlphaPartRing(field.coeffs, p, precision) for p in self.primes]
        self.dominant_root, self.places = archimedean_places(field)
        self.warnings = [w for r in self.rings for w in r.warnings]

    def phi_prime(self, x: FieldElement) -> EmbeddedPoint:
        arch = tuple(pl.evaluate(x.coeffs) for pl in self.places)
        pad = tuple(r.embed_field_element(x) for r in self.rings)
        return EmbeddedPoint(arch, pad)

    def mul_alpha(self, z: EmbeddedPoint) -> EmbeddedPoint:
        arch = tuple(c * pl.root for c, pl in zip(z.arch, self.places))
        pad = tuple(r.mul(c, r.alpha()) for c, r in zip(z.padic, self.rings))
        return EmbeddedPoint(arch, pad)

    def div_alpha(self, z: EmbeddedPoint) -> EmbeddedPoint:
        arch = tuple(c / pl.root for c, pl in zip(z.arch, self.places))
        pad = tuple(r.mul_inv_alpha(c) for c, r in zip(z.padic, self.rings))
        return EmbeddedPoint(arch, pad)

    def norm(self, z: EmbeddedPoint) -> float:
        vals = [pl.abs_value(c) for pl, c in zip(self.places, z.arch)]
        vals += [r.abs_value(c) for r, c in zip(self.rings, z.padic)]
        return max(vals)

    def alpha_contraction(self) -> float:
        """max over places of |alpha|; strictly below 1 for a Pisot number
        with all alpha-part places."""
        vals = [pl.abs_value(pl.root) for pl in self.places]
        vals += [r.abs_value(r.alpha()) for r in self.rings]
        return max(vals)

    def bound_m(self, digit_values: list[FieldElement]) -> float:
        """Radius M with every tile inside the closed ball B(0, M):
        geometric series bound for sum Phi'(d_i) alpha^i."""
        c = self.alpha_contraction()
        if c >= 1:
            raise ValidationError("alpha does not contract the representation space")
        top = max((self.norm(self.phi_prime(d)) for d in digit_values), default=0.0)
        return top / (1 - c)

    def contraction_certificate(self) -> float:
        """Product over all non-dominant places of |alpha|, times alpha
        itself; the product formula forces the result to 1."""
        prod = 1.0
        for pl in self.places:
            prod *= pl.abs_value(pl.root)
        for r in self.rings:
            prod *= r.abs_value(r.alpha())
        return prod * self.dominant_root
