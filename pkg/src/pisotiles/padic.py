"""p-adic completions at the primes dividing alpha.

For each prime p dividing |f(0)| = |N(alpha)| the minimal polynomial splits
over Z_p into a part whose roots have positive valuation (the "alpha part")
and a unit part.  We isolate the alpha part by Hensel-lifting the coprime
factorization f = x^d * u mod p, read ramification/residue degrees off the
Newton polygon and its residual polynomials, and do all element arithmetic
modulo (g_alpha, p^N) with an explicit power-of-p shift so negative
valuations are representable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import sympy

from .errors import PrecisionError, UnsupportedDigitModel, ValidationError

IntPoly = tuple[int, ...]  # low -> high


def vp(x: int, p: int) -> int:
    if x == 0:
        return -1  # caller must treat 0 specially
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def alpha_primes(coeffs: tuple[int, ...]) -> list[int]:
    """Primes dividing the norm |f(0)|; empty for a unit Pisot number."""
    n0 = abs(coeffs[0])
    return sorted(sympy.factorint(n0)) if n0 > 1 else []


@dataclass(frozen=True)
class Segment:
    slope: Fraction  # negative for the alpha part
    length: int      # horizontal extent
    start: tuple[int, int]


def newton_polygon(coeffs: tuple[int, ...], p: int) -> list[Segment]:
    """Lower convex hull of {(i, v_p(a_i))}, left to right."""
    pts = [(i, vp(c, p)) for i, c in enumerate(coeffs) if c != 0]
    hull: list[tuple[int, int]] = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] if it is above the line hull[-2] -> pt
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    segs = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        segs.append(Segment(slope=Fraction(y2 - y1, x2 - x1),
                            length=x2 - x1, start=(x1, y1)))
    return segs


def _poly_mul_mod(a: list[int], b: list[int], mod: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % mod
    return out


def _poly_divmod_monic(a: list[int], g: list[int], mod: int) -> tuple[list[int], list[int]]:
    """Division by monic g, coefficients mod ``mod``."""
    rem = [x % mod for x in a]
    dg = len(g) - 1
    quo = [0] * max(len(rem) - dg, 1)
    for i in range(len(rem) - 1 - dg, -1, -1):
        c = rem[i + dg] % mod
        if c:
            quo[i] = c
            for j in range(dg + 1):
                rem[i + j] = (rem[i + j] - c * g[j]) % mod
    return quo, rem[:dg] if dg else [0]


def _poly_sub(a: list[int], b: list[int], mod: int) -> list[int]:
    m = max(len(a), len(b))
    return [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % mod
            for i in range(m)]


def _trim(a: list[int]) -> list[int]:
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _poly_ext_gcd_modp(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    """(s, t) with s*a + t*b = 1 mod p, assuming gcd(a, b) = 1 in F_p[x]."""
    from sympy import GF, Poly, Symbol
    x = Symbol("x")
    pa = Poly(list(reversed(a)), x, domain=GF(p))
    pb = Poly(list(reversed(b)), x, domain=GF(p))
    s, t, g = pa.gcdex(pb)
    if g.degree() != 0:
        raise ValidationError("factors not coprime mod p")
    c = int(g.all_coeffs()[-1])
    cinv = pow(c, -1, p)
    sc = [int(v) * cinv % p for v in reversed(s.all_coeffs())] or [0]
    tc = [int(v) * cinv % p for v in reversed(t.all_coeffs())] or [0]
    return sc, tc


def hensel_lift(f: IntPoly, g0: list[int], h0: list[int], p: int, N: int
                ) -> tuple[list[int], list[int]]:
    """Lift a coprime monic factorization f = g0*h0 mod p to mod p^N.
    g0 must be monic; returns (g, h) monic*unit with g*h = f mod p^N."""
    a, b = _poly_ext_gcd_modp(g0, h0, p)  # a*g0 + b*h0 = 1 mod p
    g, h = [c % p for c in g0], [c % p for c in h0]
    mod = p
    fl = list(f)
    while mod < p ** N:
        mod = min(mod * mod, p ** N)
        e = _poly_sub(fl, _poly_mul_mod(g, h, mod), mod)
        # g' = g + (b*e mod g); h' = h + a*e + q*h
        be = _poly_mul_mod(b, e, mod)
        q, r = _poly_divmod_monic(be, g, mod)
        g_new = _trim(_poly_sub(g, [-c % mod for c in r], mod))
        ae = _poly_mul_mod(a, e, mod)
        qh = _poly_mul_mod(q, h, mod)
        h_new = [0] * max(len(h), len(ae), len(qh))
        for i in range(len(h_new)):
            v = (h[i] if i < len(h) else 0) + (ae[i] if i < len(ae) else 0) \
                + (qh[i] if i < len(qh) else 0)
            h_new[i] = v % mod
        g, h = g_new, _trim(h_new)
        # refresh the Bezout pair so a*g + b*h = 1 mod the new modulus
        err = _poly_sub(_poly_add_mod(_poly_mul_mod(a, g, mod),
                                      _poly_mul_mod(b, h, mod), mod), [1], mod)
        bq, br = _poly_divmod_monic(_poly_mul_mod(b, err, mod), g, mod)
        b = _trim(_poly_sub(b, br, mod))
        aerr = _poly_mul_mod(a, err, mod)
        bqh = _poly_mul_mod(bq, h, mod)
        a = _trim(_poly_sub(a, _poly_add_mod(aerr, bqh, mod), mod))
    check = _poly_sub(list(f), _poly_mul_mod(g, h, p ** N), p ** N)
    if any(c % p ** N for c in check):
        raise PrecisionError("Hensel lift verification failed")
    return g, h


def _poly_add_mod(a: list[int], b: list[int], mod: int) -> list[int]:
    m = max(len(a), len(b))
    return [((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % mod
            for i in range(m)]


def _residual_polynomial(coeffs: tuple[int, ...], seg: Segment, p: int) -> list[int]:
    """Residual polynomial over F_p attached to a Newton-polygon segment."""
    i0, y0 = seg.start
    h = -seg.slope.numerator  # slope = -h/e in lowest terms, h > 0
    e = seg.slope.denominator
    deg = seg.length // e
    out = []
    for j in range(deg + 1):
        i = i0 + j * e
        y = y0 - j * h
        c = coeffs[i] if i < len(coeffs) else 0
        if c != 0 and vp(c, p) == y:
            out.append((c // p ** y) % p)
        else:
            out.append(0)
    return out


@dataclass(frozen=True)
class LocalFactor:
    e: int            # ramification index
    f: int            # residue degree
    multiplicity: int

    @property
    def degree(self) -> int:
        return self.e * self.f * self.multiplicity


class AlphaPartRing:
    """Arithmetic in the alpha part of Q_p tensor Q(alpha): the completion(s)
    at primes above p where alpha has positive valuation.

    Elements: shift s and an integer coefficient vector mod (g_alpha, p^N),
    representing p^s * P(theta).  Valuations are certified through the local
    resultant norm with a guard band; running out of headroom escalates the
    precision (doubling N, at most ``max_escalations`` times).
    """

    GUARD = 8
    max_escalations = 4

    def __init__(self, min_poly: tuple[int, ...], p: int, precision: int = 64):
        self.min_poly = tuple(int(c) for c in min_poly)
        self.p = p
        self.N = precision
        self.warnings: list[str] = []
        self._build()

    def _build(self) -> None:
        p, N = self.p, self.N
        f = self.min_poly
        n = len(f) - 1
        d = next((i for i, c in enumerate(f) if c % p != 0), None)
        if d is None or d == 0:
            raise ValidationError(f"alpha has no positive-valuation root at p={p}")
        self.alpha_degree = d
        if d == n:
            g = [c % p ** N for c in f]
            h = [1]
        else:
            g0 = [0] * d + [1]
            # unit cofactor mod p: f/x^d reduced
            fh = [(c // 1) % p for c in f]
            h0, rem = _poly_divmod_monic(fh, g0, p)
            # rem is f mod (x^d, p); the true coprime pair is (x^d, f/x^d mod p)
            h0 = _trim(h0)
            g, h = hensel_lift(f, g0, h0, p, N)
        self.g = _trim([c % p ** N for c in g])
        self.h = _trim([c % p ** N for c in h])
        if len(self.g) - 1 != d:
            raise PrecisionError("alpha-part factor has wrong degree")
        # local factor structure from the Newton polygon
        segs = [s for s in newton_polygon(f, p) if s.slope < 0]
        factors: list[LocalFactor] = []
        for seg in segs:
            e = seg.slope.denominator
            res = _residual_polynomial(f, seg, p)
            for poly, mult in _factor_mod_p(res, p):
                deg = len(poly) - 1
                if deg >= 1:
                    factors.append(LocalFactor(e=e, f=deg, multiplicity=mult))
        self.factors = factors
        if sum(fa.degree for fa in factors) != d:
            raise ValidationError("local factor degrees do not add up")
        self.is_single = len(factors) == 1 and factors[0].multiplicity == 1
        if not self.is_single:
            self.warnings.append(
                "multiple-local-factor alpha part: element arithmetic disabled")
        if any(fa.multiplicity > 1 for fa in factors):
            self.warnings.append("index-divisibility-unverified")
        if self.is_single:
            self.e = factors[0].e
            self.f = factors[0].f
            self.norm = self.p ** self.f
            self._inv_alpha = self._compute_inv_alpha()
            va = self.valuation(self.alpha())
            self.alpha_valuation = va
            self.alpha_is_uniformiser = (va == 1)

    # ---- element constructors -------------------------------------------

    def _require_single(self) -> None:
        if not self.is_single:
            raise UnsupportedDigitModel(
                f"alpha part at p={self.p} has several local factors; "
                "element arithmetic is not supported")

    def element(self, shift: int, coeffs) -> "PadicElement":
        self._require_single()
        mod = self.p ** self.N
        vec = [int(c) % mod for c in coeffs]
        if len(vec) > self.alpha_degree:
            _, vec = _poly_divmod_monic(vec, self.g, mod)
        vec += [0] * (self.alpha_degree - len(vec))
        return PadicElement(self, shift, tuple(vec))

    def zero(self) -> "PadicElement":
        return self.element(0, [])

    def one(self) -> "PadicElement":
        return self.element(0, [1])

    def alpha(self) -> "PadicElement":
        if self.alpha_degree > 1:
            return self.element(0, [0, 1])
        # g = x - t: the positive-valuation root is t
        return self.element(0, [(-self.g[0]) % self.p ** self.N])

    def embed_rational_vector(self, coeffs) -> "PadicElement":
        """Image of sum c_i alpha^i for rational c_i."""
        self._require_single()
        p, mod = self.p, self.p ** self.N
        fracs = [Fraction(c) for c in coeffs]
        den = math.lcm(*[f.denominator for f in fracs]) if fracs else 1
        k = vp(den, p) if den > 1 else 0
        unit = den // p ** k
        uinv = pow(unit % mod, -1, mod)
        ints = [int(f * den) * uinv % mod for f in fracs]
        return self.element(-k, ints)

    def embed_field_element(self, x) -> "PadicElement":
        return self.embed_rational_vector(x.coeffs)

    def _compute_inv_alpha(self) -> "PadicElement":
        # 1/alpha = -(a_1 + a_2 alpha + ... + alpha^{n-1}) / a_0 in Q(alpha)
        f = self.min_poly
        a0 = Fraction(f[0])
        vec = [Fraction(-c) / a0 for c in f[1:]]
        return self.embed_rational_vector(vec)

    # ---- arithmetic ------------------------------------------------------

    def add(self, a: "PadicElement", b: "PadicElement") -> "PadicElement":
        s = min(a.shift, b.shift)
        mod = self.p ** self.N
        pa = self.p ** (a.shift - s)
        pb = self.p ** (b.shift - s)
        vec = [(x * pa + y * pb) % mod for x, y in zip(a.coeffs, b.coeffs)]
        return PadicElement(self, s, tuple(vec))

    def neg(self, a: "PadicElement") -> "PadicElement":
        mod = self.p ** self.N
        return PadicElement(self, a.shift, tuple((-x) % mod for x in a.coeffs))

    def mul(self, a: "PadicElement", b: "PadicElement") -> "PadicElement":
        mod = self.p ** self.N
        prod = _poly_mul_mod(list(a.coeffs), list(b.coeffs), mod)
        _, rem = _poly_divmod_monic(prod, self.g, mod)
        rem += [0] * (self.alpha_degree - len(rem))
        return PadicElement(self, a.shift + b.shift, tuple(rem))

    def mul_inv_alpha(self, a: "PadicElement") -> "PadicElement":
        return self.mul(a, self._inv_alpha)

    # ---- valuation and digits -------------------------------------------

    def valuation(self, a: "PadicElement") -> int | None:
        """Normalized valuation (uniformiser has valuation 1); None for an
        exact zero representative."""
        self._require_single()
        if all(c == 0 for c in a.coeffs):
            return None
        res = _resultant_int(self.g, list(a.coeffs))
        if res == 0:
            raise PrecisionError("resultant vanished at working precision")
        v = vp(abs(res), self.p)
        if v >= self.N - self.GUARD:
            raise PrecisionError(
                f"valuation {v} too close to precision p^{self.N}")
        if v % self.f:
            raise PrecisionError("non-integral normalized valuation; "
                                 "precision too low")
        return a.shift * self.e + v // self.f

    def abs_value(self, a: "PadicElement") -> float:
        v = self.valuation(a)
        if v is None:
            return 0.0
        return float(self.norm) ** (-v)

    def alpha_digits(self, a: "PadicElement", k: int) -> tuple[int, tuple[int, ...]]:
        """(start, digits): a = sum digits[i] * alpha^(start+i) + O(alpha^(start+k))
        with digits in {0..p-1}.  Requires residue degree 1 and alpha a
        uniformiser."""
        self._require_single()
        if self.f != 1:
            raise UnsupportedDigitModel(
                f"residue degree {self.f} > 1: no canonical digit alphabet")
        if not self.alpha_is_uniformiser:
            raise UnsupportedDigitModel("alpha is not a uniformiser")
        v = self.valuation(a)
        if v is None:
            return 0, tuple([0] * k)
        start = min(v, 0)
        z = a
        if start < 0:
            # clear the pole: digits are indexed from alpha^start
            al = self.alpha()
            for _ in range(-start):
                z = self.mul(z, al)
        digits = []
        for _ in range(k):
            d = self._residue_digit(z)
            digits.append(d)
            z = self.add(z, self.neg(self.element(0, [d])))
            z = self.mul_inv_alpha(z)
        return start, tuple(digits)

    def _residue_digit(self, z: "PadicElement") -> int:
        for c in range(self.p):
            w = self.add(z, self.neg(self.element(0, [c])))
            v = self.valuation(w)
            if v is None or v >= 1:
                return c
        raise PrecisionError("no residue digit matched; precision too low")

    def euclidean_model(self, start: int, digits: tuple[int, ...]) -> float:
        """Injection into R: sum digits[i] * Norm(p)^-(start+i+1)."""
        return sum(d * float(self.norm) ** (-(start + i + 1))
                   for i, d in enumerate(digits))

    def escalate(self) -> "AlphaPartRing":
        return AlphaPartRing(self.min_poly, self.p, self.N * 2)


def _factor_mod_p(coeffs: list[int], p: int) -> list[tuple[list[int], int]]:
    """Factor a polynomial over F_p; returns (low->high coeffs, multiplicity)
    for each nonconstant irreducible factor."""
    from sympy import GF, Poly, Symbol
    x = Symbol("x")
    poly = Poly(list(reversed([c % p for c in coeffs])), x, domain=GF(p))
    out = []
    for fac, mult in poly.factor_list()[1]:
        if fac.degree() >= 1:
            out.append(([int(c) % p for c in reversed(fac.all_coeffs())], mult))
    return out


def _resultant_int(g: list[int], a: list[int]) -> int:
    """Resultant of monic g and a over Z via a Sylvester determinant with
    exact rational elimination."""
    a = list(a)
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    dg, da = len(g) - 1, len(a) - 1
    if da < 0 or (da == 0 and a[0] == 0):
        return 0
    if da == 0:
        return a[0] ** dg
    size = dg + da
    S = [[Fraction(0)] * size for _ in range(size)]
    for i in range(da):
        for j, c in enumerate(reversed(g)):
            S[i][i + j] = Fraction(c)
    for i in range(dg):
        for j, c in enumerate(reversed(a)):
            S[da + i][i + j] = Fraction(c)
    det = Fraction(1)
    for c in range(size):
        piv = next((r for r in range(c, size) if S[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            S[c], S[piv] = S[piv], S[c]
            det = -det
        det *= S[c][c]
        inv = 1 / S[c][c]
        for r in range(c + 1, size):
            if S[r][c]:
                fct = S[r][c] * inv
                S[r] = [x - fct * y for x, y in zip(S[r], S[c])]
    assert det.denominator == 1
    return int(det)


@dataclass(frozen=True)
class PadicElement:
    ring: AlphaPartRing
    shift: int
    coeffs: tuple[int, ...]

    def __add__(self, other):
        return self.ring.add(self, other)

    def __sub__(self, other):
        return self.ring.add(self, self.ring.neg(other))

    def __neg__(self):
        return self.ring.neg(self)

    def __mul__(self, other):
        return self.ring.mul(self, other)

    def valuation(self):
        return self.ring.valuation(self)

    def __repr__(self):
        return f"PadicElement(p={self.ring.p}, shift={self.shift}, {list(self.coeffs)})"
