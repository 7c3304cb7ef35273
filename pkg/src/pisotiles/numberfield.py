"""Exact arithmetic in Q(alpha) for a Pisot root alpha.

Elements are coefficient vectors over the power basis 1, alpha, ...,
alpha^(n-1) with Fraction entries.  Signs of real values are decided by
interval evaluation over a shrinking rational enclosure of alpha, so every
comparison is certified; no floating point enters any decision.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import sympy

from .errors import ValidationError
from .substitution import Substitution, Word, abelianization

Poly = tuple[Fraction, ...]  # low -> high, no trailing zeros (except (0,))


# --------------------------------------------------------------------------
# dense polynomial helpers over Fraction
# --------------------------------------------------------------------------

def poly_trim(c: list[Fraction]) -> Poly:
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_deg(p: Poly) -> int:
    return len(p) - 1 if any(p) else -1


def poly_add(p: Poly, q: Poly) -> Poly:
    m = max(len(p), len(q))
    return poly_trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0)
                      for i in range(m)])


def poly_scale(p: Poly, c: Fraction) -> Poly:
    return poly_trim([c * a for a in p])


def poly_mul(p: Poly, q: Poly) -> Poly:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return poly_trim(out)


def poly_divmod(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    if poly_deg(q) < 0:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    dq = poly_deg(q)
    quo = [Fraction(0)] * max(len(p) - dq, 1)
    lead = q[dq]
    for i in range(len(rem) - 1 - dq, -1, -1):
        c = rem[i + dq] / lead
        if c:
            quo[i] = c
            for j in range(dq + 1):
                rem[i + j] -= c * q[j]
    return poly_trim(quo), poly_trim(rem)


def poly_eval(p: Poly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_eval_interval(p: Poly, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    alo, ahi = Fraction(0), Fraction(0)
    for c in reversed(p):
        vals = (alo * lo, alo * hi, ahi * lo, ahi * hi)
        alo, ahi = min(vals) + c, max(vals) + c
    return alo, ahi


def poly_derivative(p: Poly) -> Poly:
    if len(p) == 1:
        return (Fraction(0),)
    return poly_trim([Fraction(i) * p[i] for i in range(1, len(p))])


def poly_ext_gcd(p: Poly, q: Poly) -> tuple[Poly, Poly, Poly]:
    """(g, u, v) with u*p + v*q = g."""
    r0, r1 = p, q
    u0, u1 = (Fraction(1),), (Fraction(0),)
    v0, v1 = (Fraction(0),), (Fraction(1),)
    while poly_deg(r1) >= 0:
        quo, rem = poly_divmod(r0, r1)
        r0, r1 = r1, rem
        u0, u1 = u1, poly_add(u0, poly_scale(poly_mul(quo, u1), Fraction(-1)))
        v0, v1 = v1, poly_add(v0, poly_scale(poly_mul(quo, v1), Fraction(-1)))
    return r0, u0, v0


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [p, poly_derivative(p)]
    while poly_deg(seq[-1]) > 0:
        _, rem = poly_divmod(seq[-2], seq[-1])
        if poly_deg(rem) < 0:
            break
        seq.append(poly_scale(rem, Fraction(-1)))
    return seq


def sturm_count(p: Poly, a: Fraction, b: Fraction) -> int:
    """Number of distinct real roots of p in (a, b]."""
    seq = sturm_sequence(p)

    def changes(x: Fraction) -> int:
        signs = [poly_eval(q, x) for q in seq]
        signs = [s for s in signs if s != 0]
        return sum(1 for s, t in zip(signs, signs[1:]) if (s > 0) != (t > 0))

    return changes(a) - changes(b)


# --------------------------------------------------------------------------
# minimal polynomial certification
# --------------------------------------------------------------------------

def char_poly(M: list[list[int]]) -> tuple[int, ...]:
    """Monic characteristic polynomial of an integer matrix, low -> high."""
    x = sympy.Symbol("x")
    cp = sympy.Matrix(M).charpoly(x)
    coeffs = list(reversed(cp.all_coeffs()))
    return tuple(int(c) for c in coeffs)


def is_irreducible(coeffs: tuple[int, ...]) -> bool:
    x = sympy.Symbol("x")
    expr = sum(int(c) * x**i for i, c in enumerate(coeffs))
    return sympy.Poly(expr, x, domain="ZZ").is_irreducible


def _cauchy_bound(coeffs: tuple[int, ...]) -> Fraction:
    lead = coeffs[-1]
    return 1 + max(Fraction(abs(c), abs(lead)) for c in coeffs[:-1])


@dataclass(frozen=True)
class PisotVerdict:
    is_pisot: bool
    is_unit: bool
    reason: str = ""


def pisot_verdict(coeffs: tuple[int, ...]) -> PisotVerdict:
    """Certify: monic, irreducible, one real root > 1, all conjugates of
    modulus < 1.  The conjugate check runs a Schur-Cohn recursion on
    f(x)/(x - alpha) with exact Q(alpha) arithmetic."""
    if coeffs[-1] != 1:
        return PisotVerdict(False, False, "not monic")
    n = len(coeffs) - 1
    if n < 1:
        return PisotVerdict(False, False, "degree 0")
    if not is_irreducible(coeffs):
        return PisotVerdict(False, False, "reducible over Q")
    p = tuple(Fraction(c) for c in coeffs)
    bound = _cauchy_bound(coeffs)
    if sturm_count(p, Fraction(1), bound) != 1:
        return PisotVerdict(False, False, "not exactly one real root > 1")
    if n == 1:
        return PisotVerdict(True, abs(coeffs[0]) == 1)
    field = NumberField(coeffs, _skip_checks=True)
    alpha = field.alpha()
    # synthetic division: f(x) = (x - alpha) * q(x)
    q = [field.zero()] * n
    q[n - 1] = field.one()
    for i in range(n - 1, 0, -1):
        q[i - 1] = field.from_rational(p[i]) + alpha * q[i]
    if not _roots_in_unit_disk(field, q):
        return PisotVerdict(False, False, "a conjugate has modulus >= 1")
    return PisotVerdict(True, abs(coeffs[0]) == 1)


def _roots_in_unit_disk(field: "NumberField", q: list["FieldElement"]) -> bool:
    # Schur-Cohn: strip leading zeros, then recurse on the reflected combo.
    while len(q) > 1 and q[-1].is_zero():
        q = q[:-1]
    if len(q) == 1:
        return not q[0].is_zero()
    a0, ad = q[0], q[-1]
    gap = ad * ad - a0 * a0
    s = gap.sign()
    if s <= 0:
        return False
    d = len(q) - 1
    q1 = [ad * q[i + 1] - a0 * q[d - 1 - i] for i in range(d)]
    if all(c.is_zero() for c in q1):
        # self-inversive remainder: cannot certify strict containment
        return False
    return _roots_in_unit_disk(field, q1)


# --------------------------------------------------------------------------
# the field
# --------------------------------------------------------------------------

class NumberField:
    """Q(alpha) for the dominant root alpha > 1 of a monic irreducible
    integer polynomial.  Keeps a rational enclosure of alpha that shrinks on
    demand; all sign decisions go through it."""

    def __init__(self, coeffs: tuple[int, ...], _skip_checks: bool = False):
        coeffs = tuple(int(c) for c in coeffs)
        if not _skip_checks:
            verdict = pisot_verdict(coeffs)
            if not verdict.is_pisot:
                raise ValidationError(f"not a Pisot polynomial: {verdict.reason}")
        self.coeffs = coeffs
        self.min_poly: Poly = tuple(Fraction(c) for c in coeffs)
        self.degree = len(coeffs) - 1
        lo, hi = Fraction(1), _cauchy_bound(coeffs)
        if poly_eval(self.min_poly, lo) >= 0 or poly_eval(self.min_poly, hi) <= 0:
            raise ValidationError("dominant-root bracketing failed")
        self._lo, self._hi = lo, hi
        self._power_table = self._build_power_table()

    def _build_power_table(self) -> list[Poly]:
        """alpha^k as power-basis vectors for k = n .. 2n-2."""
        n = self.degree
        table = []
        # alpha^n = -(a_0 + ... + a_{n-1} alpha^{n-1})
        cur = [-self.min_poly[i] for i in range(n)]
        table.append(tuple(cur))
        for _ in range(n - 2):
            nxt = [Fraction(0)] * n
            carry = cur[n - 1]
            for i in range(n - 1, 0, -1):
                nxt[i] = cur[i - 1] - carry * self.min_poly[i]
            nxt[0] = -carry * self.min_poly[0]
            cur = nxt
            table.append(tuple(cur))
        return table

    # enclosure management

    def refine_enclosure(self, width: Fraction) -> tuple[Fraction, Fraction]:
        while self._hi - self._lo > width:
            self._bisect()
        return self._lo, self._hi

    def _bisect(self) -> None:
        mid = (self._lo + self._hi) / 2
        v = poly_eval(self.min_poly, mid)
        if v == 0:
            raise ValidationError("rational root hit; polynomial reducible")
        if v < 0:
            self._lo = mid
        else:
            self._hi = mid

    @property
    def enclosure(self) -> tuple[Fraction, Fraction]:
        return self._lo, self._hi

    # constructors

    def element(self, coeffs) -> "FieldElement":
        vec = [Fraction(c) for c in coeffs]
        if len(vec) > self.degree:
            vec = list(self._reduce(vec))
        vec += [Fraction(0)] * (self.degree - len(vec))
        return FieldElement(self, tuple(vec))

    def zero(self) -> "FieldElement":
        return self.element([])

    def one(self) -> "FieldElement":
        return self.element([1])

    def alpha(self) -> "FieldElement":
        if self.degree == 1:
            return self.element([-self.coeffs[0]])
        return self.element([0, 1])

    def from_rational(self, q) -> "FieldElement":
        return self.element([Fraction(q)])

    def _reduce(self, vec: list[Fraction]) -> tuple[Fraction, ...]:
        n = self.degree
        out = list(vec[:n]) + [Fraction(0)] * max(0, n - len(vec))
        for k in range(n, len(vec)):
            c = vec[k]
            if c:
                row = self._power_table[k - n]
                for i in range(n):
                    out[i] += c * row[i]
        return tuple(out)

    def _sign(self, vec: tuple[Fraction, ...]) -> int:
        if all(c == 0 for c in vec):
            return 0
        p = poly_trim(list(vec))
        while True:
            lo, hi = poly_eval_interval(p, self._lo, self._hi)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            self._bisect()

    def float_alpha(self) -> float:
        lo, hi = self.refine_enclosure(Fraction(1, 10**20))
        return float((lo + hi) / 2)


class FieldElement:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs: tuple[Fraction, ...]):
        self.field = field
        self.coeffs = coeffs

    def __repr__(self) -> str:
        return f"FieldElement({list(self.coeffs)})"

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValidationError("element is irrational")
        return self.coeffs[0]

    def _coerce(self, other) -> "FieldElement | None":
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise ValidationError("elements from different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field,
                            tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field,
                            tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        prod = poly_mul(poly_trim(list(self.coeffs)), poly_trim(list(o.coeffs)))
        vec = self.field._reduce(list(prod))
        return FieldElement(self.field, vec)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        g, u, _ = poly_ext_gcd(poly_trim(list(self.coeffs)), self.field.min_poly)
        if poly_deg(g) != 0:
            raise ValidationError("non-invertible element; minimal polynomial "
                                  "is reducible")
        inv = poly_scale(u, 1 / g[0])
        return self.field.element(list(inv))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.field.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def sign(self) -> int:
        return self.field._sign(self.coeffs)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __abs__(self):
        return self if self.sign() >= 0 else -self

    def __float__(self) -> float:
        p = poly_trim(list(self.coeffs))
        f = self.field
        f.refine_enclosure(Fraction(1, 10**20))
        lo, hi = poly_eval_interval(p, f._lo, f._hi)
        return float((lo + hi) / 2)


# --------------------------------------------------------------------------
# eigen data and digit maps
# --------------------------------------------------------------------------

def _solve_nullspace(field: NumberField, A: list[list[FieldElement]]) -> list[FieldElement]:
    """One nonzero kernel vector of a singular square matrix over Q(alpha)."""
    n = len(A)
    M = [row[:] for row in A]
    piv_cols: list[int] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if M[i][c].sign() != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = M[r][c].inverse()
        M[r] = [x * inv for x in M[r]]
        for i in range(n):
            if i != r and M[i][c].sign() != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        piv_cols.append(c)
        r += 1
        if r == n:
            break
    free = [c for c in range(n) if c not in piv_cols]
    if not free:
        raise ValidationError("matrix is nonsingular; no eigenvector")
    fc = free[0]
    vec = [field.zero()] * n
    vec[fc] = field.one()
    for row, pc in zip(M, piv_cols):
        vec[pc] = -row[fc]
    return vec


@dataclass
class EigenData:
    field: NumberField
    matrix: list[list[int]]
    left: list[FieldElement]   # v with v M = alpha v
    right: list[FieldElement]  # u with M u = alpha u, <u, v> = 1
    _coord_inv: list[list[Fraction]] | None = None

    def delta(self, word: Word) -> FieldElement:
        counts = abelianization(word, len(self.left))
        out = self.field.zero()
        for c, v in zip(counts, self.left):
            if c:
                out = out + v * c
        return out

    def v_coordinates(self, x: FieldElement) -> tuple[Fraction, ...]:
        """Rational coordinates c with x = sum c_i v_i, via the inverse of
        the power-basis matrix of (v_1 .. v_n)."""
        n = self.field.degree
        if self._coord_inv is None:
            A = [[self.left[j].coeffs[i] for j in range(n)] for i in range(n)]
            self._coord_inv = _invert_rational_matrix(A)
        inv = self._coord_inv
        return tuple(sum(inv[i][j] * x.coeffs[j] for j in range(n))
                     for i in range(n))

    def from_v_coordinates(self, c) -> FieldElement:
        out = self.field.zero()
        for ci, v in zip(c, self.left):
            out = out + v * Fraction(ci)
        return out


def _invert_rational_matrix(A: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(A)
    M = [[Fraction(A[i][j]) for j in range(n)] +
         [Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] != 0), None)
        if piv is None:
            raise ValidationError("eigenvector basis is degenerate")
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for i in range(n):
            if i != c and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return [row[n:] for row in M]


def eigen_data(field: NumberField, M: list[list[int]],
               normalization: int | None = None) -> EigenData:
    """Left/right Perron eigenvectors over Q(alpha).  The left vector is
    scaled so its last entry is 1 (or the entry picked by ``normalization``,
    1-based); the right one so that <u, v> = 1."""
    n = len(M)
    alpha = field.alpha()
    el = field.element
    # left: (M^T - alpha I) v = 0
    A = [[el([M[j][i]]) - (alpha if i == j else field.zero())
          for j in range(n)] for i in range(n)]
    v = _solve_nullspace(field, A)
    idx = (normalization - 1) if normalization else (n - 1)
    if v[idx].is_zero():
        raise ValidationError("normalization entry of eigenvector vanishes")
    scale = v[idx].inverse()
    v = [x * scale for x in v]
    # right: (M - alpha I) u = 0
    B = [[el([M[i][j]]) - (alpha if i == j else field.zero())
          for j in range(n)] for i in range(n)]
    u = _solve_nullspace(field, B)
    dot = sum((a * b for a, b in zip(u, v)), field.zero())
    if dot.is_zero():
        raise ValidationError("eigenvector pairing degenerate")
    inv = dot.inverse()
    u = [x * inv for x in u]
    return EigenData(field=field, matrix=[row[:] for row in M], left=v, right=u)


# --------------------------------------------------------------------------
# digit set and the module V . Z[1/alpha]
# --------------------------------------------------------------------------

def digit_set(sub: Substitution, eig: EigenData) -> dict[FieldElement, list]:
    """Map digit value delta(prefix) -> prefix-automaton edges taking it."""
    out: dict[FieldElement, list] = {}
    for e in sub.prefix_automaton():
        val = eig.delta(e.prefix)
        out.setdefault(val, []).append(e)
    return out


@dataclass(frozen=True)
class Membership:
    member: bool
    level: int | None = None  # minimal L with alpha^L x in V


def membership_v_z_alpha_inv(eig: EigenData, x: FieldElement,
                             max_iter: int = 10000) -> Membership:
    """Decide x in V.Z[1/alpha] by iterating c -> M c on v-coordinates.
    Denominators can only shrink under the integer matrix, so the residues
    live in a finite state space and a repeat certifies non-membership."""
    M = eig.matrix
    n = len(M)
    c = list(eig.v_coordinates(x))
    seen: set = set()
    for L in range(max_iter):
        if all(f.denominator == 1 for f in c):
            return Membership(True, L)
        import math
        den = math.lcm(*[f.denominator for f in c])
        state = (den, tuple((f.numerator * (den // f.denominator)) % den
                            for f in c))
        if state in seen:
            return Membership(False, None)
        seen.add(state)
        c = [sum(Fraction(M[i][j]) * c[j] for j in range(n)) for i in range(n)]
    raise ValidationError("membership iteration exceeded cap")
