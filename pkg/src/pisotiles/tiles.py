"""Central tiles and their combinatorial scaffolding.

Subtile clouds are exact sigma-integer levels pushed through the diagonal
embedding; the GIFS structure, x-tiles, domain exchange, the induced tiling
of the expanding line, and the lattice-face maps (the geometric
endomorphism and its dual) all live here.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ResourceCapError, ValidationError
from .numberfield import FieldElement
from .embedding import EmbeddedPoint
from .numeration import sigma_integer_walks
from .substitution import PrefixEdge, Word, abelianization
from .system import PisotSystem

Face = tuple[FieldElement, int]
LatticeFace = tuple[tuple[Fraction, ...], int]


def t_ext_inverse(system: PisotSystem, x: FieldElement, a: int) -> list[Face]:
    """Preimages of an exact face under the extended map, one per prefix
    automaton edge into a (no domain restriction)."""
    inv_alpha = system.field.alpha().inverse()
    return [((x + system.delta(e.prefix)) * inv_alpha, e.source)
            for e in system.edges_into(a)]


def subtile_cloud(system: PisotSystem, a: int, level: int,
                  cap: int = 300_000) -> list[EmbeddedPoint]:
    """Level-k approximation of the subtile for letter a: the embedded
    values of all length-k backward walks ending at a."""
    values = {v for v, _ in sigma_integer_walks(system, a, level, cap=cap)}
    if len(values) > cap:
        raise ResourceCapError(f"cloud size {len(values)} exceeds cap {cap}")
    return [system.space.phi_prime(v) for v in values]


def subtile_values(system: PisotSystem, a: int, level: int,
                   cap: int = 300_000) -> set[FieldElement]:
    return {v for v, _ in sigma_integer_walks(system, a, level, cap=cap)}


@dataclass(frozen=True)
class GifsTerm:
    source: int            # subtile being inflated
    digit: FieldElement    # translation delta(p)
    edge: PrefixEdge


def gifs_decomposition(system: PisotSystem, a: int) -> list[GifsTerm]:
    """R(a) = union over edges b -> a of  alpha*R(b) + Phi'(delta(p))."""
    return [GifsTerm(source=e.source, digit=system.delta(e.prefix), edge=e)
            for e in system.edges_into(a)]


def x_tile_letters(system: PisotSystem, x: FieldElement) -> list[int]:
    """Letters contributing a subtile to the tile at x: those with
    x in [0, delta(a))."""
    if x.sign() < 0:
        return []
    return [a for a in range(1, system.n + 1)
            if x < system.delta_letter(a)]


def x_tile_cloud(system: PisotSystem, x: FieldElement, level: int,
                 cap: int = 300_000) -> dict[int, list[EmbeddedPoint]]:
    """Per-letter point clouds of the tile R_x = union of R(a) + Phi'(x)."""
    shift = system.space.phi_prime(x)
    out = {}
    for a in x_tile_letters(system, x):
        out[a] = [p + shift for p in subtile_cloud(system, a, level, cap)]
    return out


def domain_exchange_cloud(system: PisotSystem, level: int, cap: int = 300_000
                          ) -> dict[int, list[tuple[EmbeddedPoint, EmbeddedPoint]]]:
    """Pairs (z, z + Phi'(delta(a))) for each subtile: the exchange pushes
    the a-subtile by the embedded letter weight."""
    out = {}
    for a in range(1, system.n + 1):
        shift = system.space.phi_prime(system.delta_letter(a))
        pts = subtile_cloud(system, a, level, cap)
        out[a] = [(p, p + shift) for p in pts]
    return out


# -------------------------------------------------------------------------
# induced tiling of the expanding line
# -------------------------------------------------------------------------

@dataclass(frozen=True)
class LineInterval:
    letter: int
    left: FieldElement  # length is delta(letter)


def line_tiling(system: PisotSystem, depth: int, cap: int = 200_000
                ) -> list[LineInterval]:
    """Inflate-and-subdivide from the seed interval [0, delta(u0)] where u0
    is the periodic first-letter seed; depth steps of sigma^period."""
    seed, period = system.sub.periodic_point_seed()
    sub = system.sub if period == 1 else system.sub.power(period)
    alpha_pow = system.field.alpha() ** period
    tiles = [LineInterval(seed, system.field.zero())]
    for _ in range(depth):
        nxt: list[LineInterval] = []
        for t in tiles:
            cursor = t.left * alpha_pow
            for c in sub.image(t.letter):
                nxt.append(LineInterval(c, cursor))
                cursor = cursor + system.delta_letter(c)
        if len(nxt) > cap:
            raise ResourceCapError(f"line tiling exceeded cap {cap}")
        tiles = nxt
    return tiles


# -------------------------------------------------------------------------
# lattice faces: geometric endomorphism and its dual
# -------------------------------------------------------------------------

def _mat_vec(M, v):
    n = len(M)
    return tuple(sum(Fraction(M[i][j]) * v[j] for j in range(n))
                 for i in range(n))


def _inverse_matrix(M) -> list[list[Fraction]]:
    from .numberfield import _invert_rational_matrix
    return _invert_rational_matrix([[Fraction(c) for c in row] for row in M])


def e_one(system: PisotSystem, y, b: int) -> list[LatticeFace]:
    """Geometric endomorphism on faces: [y, b] -> sum over edges b -> a of
    [M y - P(p), a]."""
    n = system.n
    y = tuple(Fraction(c) for c in y)
    out = []
    for e in system.edges_from(b):
        pref = abelianization(e.prefix, n)
        My = _mat_vec(system.matrix, y)
        out.append((tuple(My[i] - pref[i] for i in range(n)), e.target))
    return out


def e_one_star(system: PisotSystem, x, a: int) -> list[LatticeFace]:
    """Dual map: [x, a]* -> sum over edges b -> a of [M^-1 (x + P(p)), b]*."""
    n = system.n
    x = tuple(Fraction(c) for c in x)
    Minv = _inverse_matrix(system.matrix)
    out = []
    for e in system.edges_into(a):
        pref = abelianization(e.prefix, n)
        xv = tuple(x[i] + pref[i] for i in range(n))
        out.append((_mat_vec(Minv, xv), e.source))
    return out


def e_one_star_iterate(system: PisotSystem, faces: list[LatticeFace],
                       k: int, cap: int = 500_000) -> list[LatticeFace]:
    """k-fold application of the dual map to a patch, with multiplicity
    collapsed (patches of the stepped surface are simple)."""
    cur = set(faces)
    for _ in range(k):
        nxt: set[LatticeFace] = set()
        for x, a in cur:
            nxt.update(e_one_star(system, x, a))
        if len(nxt) > cap:
            raise ResourceCapError("dual-map patch exceeded cap")
        cur = nxt
    return sorted(cur, key=lambda f: (f[1], f[0]))


def lattice_face_value(system: PisotSystem, x, a: int) -> Face:
    """Conjugacy with the numeration picture: [x, a] -> (<x, v>, a)."""
    val = system.eig.from_v_coordinates([Fraction(c) for c in x])
    return val, a


def broken_line(system: PisotSystem, length: int) -> list[tuple[tuple[int, ...], int]]:
    """Vertices of the broken line of the fixed point: partial
    abelianizations paired with the letter read next."""
    w = system.sub.fixed_point_prefix(length)
    out = []
    counts = [0] * system.n
    for a in w:
        out.append((tuple(counts), a))
        counts[a - 1] += 1
    return out
