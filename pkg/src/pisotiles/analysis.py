"""Tiling analysis: translation-set enumeration, the zero-expansion graph,
the finiteness property, and a sampled covering-degree estimate.

The enumeration engine lists faces (gamma, a) with gamma in V.Z[1/alpha],
0 <= gamma < delta(a), and window constraints at every non-dominant place.
It works level by level (gamma = alpha^-L * y with y in V), intersecting
the integer-coordinate lattice with valuation sublattices so the candidate
boxes stay small; two consecutive empty levels end the search.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import ResourceCapError, UnsupportedDigitModel, ValidationError
from .numberfield import FieldElement
from .embedding import EmbeddedPoint
from .system import PisotSystem
from .tiles import Face, t_ext_inverse

# -------------------------------------------------------------------------
# lattice machinery
# -------------------------------------------------------------------------


def _embedding_matrix(system: PisotSystem) -> list[list[float]]:
    """Rows: integer coordinate directions (the eigenvector basis of V);
    columns: dominant value, then each non-dominant Archimedean coordinate
    (complex places split into re/im)."""
    rows = []
    dom = system.space.dominant_root
    for v in system.eig.left:
        coeffs = [float(c) for c in v.coeffs]
        def ev(root):
            acc = 0j
            for c in reversed(coeffs):
                acc = acc * root + c
            return acc
        row = [ev(complex(dom, 0.0)).real]
        for pl in system.space.places:
            z = ev(pl.root)
            if pl.kind == "real":
                row.append(z.real)
            else:
                row.extend([z.real, z.imag])
        rows.append(row)
    return rows


def _refine_sublattice(system: PisotSystem, ring_index: int,
                       basis: list[list[int]], m: int) -> list[list[int]]:
    """Given integer vectors c (rows) with v(y(c)) >= m for every lattice
    element, return a basis of the sublattice with v >= m + 1."""
    ring = system.space.rings[ring_index]
    if ring.f != 1:
        raise UnsupportedDigitModel(
            "valuation sieve needs residue degree 1")
    p = ring.p
    inv_a = ring._inv_alpha
    residues = []
    for row in basis:
        y = system.eig.from_v_coordinates([Fraction(c) for c in row])
        z = ring.embed_field_element(y)
        if m >= 0:
            for _ in range(m):
                z = ring.mul(z, inv_a)
        else:
            al = ring.alpha()
            for _ in range(-m):
                z = ring.mul(z, al)
        residues.append(ring._residue_digit(z))
    if all(r == 0 for r in residues):
        return [row[:] for row in basis]
    piv = next(i for i, r in enumerate(residues) if r != 0)
    rinv = pow(residues[piv], -1, p)
    out = []
    for i, row in enumerate(basis):
        if i == piv:
            out.append([p * c for c in row])
        else:
            t = (residues[i] * rinv) % p
            out.append([c - t * d for c, d in zip(row, basis[piv])])
    return out


class LatticeEnumerator:
    """Enumerates faces in windows of the representation space."""

    def __init__(self, system: PisotSystem):
        self.system = system
        self.E = _embedding_matrix(system)
        self._sublattice_cache: dict[tuple[int, ...], list[list[int]]] = {}
        self.base_vals = system.d_p_values()

    def sublattice(self, targets: tuple[int, ...]) -> list[list[int]]:
        """Basis of {c in Z^n : v_p(y(c)) >= target_p for every ring}."""
        targets = tuple(max(t, b) for t, b in zip(targets, self.base_vals))
        key = targets
        if key in self._sublattice_cache:
            return self._sublattice_cache[key]
        n = self.system.n
        basis = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        for ri, (t, b) in enumerate(zip(targets, self.base_vals)):
            for m in range(b, t):
                basis = _refine_sublattice(self.system, ri, basis, m)
        self._sublattice_cache[key] = basis
        return basis

    def faces_in_window(self, arch_bound: float,
                        min_valuations: list[int],
                        max_levels: int = 40,
                        cap: int = 200_000,
                        dominant_upper: FieldElement | None = None
                        ) -> list[Face]:
        """All faces (x, a): x in V.Z[1/alpha], 0 <= x < delta(a), every
        non-dominant Archimedean coordinate within arch_bound (complex
        places: square modulus), and v_p(x) >= min_valuations[p]."""
        system = self.system
        n = system.n
        delta_max = system.max_delta() if dominant_upper is None else dominant_upper
        dmax_f = float(delta_max)
        alpha = system.field.alpha()
        inv_alpha = alpha.inverse()
        dom = system.space.dominant_root
        found: dict[tuple, FieldElement] = {}
        empty_streak = 0
        for L in range(max_levels):
            new = 0
            vmins = tuple(mv + L * r.alpha_valuation
                          for mv, r in zip(min_valuations, system.space.rings))
            basis = self.sublattice(vmins)
            # per-coordinate bounds for y = alpha^L x
            bounds = [(-(1e-9), dom ** L * dmax_f * (1 + 1e-9))]
            for pl in system.space.places:
                if pl.kind == "real":
                    r = arch_bound * abs(pl.root) ** L
                    bounds.append((-r * (1 + 1e-9) - 1e-9, r * (1 + 1e-9) + 1e-9))
                else:
                    r = math.sqrt(arch_bound) * abs(pl.root) ** L
                    r = r * (1 + 1e-9) + 1e-9
                    bounds.extend([(-r, r), (-r, r)])
            for g in self._integer_points(basis, bounds):
                c = [sum(g[i] * basis[i][j] for i in range(len(basis)))
                     for j in range(n)]
                if all(v == 0 for v in c) and L > 0:
                    continue
                y = system.eig.from_v_coordinates([Fraction(v) for v in c])
                x = y * (inv_alpha ** L) if L else y
                for a in range(1, n + 1):
                    if x.sign() < 0 or x >= system.delta_letter(a):
                        continue
                    key = (x.coeffs, a)
                    if key in found:
                        continue
                    if not self._exact_window_check(x, arch_bound, min_valuations):
                        continue
                    found[key] = x
                    new += 1
                if len(found) > cap:
                    raise ResourceCapError("face enumeration exceeded cap")
            empty_streak = 0 if new else empty_streak + 1
            if empty_streak >= 2:
                break
        return sorted(((x, a) for (_, a), x in found.items()),
                      key=lambda f: (f[1], float(f[0])))

    def _exact_window_check(self, x: FieldElement, arch_bound: float,
                            min_valuations: list[int]) -> bool:
        system = self.system
        tol = 1e-9
        for pl in system.space.places:
            if pl.abs_value(pl.evaluate(x.coeffs)) > arch_bound * (1 + tol) + tol:
                return False
        for mv, ring in zip(min_valuations, system.space.rings):
            z = ring.embed_field_element(x)
            v = ring.valuation(z)
            if v is not None and v < mv:
                return False
        return True

    def _integer_points(self, basis: list[list[int]], bounds):
        """Integer combinations g of the basis rows whose embedded image can
        lie in the bounding box; yields candidate g tuples (float screen,
        callers do exact checks)."""
        n = len(basis)
        G = [[sum(basis[i][k] * self.E[k][j] for k in range(n))
              for j in range(len(self.E[0]))] for i in range(n)]
        Ginv = _float_inverse(G)
        corners = product(*[(lo, hi) for lo, hi in bounds])
        los = [math.inf] * n
        his = [-math.inf] * n
        for corner in corners:
            g = [sum(corner[j] * Ginv[j][i] for j in range(n)) for i in range(n)]
            for i in range(n):
                los[i] = min(los[i], g[i])
                his[i] = max(his[i], g[i])
        ranges = [range(math.floor(lo - 0.51), math.ceil(hi + 0.51) + 1)
                  for lo, hi in zip(los, his)]
        total = 1
        for r in ranges:
            total *= len(r)
        if total > 3_000_000:
            raise ResourceCapError(f"candidate box too large ({total})")
        for g in product(*ranges):
            # float screen against the box with slack
            ok = True
            for j, (lo, hi) in enumerate(bounds):
                val = sum(g[i] * G[i][j] for i in range(n))
                slack = 1e-6 + 1e-9 * (abs(lo) + abs(hi))
                if val < lo - slack or val > hi + slack:
                    ok = False
                    break
            if ok:
                yield g


def _float_inverse(A: list[list[float]]) -> list[list[float]]:
    n = len(A)
    M = [row[:] + [1.0 if i == j else 0.0 for j in range(n)]
         for i, row in enumerate(A)]
    for c in range(n):
        piv = max(range(c, n), key=lambda r: abs(M[r][c]))
        if abs(M[piv][c]) < 1e-14:
            raise ValidationError("embedding matrix is singular")
        M[c], M[piv] = M[piv], M[c]
        d = M[c][c]
        M[c] = [x / d for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [row[n:] for row in M]


# -------------------------------------------------------------------------
# gamma ball and the zero-expansion graph
# -------------------------------------------------------------------------

def min_valuations_for_radius(system: PisotSystem, radius: float) -> list[int]:
    """Smallest integer valuations v with Norm^-v <= radius (slightly
    padded so boundary faces are kept)."""
    out = []
    for ring in system.space.rings:
        v = math.ceil(-math.log(radius * (1 + 1e-9)) / math.log(ring.norm) - 1e-12)
        out.append(v)
    return out


def gamma_in_ball(system: PisotSystem, radius: float | None = None,
                  cap: int = 200_000) -> list[Face]:
    """Faces (gamma, a) of the translation set with ||Phi'(gamma)|| <= radius
    (default: the tile bound M)."""
    if radius is None:
        radius = system.bound_m()
    enum = LatticeEnumerator(system)
    return enum.faces_in_window(arch_bound=radius,
                                min_valuations=min_valuations_for_radius(system, radius),
                                cap=cap)


@dataclass
class ZeroExpansionGraph:
    nodes: list[Face]
    edges: dict[int, list[int]]       # node index -> successor indices
    trimmed: list[Face]               # nodes surviving out-degree trimming
    property_f: str                   # "holds" | "fails"


def zero_expansion_graph(system: PisotSystem, radius: float | None = None,
                         cap: int = 200_000) -> ZeroExpansionGraph:
    """Nodes: ball faces; edge (g1,a1) -> (g2,a2) iff (g2,a2) is a preimage
    of (g1,a1) under the extended map.  Nodes that cannot start an infinite
    walk are trimmed; the finiteness property holds iff only gamma = 0
    survives."""
    nodes = gamma_in_ball(system, radius, cap=cap)
    index = {(x.coeffs, a): i for i, (x, a) in enumerate(nodes)}
    edges: dict[int, list[int]] = {}
    for i, (x, a) in enumerate(nodes):
        outs = []
        for (y, b) in t_ext_inverse(system, x, a):
            j = index.get((y.coeffs, b))
            if j is not None:
                outs.append(j)
        edges[i] = outs
    alive = set(edges)
    changed = True
    while changed:
        changed = False
        for i in list(alive):
            if not any(j in alive for j in edges[i]):
                alive.remove(i)
                changed = True
    trimmed = [nodes[i] for i in sorted(alive)]
    ok = all(x.is_zero() for x, _ in trimmed)
    return ZeroExpansionGraph(nodes=nodes, edges=edges, trimmed=trimmed,
                              property_f="holds" if ok else "fails")


def check_property_f(system: PisotSystem, radius: float | None = None) -> str:
    return zero_expansion_graph(system, radius).property_f


# -------------------------------------------------------------------------
# u-iterates
# -------------------------------------------------------------------------

def u_iterates(system: PisotSystem, k: int, cap: int = 500_000) -> list[set]:
    """Preimage iterates of the zero faces U = {(0, a)}: returns the list
    [U_0, U_1, ..., U_k] as sets of (coeffs, letter) keys; each contains the
    previous one."""
    zero = system.field.zero()
    cur: dict[tuple, Face] = {(zero.coeffs, a): (zero, a)
                              for a in range(1, system.n + 1)}
    out = [set(cur)]
    for _ in range(k):
        nxt: dict[tuple, Face] = {}
        for (x, a) in cur.values():
            for (y, b) in t_ext_inverse(system, x, a):
                nxt[(y.coeffs, b)] = (y, b)
        if len(nxt) > cap:
            raise ResourceCapError("u-iterate exceeded cap")
        cur = nxt
        out.append(set(cur))
    return out


# -------------------------------------------------------------------------
# covering degree
# -------------------------------------------------------------------------

@dataclass
class CoveringReport:
    samples: int
    histogram: dict[int, int]
    modal_degree: int
    modal_fraction: float
    ambiguous: int
    min_degree: int


class _TileMembership:
    """Resolution-bounded membership z in R(a): depth-k search through the
    GIFS, dividing by alpha at each level and pruning by the ball bound M
    (Archimedean, with slack) and by integrality (p-adic)."""

    def __init__(self, system: PisotSystem, depth: int):
        self.system = system
        self.depth = depth
        self.M = system.bound_m()
        self.d_p = system.d_p_values()
        space = system.space
        self.edge_data = {
            a: [(e.source, space.phi_prime(system.delta(e.prefix)))
                for e in system.edges_into(a)]
            for a in range(1, system.n + 1)}
        self.inv_roots = [1.0 / pl.root for pl in space.places]

    def contains(self, z: EmbeddedPoint, a: int, slack: float) -> bool:
        return self._walk(z, a, self.depth, slack)

    def _walk(self, z: EmbeddedPoint, a: int, depth: int, slack: float) -> bool:
        space = self.system.space
        for pl, c in zip(space.places, z.arch):
            if pl.abs_value(c) > self.M + slack:
                return False
        if depth == 0:
            return True
        for b, shift in self.edge_data[a]:
            w = z - shift
            ok = True
            pad = []
            for ring, c, dp in zip(space.rings, w.padic, self.d_p):
                cc = ring.mul_inv_alpha(c)
                v = ring.valuation(cc)
                if v is not None and v < dp:
                    ok = False
                    break
                pad.append(cc)
            if not ok:
                continue
            arch = tuple(c * ir for c, ir in zip(w.arch, self.inv_roots))
            if self._walk(EmbeddedPoint(arch, tuple(pad)), b, depth - 1, slack):
                return True
        return False


def covering_degree_estimate(system: PisotSystem, window: tuple[float, float],
                             samples: int = 10_000, level: int = 10,
                             seed: int = 0, slack: float = 1e-6,
                             padic_digits: int = 24) -> CoveringReport:
    """Sample points of the representation space with Archimedean part in
    the window and integral p-adic part; count the tiles R(a) + Phi'(gamma)
    containing each sample at the given resolution level.  Samples whose
    count changes between tight and loose slack are reported as ambiguous
    and excluded from the modal statistic."""
    if any(pl.kind == "complex" for pl in system.space.places):
        raise ValidationError("covering sampler currently handles totally "
                              "real Archimedean windows only")
    rng = random.Random(seed)
    M = system.bound_m()
    lo, hi = window
    enum = LatticeEnumerator(system)
    minvals = [min(0, d) for d in system.d_p_values()]
    faces = enum.faces_in_window(
        arch_bound=max(abs(lo), abs(hi)) + M + 1.0,
        min_valuations=min_valuations_for_radius(system, M + 1.0),
        cap=500_000)
    member = _TileMembership(system, level)
    face_data = []
    for x, a in faces:
        face_data.append((a, system.space.phi_prime(x)))
    hist: dict[int, int] = {}
    ambiguous = 0
    min_deg = None
    for _ in range(samples):
        arch = tuple(complex(rng.uniform(lo, hi), 0.0)
                     for _ in system.space.places)
        pad = []
        for ring in system.space.rings:
            digs = [rng.randrange(ring.p) for _ in range(padic_digits)]
            z = ring.zero()
            al = ring.alpha()
            w = ring.one()
            for d in digs:
                if d:
                    z = ring.add(z, ring.mul(ring.element(0, [d]), w))
                w = ring.mul(w, al)
            pad.append(z)
        z = EmbeddedPoint(arch, tuple(pad))
        tight = loose = 0
        for a, gamma in face_data:
            w = z - gamma
            near = all(pl.abs_value(c) <= M + 1.0
                       for pl, c in zip(system.space.places, w.arch))
            if not near:
                continue
            if member.contains(w, a, slack):
                loose += 1
                if member.contains(w, a, -slack):
                    tight += 1
        if tight != loose:
            ambiguous += 1
            continue
        hist[tight] = hist.get(tight, 0) + 1
        min_deg = tight if min_deg is None else min(min_deg, tight)
    counted = sum(hist.values())
    modal = max(hist, key=hist.get) if hist else 0
    return CoveringReport(samples=samples, histogram=hist, modal_degree=modal,
                          modal_fraction=(hist.get(modal, 0) / counted)
                          if counted else 0.0,
                          ambiguous=ambiguous,
                          min_degree=min_deg if min_deg is not None else 0)
