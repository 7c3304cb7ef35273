"""Central tiles: subtile clouds, the graph-directed decomposition, x-tiles,
the domain exchange, the induced line tiling and lattice-face maps."""
from fractions import Fraction

from pisotiles.numeration import sigma_integer_walks
from pisotiles.tiles import (broken_line, domain_exchange_cloud, e_one,
                             e_one_star, e_one_star_iterate,
                             gifs_decomposition, lattice_face_value,
                             line_tiling, subtile_values, t_ext_inverse,
                             x_tile_letters)


def test_gifs_term_counts(quad_unram):
    assert len(gifs_decomposition(quad_unram, 1)) == 8
    terms2 = gifs_decomposition(quad_unram, 2)
    assert len(terms2) == 1
    assert terms2[0].source == 1
    assert terms2[0].digit == quad_unram.delta((1, 1, 1, 1, 1))


def test_gifs_level_recursion(quad_ram):
    # level-k cloud of R(a) equals the union over incoming edges of
    # alpha * (level-(k-1) cloud of R(b)) + digit, exactly
    a_val = quad_ram.field.alpha()
    for k in range(1, 7):
        for a in range(1, quad_ram.n + 1):
            direct = subtile_values(quad_ram, a, k)
            rebuilt = set()
            for term in gifs_decomposition(quad_ram, a):
                for v in subtile_values(quad_ram, term.source, k - 1):
                    rebuilt.add(v * a_val + term.digit)
            assert direct == rebuilt


def test_subtile_levels_grow(quad_ram):
    sizes = [len(subtile_values(quad_ram, 1, k)) for k in range(6)]
    assert sizes[0] == 1
    assert all(a < b for a, b in zip(sizes, sizes[1:]))


def test_x_tile_letters(quad_ram):
    f = quad_ram.field
    assert x_tile_letters(quad_ram, f.zero()) == [1, 2]
    assert x_tile_letters(quad_ram, f.one()) == [1]       # 1 >= delta(2) = 1
    assert x_tile_letters(quad_ram, -f.one()) == []
    assert x_tile_letters(quad_ram, quad_ram.delta_letter(1)) == []


def test_domain_exchange_translates_by_letter_weight(quad_ram):
    pairs = domain_exchange_cloud(quad_ram, 3)
    for a, pts in pairs.items():
        shift = quad_ram.space.phi_prime(quad_ram.delta_letter(a))
        for z, w in pts:
            diff = w - (z + shift)
            assert quad_ram.space.norm(diff) < 1e-9
        assert len(pts) == len(subtile_values(quad_ram, a, 3))


def test_line_tiling_concatenates(quad_ram):
    tiles = line_tiling(quad_ram, 4)
    cursor = quad_ram.field.zero()
    for t in tiles:
        assert t.left == cursor
        cursor = cursor + quad_ram.delta_letter(t.letter)
    # letters follow the fixed point
    prefix = quad_ram.sub.fixed_point_prefix(len(tiles))
    assert tuple(t.letter for t in tiles) == prefix


def test_line_tiling_with_periodic_seed(nofin):
    tiles = line_tiling(nofin, 2)
    cursor = nofin.field.zero()
    for t in tiles:
        assert t.left == cursor
        cursor = cursor + nofin.delta_letter(t.letter)


def test_line_tiling_interval_endpoints_are_walk_values(quad_ram):
    # per letter c, the left endpoints at depth k are exactly the values of
    # length-k backward walks ending at c whose start letter is the seed
    tiles = line_tiling(quad_ram, 5)
    seed, _ = quad_ram.sub.periodic_point_seed()
    for c in range(1, quad_ram.n + 1):
        lefts = {t.left for t in tiles if t.letter == c}
        walk_vals = {v for v, b in sigma_integer_walks(quad_ram, c, 5) if b == seed}
        assert lefts == walk_vals


def test_geometric_endomorphism_counts(quad_ram):
    faces = e_one(quad_ram, (0, 0), 1)
    assert len(faces) == len(quad_ram.sub.image(1))


def test_dual_map_conjugate_to_inverse_numeration(quad_ram):
    # [x, a]* -> faces whose values are exactly the extended-map preimages
    faces = [((Fraction(0), Fraction(0)), a) for a in range(1, quad_ram.n + 1)]
    patch = e_one_star_iterate(quad_ram, faces, 3)
    for x, a in patch:
        val, _ = lattice_face_value(quad_ram, x, a)
        dual_vals = {(lattice_face_value(quad_ram, y, b)[0].coeffs, b)
                     for y, b in e_one_star(quad_ram, x, a)}
        inv_vals = {(z.coeffs, b) for z, b in t_ext_inverse(quad_ram, val, a)}
        assert dual_vals == inv_vals


def test_t_ext_inverse_steps_forward_again(quad_ram):
    f = quad_ram.field
    x = f.from_rational(Fraction(1, 4))
    alpha = f.alpha()
    for y, b in t_ext_inverse(quad_ram, x, 1):
        # forward: alpha y - delta(prefix) recovers x for the defining edge
        assert any((y * alpha - quad_ram.delta(e.prefix)) == x
                   for e in quad_ram.edges_from(b))


def test_broken_line_matches_abelianization(quad_ram):
    verts = broken_line(quad_ram, 30)
    w = quad_ram.sub.fixed_point_prefix(30)
    counts = [0, 0]
    for (vec, a), letter in zip(verts, w):
        assert vec == tuple(counts)
        assert a == letter
        counts[letter - 1] += 1
