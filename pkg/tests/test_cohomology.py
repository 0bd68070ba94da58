from fractions import Fraction

import pytest

from permstab.cohomology import (
    F2Cochain,
    coboundary,
    coboundary_space,
    cochain_from_support,
    cocycle_expansion_constant,
    cocycle_space,
    cohomology_dim,
    cosystole,
    distance_to_subspace,
    weighted_norm,
    zero_cochain,
)
from permstab.complexes import (
    SimplicialComplex,
    boundary_of_simplex,
    full_triangle,
    projective_plane_six,
)
from permstab.errors import ExactSearchRefused, PermstabError
from permstab.rng import SplitMix64
from test_complexes import random_pure_complex


def random_cochain(rng, x, k):
    return F2Cochain(x, k, rng.next_uint64() & ((1 << x.n_cells(k)) - 1))


def test_coboundary_of_vertex_indicator():
    t = full_triangle()
    alpha = cochain_from_support(t, 0, [(0,)])
    assert set(coboundary(alpha).support()) == {(0, 1), (0, 2)}
    assert coboundary(zero_cochain(t, 0)).is_zero


def test_coboundary_squares_to_zero():
    rng = SplitMix64(9)
    # exhaustive on a small complex
    x = full_triangle()
    for bits in range(1 << 3):
        assert coboundary(coboundary(F2Cochain(x, 0, bits))).is_zero
    # randomized elsewhere
    for _ in range(20):
        y = random_pure_complex(rng, n_vertices=7, n_faces=5)
        for _ in range(50):
            for k in range(y.dim - 1):
                assert coboundary(coboundary(random_cochain(rng, y, k))).is_zero


def test_coboundary_top_dimension_rejected():
    with pytest.raises(PermstabError):
        coboundary(zero_cochain(full_triangle(), 2))


def test_weighted_norm_examples():
    x = boundary_of_simplex(3)
    assert weighted_norm(zero_cochain(x, 1)) == 0
    full = F2Cochain(x, 1, (1 << 6) - 1)
    assert weighted_norm(full) == 1
    t = full_triangle()
    assert weighted_norm(cochain_from_support(t, 0, [(0,)])) == Fraction(1, 3)


def test_norm_is_a_norm():
    rng = SplitMix64(13)
    x = projective_plane_six()
    for _ in range(200):
        a, b = random_cochain(rng, x, 1), random_cochain(rng, x, 1)
        assert weighted_norm(a ^ b) <= weighted_norm(a) + weighted_norm(b)
        assert (weighted_norm(a) == 0) == a.is_zero


def test_space_dimensions():
    t = full_triangle()
    assert cocycle_space(t, 0).dim == 1  # constants on a connected complex
    x = boundary_of_simplex(3)
    assert cocycle_space(x, 2).dim == 4
    assert coboundary_space(x, 2).dim == 3
    assert cohomology_dim(x, 2) == 1
    rp = projective_plane_six()
    assert cohomology_dim(rp, 1) == 1


def test_coboundaries_inside_cocycles():
    rng = SplitMix64(17)
    for _ in range(6):
        x = random_pure_complex(rng)
        for k in range(x.dim + 1):
            zk = cocycle_space(x, k)
            for row in coboundary_space(x, k).basis:
                assert zk.reduce(row) == 0


def test_distance_member_is_zero():
    x = boundary_of_simplex(3)
    z2 = cocycle_space(x, 2)
    alpha = next(iter(z2.elements()))
    res = distance_to_subspace(alpha, z2)
    assert res.value == 0 and res.witness == alpha and res.exact


def test_distance_examples():
    t = full_triangle()
    alpha = cochain_from_support(t, 0, [(0,)])
    res = distance_to_subspace(alpha, cocycle_space(t, 0))
    assert res.value == Fraction(1, 3) and res.witness.is_zero

    x = boundary_of_simplex(3)
    alpha = cochain_from_support(x, 2, [(0, 1, 2)])
    b2 = coboundary_space(x, 2)
    # independent oracle: scan the 8 coboundaries directly
    oracle = min(weighted_norm(alpha ^ b) for b in b2.elements())
    res = distance_to_subspace(alpha, b2)
    assert oracle == Fraction(1, 4) == res.value


def test_distance_reverse_enumeration_and_heuristic():
    rng = SplitMix64(19)
    x = projective_plane_six()
    b1 = coboundary_space(x, 1)
    for _ in range(15):
        alpha = random_cochain(rng, x, 1)
        res = distance_to_subspace(alpha, b1)
        # second, independent enumeration in reverse order
        rev = min(
            weighted_norm(alpha ^ v)
            for v in reversed(list(b1.elements()))
        )
        assert res.value == rev
        assert b1.contains(res.witness)
        assert weighted_norm(alpha ^ res.witness) == res.value
        heur = distance_to_subspace(alpha, b1, mode="heuristic")
        assert heur.value >= res.value and not heur.exact


def test_distance_tie_break_smallest_witness():
    # two edges of equal weight: nearest-subspace ties resolve to the lex-least witness
    path = SimplicialComplex.build_from_top_faces([(0, 1), (1, 2)])
    alpha = cochain_from_support(path, 1, [(0, 1)])
    other = cochain_from_support(path, 1, [(1, 2)])
    from permstab.cohomology import F2Subspace

    space = F2Subspace.from_rows(path, 1, [alpha.bits ^ other.bits])
    res = distance_to_subspace(alpha, space)
    # both members of the space are at distance 1/2; the zero witness is lex-least
    assert res.value == Fraction(1, 2) and res.witness.is_zero


def test_distance_refusal_above_limit():
    from itertools import combinations

    k9 = SimplicialComplex.build_from_top_faces(combinations(range(9), 2))
    space = cocycle_space(k9, 1)  # the whole 36-dim edge space
    assert space.dim > 24
    alpha = zero_cochain(k9, 1)
    with pytest.raises(ExactSearchRefused):
        distance_to_subspace(alpha, space)
    assert distance_to_subspace(alpha, space, mode="heuristic").value == 0


def test_expansion_constants():
    t = full_triangle()
    assert cocycle_expansion_constant(t, 0) == 2
    x = boundary_of_simplex(3)
    # frozen from a direct size-64 enumeration oracle
    assert cocycle_expansion_constant(x, 0) == Fraction(4, 3)
    assert cocycle_expansion_constant(x, 1) == 3


def test_expansion_matches_direct_enumeration():
    x = boundary_of_simplex(3)
    z1 = cocycle_space(x, 1)
    best = None
    for bits in range(1 << 6):
        alpha = F2Cochain(x, 1, bits)
        if z1.reduce(bits) == 0:
            continue
        num = weighted_norm(coboundary(alpha))
        den = min(weighted_norm(alpha ^ z) for z in z1.elements())
        ratio = num / den
        best = ratio if best is None else min(best, ratio)
    assert cocycle_expansion_constant(x, 1) == best


def test_expansion_infinite_marker():
    c3 = SimplicialComplex.build_from_top_faces([(0, 1), (1, 2), (0, 2)])
    assert cocycle_expansion_constant(c3, 1) is None  # no 2-cells: everything is a cocycle


def test_cosystole_values():
    x = boundary_of_simplex(3)
    # oracle: scan the 16 cocycles against the 8 coboundaries directly
    z2, b2 = cocycle_space(x, 2), coboundary_space(x, 2)
    oracle = min(
        min(weighted_norm(z ^ b) for b in b2.elements())
        for z in z2.elements()
        if not b2.contains(z)
    )
    assert cosystole(x, 2) == oracle == Fraction(1, 4)
    assert cosystole(full_triangle(), 1) is None  # the disk has no 1-cohomology
    # frozen from the 64-cocycle enumeration oracle: five edges out of fifteen
    assert cosystole(projective_plane_six(), 1) == Fraction(1, 3)


def test_cosystole_matches_direct_enumeration_on_rp2():
    rp = projective_plane_six()
    z1, b1 = cocycle_space(rp, 1), coboundary_space(rp, 1)
    oracle = min(
        min(weighted_norm(z ^ b) for b in b1.elements())
        for z in z1.elements()
        if not b1.contains(z)
    )
    assert cosystole(rp, 1) == oracle


def test_coboundary_squares_exhaustive_larger():
    x = boundary_of_simplex(4)  # 3-dimensional: degree-1 cochains compose twice
    assert x.n_cells(1) == 10
    for bits in range(1 << 10):
        assert coboundary(coboundary(F2Cochain(x, 1, bits))).is_zero
