from fractions import Fraction
from itertools import permutations

import pytest

from permstab.errors import PermstabError
from permstab.perms import (
    ErrPerm,
    SignedPerm,
    commute_with_sign_flip,
    compose,
    fix_fixed_point_free,
    fix_to_involution,
    hamming,
    signed_encode,
)
from permstab.rng import SplitMix64


def random_perm(rng, pts, size=None):
    pts = sorted(pts)
    images = list(pts)
    rng.shuffle(images)
    return ErrPerm(size if size is not None else len(pts), tuple(pts), tuple(images))


def all_involutions(n):
    for p in permutations(range(n)):
        perm = ErrPerm.from_one_line(p)
        if all(perm.apply(perm.apply(i)) == i for i in range(n)):
            yield perm


# -- hamming -----------------------------------------------------------------


def test_hamming_basics():
    ident = ErrPerm.identity(4)
    assert hamming(ident, ident) == 0
    small = ErrPerm.identity_on([1, 2, 3])
    big = ErrPerm.identity_on([1, 2, 3, 4])
    assert hamming(small, big) == Fraction(1, 4)
    swap = ErrPerm.from_mapping({1: 2, 2: 1, 3: 3, 4: 4})
    assert hamming(ErrPerm.identity_on([1, 2, 3, 4]), swap) == Fraction(2, 4)


def test_hamming_incomparable_rejected():
    a = ErrPerm.identity_on([0, 1])
    b = ErrPerm.identity_on([1, 2])
    with pytest.raises(PermstabError):
        hamming(a, b)


def test_hamming_triangle_inequality_mixed_domains():
    rng = SplitMix64(101)
    for _ in range(1000):
        n1 = 2 + rng.below(6)
        n2 = n1 + rng.below(4)
        n3 = n2 + rng.below(4)
        a = random_perm(rng, range(n1))
        b = random_perm(rng, range(n2))
        c = random_perm(rng, range(n3))
        assert hamming(a, c) <= hamming(a, b) + hamming(b, c)
        assert hamming(a, c) == hamming(c, a)


def test_composition_distance_bound():
    rng = SplitMix64(103)
    for _ in range(1000):
        n = 2 + rng.below(6)
        m = n + rng.below(4)
        s1, s2 = random_perm(rng, range(n)), random_perm(rng, range(n))
        z1, z2 = random_perm(rng, range(m)), random_perm(rng, range(m))
        lhs = hamming(compose(s1, s2), compose(z1, z2))
        assert lhs <= hamming(s1, z1) + hamming(s2, z2)


def test_error_absorption():
    partial = ErrPerm(4, (0, 1), (1, 0))  # undefined on 2, 3
    ident = ErrPerm.identity(4)
    out = compose(partial, ident)
    assert out.apply(2) == -1 and out.apply(0) == 1
    # once lost, a point stays lost
    assert compose(ident, out).domain == out.domain


# -- nearest involution --------------------------------------------------------


def test_fix_to_involution_examples():
    swap = ErrPerm.from_cycle((0, 1), 2)
    assert fix_to_involution(swap) == swap

    three = ErrPerm.from_cycle((0, 1, 2), 3)
    tau = fix_to_involution(three)
    assert tau == ErrPerm.identity(3)
    assert hamming(three, tau) == 1 == hamming(compose(three, three), ErrPerm.identity(3))

    mixed = ErrPerm.from_mapping({0: 1, 1: 0, 2: 3, 3: 4, 4: 2})
    tau = fix_to_involution(mixed)
    assert tau == ErrPerm.from_mapping({0: 1, 1: 0, 2: 2, 3: 3, 4: 4})
    assert hamming(mixed, tau) == Fraction(3, 5)


def test_fix_to_involution_identity_exhaustive():
    ident6 = ErrPerm.identity(6)
    for p in permutations(range(6)):
        zeta = ErrPerm.from_one_line(p)
        tau = fix_to_involution(zeta)
        assert compose(tau, tau) == ident6
        assert hamming(zeta, tau) == hamming(compose(zeta, zeta), ident6)


# -- fixed point removal --------------------------------------------------------


def test_fix_fixed_point_free_examples():
    swap = ErrPerm.from_cycle((0, 1), 2)
    assert fix_fixed_point_free(swap) == swap

    one = ErrPerm.identity(1)
    out = fix_fixed_point_free(one)
    assert out.size == 2 and out.apply(0) == 1 and out.apply(1) == 0
    assert hamming(one, out) == 1

    partial_fix = ErrPerm.from_mapping({0: 1, 1: 0, 2: 2, 3: 3})
    out = fix_fixed_point_free(partial_fix)
    assert out == ErrPerm.from_mapping({0: 1, 1: 0, 2: 3, 3: 2})
    assert hamming(partial_fix, out) == Fraction(1, 2)


def test_fix_fixed_point_free_exhaustive():
    for n in range(1, 9):
        for zeta in all_involutions(n):
            out = fix_fixed_point_free(zeta)
            assert out.size == 2 * ((n + 1) // 2)
            assert out.is_total and out.is_bijection
            assert all(out.apply(x) != x for x in out.domain)
            assert all(out.apply(out.apply(x)) == x for x in out.domain)
            n_fixed = len(zeta.fixed_points())
            assert hamming(zeta, out) <= Fraction(n_fixed + 1, n)
            eps = Fraction(n_fixed, n)
            assert hamming(zeta, out) <= 2 * eps or n_fixed == 0

    with pytest.raises(PermstabError):
        fix_fixed_point_free(ErrPerm.from_cycle((0, 1, 2), 3))


# -- sign flip commutation -------------------------------------------------------


def test_sign_flip_structure():
    flip = SignedPerm.sign_flip(3)
    assert flip.commutes_with_flip()
    assert flip.apply(signed_encode(1, 2)) == signed_encode(-1, 2)


def test_commute_examples():
    flip = SignedPerm.sign_flip(2)
    assert commute_with_sign_flip(flip) == flip  # central element

    # swaps +0 <-> +1 while fixing -0, -1: nothing is sign-consistent
    zeta = SignedPerm(2, (2, 1, 0, 3))
    sigma = commute_with_sign_flip(zeta)
    assert sigma.to_err_perm() == ErrPerm.identity(4)
    d = hamming(sigma.to_err_perm(), zeta.to_err_perm())
    comm = _flip_commutator(zeta)
    assert d == Fraction(1, 2) and hamming(comm, ErrPerm.identity(4)) == 1
    assert d <= hamming(comm, ErrPerm.identity(4))


def _flip_commutator(zeta: SignedPerm) -> ErrPerm:
    flip = SignedPerm.sign_flip(zeta.n).to_err_perm()
    z = zeta.to_err_perm()
    return compose(compose(flip, z), compose(flip.inverse(), z.inverse()))


def test_commute_exhaustive_small():
    ident6 = ErrPerm.identity(6)
    for p in permutations(range(6)):
        zeta = SignedPerm(3, p)
        sigma = commute_with_sign_flip(zeta)
        assert sigma.commutes_with_flip()
        bound = hamming(_flip_commutator(zeta), ident6)
        assert hamming(sigma.to_err_perm(), zeta.to_err_perm()) <= bound
        if zeta.commutes_with_flip():
            assert sigma == zeta


def test_commute_repair_is_inverse_equivariant():
    # the cover machinery needs repaired inverse pairs to stay mutually
    # inverse; the increasing-order extension guarantees it
    for p in permutations(range(6)):
        zeta = SignedPerm(3, p)
        inv = SignedPerm.from_err_perm(zeta.to_err_perm().inverse())
        lhs = commute_with_sign_flip(inv).to_err_perm()
        rhs = commute_with_sign_flip(zeta).to_err_perm().inverse()
        assert lhs == rhs
