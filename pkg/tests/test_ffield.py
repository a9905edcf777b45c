"""Finite-field towers and m-th-power class tables."""

import collections

import numpy as np
import pytest

from piecel.cyclo import split_prime
from piecel.ffield import PowerClassTable, build_extension, solution_count_mth_root


def all_ideals(m, primes):
    for p in primes:
        for P in split_prime(p, m):
            if not P.ramified:
                yield P


# ---------------------------------------------------------------------------
# field structure


@pytest.mark.parametrize("p,i", [(7, 1), (7, 2), (7, 3), (5, 1), (5, 2), (13, 1)])
def test_extension_sizes_and_eta_order(p, i):
    for m in (3, 4):
        for P in split_prime(p, m):
            if P.ramified:
                continue
            F = build_extension(P, i, seed=3)
            assert F.q == P.q**i
            assert F.pow_scalar(F.eta, m) == 1
            assert all(F.pow_scalar(F.eta, k) != 1 for k in range(1, m))


def test_canonical_presentation_for_inert_i1():
    P = split_prime(5, 3)[0]
    F = build_extension(P, 1, seed=9)
    assert F.modulus == (1, 1, 1) and F.eta == 5  # eta = w itself


def test_frobenius_fixed_field():
    P = split_prime(5, 3)[0]
    F = build_extension(P, 1, seed=0)
    fixed = [a for a in range(F.q) if F.pow_scalar(a, 5) == a]
    assert fixed == [0, 1, 2, 3, 4]


def test_lift_is_an_embedding():
    P = split_prime(5, 3)[0]
    F = build_extension(P, 2, seed=1)
    base = build_extension(P, 1, seed=1)
    for a in range(25):
        for b in range(25):
            ab = base.mul_scalar(a, b)
            assert F.lift(ab) == F.mul_scalar(F.lift(a), F.lift(b))
    # lift(w) satisfies Phi_3
    lw = F.lift(5)
    s = F.mul_scalar(lw, lw)
    total = (F.decode(np.array([s])) + F.decode(np.array([lw]))) % 5
    total[0, 0] = (total[0, 0] + 1) % 5
    assert not total.any()


def test_bulk_mul_matches_scalar_mul():
    P = split_prime(7, 4)[0]
    F = build_extension(P, 2, seed=2)
    rng = np.random.default_rng(0)
    a = rng.integers(0, F.q, size=200)
    b = rng.integers(0, F.q, size=200)
    prod = F.encode(F.mul(F.decode(a), F.decode(b)))
    for x, y, z in zip(a, b, prod):
        assert F.mul_scalar(int(x), int(y)) == int(z)


def test_mul_by_scalar_matches():
    P = split_prime(5, 3)[0]
    F = build_extension(P, 2, seed=5)
    rng = np.random.default_rng(1)
    a = rng.integers(0, F.q, size=300)
    s = 421 % F.q
    out = F.encode(F.mul_by_scalar(F.decode(a), s))
    for x, z in zip(a, out):
        assert F.mul_scalar(int(x), s) == int(z)


# ---------------------------------------------------------------------------
# power classes


@pytest.mark.parametrize("m", [2, 3, 4])
def test_class_table_definition(m):
    primes = [5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43]
    for P in all_ideals(m if m > 2 else 2, primes):
        for i in (1, 2):
            F = build_extension(P, i, seed=m)
            if (F.q - 1) % m != 0:
                continue
            if F.q > 2000:
                continue
            tbl = PowerClassTable(F, m)
            e = (F.q - 1) // m
            for a in range(1, F.q):
                assert F.pow_scalar(a, e) == F.pow_scalar(F.eta, int(tbl.table[a]))


def test_class_histogram_is_balanced():
    P = split_prime(5, 3)[0]
    F = build_extension(P, 2, seed=0)
    tbl = PowerClassTable(F, 3)
    hist = collections.Counter(tbl.table.tolist())
    assert hist[-1] == 1
    assert hist[0] == hist[1] == hist[2] == (F.q - 1) // 3


def test_fiber_sizes_partition_the_field():
    # sum over a of #{y : y^m = a} = q, for every field where m | q-1
    for m in (2, 3, 4):
        for P in all_ideals(m, [7, 11, 13]):
            F = build_extension(P, 1, seed=0)
            if (F.q - 1) % m:
                continue
            tbl = PowerClassTable(F, m)
            total = sum(solution_count_mth_root(a, m, tbl) for a in range(F.q))
            assert total == F.q


def test_fiber_sizes_brute_force():
    P = next(Q for Q in split_prime(13, 3) if Q.zeta_image < 13)
    F = build_extension(P, 1, seed=0)
    tbl = PowerClassTable(F, 3)
    for a in range(13):
        brute = sum(1 for y in range(13) if pow(y, 3, 13) == a)
        assert solution_count_mth_root(a, 3, tbl) == brute


def test_m_not_dividing_errors():
    P = split_prime(7, 3)[0]
    F = build_extension(P, 1, seed=0)
    with pytest.raises(ValueError):
        PowerClassTable(F, 4)  # 4 does not divide 6


def test_seed_changes_modulus_not_classes():
    # class histograms are intrinsic, whatever irreducible is drawn
    P = split_prime(5, 3)[0]
    hists = []
    for seed in (1, 2, 3):
        F = build_extension(P, 2, seed=seed)
        tbl = PowerClassTable(F, 3)
        hists.append(collections.Counter(tbl.table.tolist()))
    assert hists[0] == hists[1] == hists[2]
