import itertools
import random

import pytest
import sympy

from walkdisc.conditions import (
    AbelianGroupType,
    WalkVerdict,
    char_matrix_invariant_factors,
    charpoly_mod,
    cokernel_type,
    condition_d1,
    condition_d2,
    condition_wp,
    disc_condition_odd_squarefree,
    disc_exact_divisibility,
    disc_mod_p,
    length_identity_check,
    localize_group,
    walk_condition,
    walk_condition_module_oracle,
    walk_matrix,
)
from walkdisc.rings import valuation


def all_symmetric01(n):
    idx = [(i, j) for i in range(n) for j in range(i, n)]
    for bits in itertools.product((0, 1), repeat=len(idx)):
        M = [[0] * n for _ in range(n)]
        for (i, j), b in zip(idx, bits):
            M[i][j] = M[j][i] = b
        yield M


def exact_det(rows):
    return int(sympy.Matrix(rows).det())


def exact_disc(M):
    x = sympy.Symbol("x")
    phi = sympy.Matrix(M).charpoly(x).as_expr()
    return int(sympy.discriminant(phi, x))


# walk matrix


def test_walk_matrix_examples():
    assert walk_matrix([[0, 1], [1, 0]], [1, 0]).entries == ((1, 0), (0, 1))
    assert walk_matrix([[1, 0], [0, 1]], [3, 5]).entries == ((3, 3), (5, 5))
    assert walk_matrix([[1, 1], [1, 0]], [1, 0]).entries == ((1, 1), (0, 1))


def test_walk_matrix_columns_are_powers():
    rng = random.Random(3)
    for _ in range(20):
        n = rng.randint(1, 6)
        M = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
        z = [rng.randint(-3, 3) for _ in range(n)]
        W = sympy.Matrix(walk_matrix(M, z).entries)
        Ms, zs = sympy.Matrix(M), sympy.Matrix(z)
        for k in range(n):
            assert W[:, k] == Ms**k * zs


def test_walk_matrix_reduces_mod_m():
    W = walk_matrix([[3, 1], [1, 2]], [1, 1], 4)
    assert all(0 <= int(x) < 4 for r in W.entries for x in r)


def test_walk_matrix_dimension_mismatch():
    with pytest.raises(ValueError):
        walk_matrix([[1, 0], [0, 1]], [1, 0, 0])
    with pytest.raises(ValueError):
        walk_matrix([[1, 0, 0], [0, 1, 0]], [1, 0])


# walk verdicts


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_walk_condition_examples(p):
    assert walk_condition([[1, 1], [1, 0]], [1, 0], p).kind == "V0"
    assert walk_condition([[0, 1], [1, 0]], [1, 1], p).kind == "V2"


def test_walk_condition_exhaustive_n3_p2_frozen():
    counts = {"V0": 0, "V1": 0, "V2": 0}
    brute = {"V0": 0, "V1": 0, "V2": 0}
    for M in all_symmetric01(3):
        for z in itertools.product((0, 1), repeat=3):
            counts[walk_condition(M, z, 2).kind] += 1
            d = exact_det([list(r) for r in walk_matrix(M, z).entries])
            v = valuation(d, 2) if d else 99
            brute["V0" if v == 0 else "V1" if v == 1 else "V2"] += 1
    assert counts == brute
    assert counts == {"V0": 192, "V1": 6, "V2": 314}
    assert counts["V0"] + counts["V1"] == 198


@pytest.mark.parametrize("p", [2, 3, 5])
def test_walk_condition_matches_exact_det_and_module_oracle(p):
    for M in all_symmetric01(3):
        for z in itertools.product((0, 1), repeat=3):
            fast = walk_condition(M, z, p)
            assert fast == walk_condition_module_oracle(M, z, p)
            assert condition_wp(M, z, p) == fast.squarefree_at_p


def test_walk_v1_scalar_is_an_eigenvalue_of_the_cokernel():
    # a is an eigenvalue of M mod p, so det(M - aI) vanishes mod p
    rng = random.Random(11)
    seen = 0
    while seen < 30:
        n = rng.randint(2, 5)
        M = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                M[i][j] = M[j][i] = rng.randint(0, 1)
        z = [rng.randint(0, 1) for _ in range(n)]
        for p in (2, 3, 5):
            v = walk_condition(M, z, p)
            if v.kind != "V1":
                continue
            seen += 1
            assert 0 <= v.a < p
            Ma = sympy.Matrix(M) - v.a * sympy.eye(n)
            assert Ma.det() % p == 0


def test_walk_verdict_flag():
    assert WalkVerdict(2, "V0").squarefree_at_p
    assert WalkVerdict(2, "V1", 1).squarefree_at_p
    assert not WalkVerdict(2, "V2").squarefree_at_p


def test_module_oracle_examples():
    assert walk_condition_module_oracle([[0, 1], [1, 0]], [1, 0], 3).kind == "V0"
    assert walk_condition_module_oracle([[1, 1], [1, 0]], [1, 0], 2).kind == "V0"


def test_module_oracle_rejects_large_n():
    n = 13
    with pytest.raises(ValueError):
        walk_condition_module_oracle([[0] * n for _ in range(n)], [1] * n, 2)


# abelian groups


def test_localize_group_examples():
    G = AbelianGroupType.from_invariant_factors([12, 5])
    assert localize_group(G, 2) == AbelianGroupType(0, ((2, 2),))
    assert localize_group(G, 3) == AbelianGroupType(0, ((3, 1),))
    H = AbelianGroupType.from_invariant_factors([6], free_rank=1)
    L = localize_group(H, 5)
    assert L.free_rank == 1 and L.torsion == ()


def test_abelian_group_canonical_form():
    a = AbelianGroupType.from_invariant_factors([6, 2])
    b = AbelianGroupType.from_invariant_factors([2, 3, 2])
    assert a == b
    assert a.order() == 12
    assert str(AbelianGroupType(1, ((2, 2), (3, 1)))) == "Z + Z/2^2 + Z/3"
    assert AbelianGroupType(0).is_trivial()
    assert AbelianGroupType(1).order() is None


def test_cokernel_type_examples():
    assert cokernel_type([[2, 0], [0, 3]]) == AbelianGroupType.from_invariant_factors([6])
    assert cokernel_type([[1, 0], [0, 0]]) == AbelianGroupType(1)
    assert cokernel_type([[1, 1], [1, 1]]).free_rank == 1


# discriminants


def test_disc_mod_p_examples():
    assert not disc_mod_p([[0, 0], [0, 1]], 2)
    for p in (2, 3, 5, 7):
        assert disc_mod_p([[1, 0], [0, 1]], p)


@pytest.mark.parametrize("n,p", [(2, 2), (3, 2), (3, 3), (3, 5)])
def test_disc_mod_p_matches_exact_discriminant(n, p):
    for M in all_symmetric01(n):
        assert disc_mod_p(M, p) == (exact_disc(M) % p == 0)
        assert condition_d1(M, p) == (not disc_mod_p(M, p))


@pytest.mark.parametrize("p", [3, 5])
def test_disc_exact_divisibility_matches_exact_discriminant(p):
    for M in all_symmetric01(3):
        d = exact_disc(M)
        v = valuation(d, p) if d else 99
        verdict = disc_exact_divisibility(M, p)
        assert verdict.kind == ("coprime" if v == 0 else "exact" if v == 1 else "square")
        holds, a = condition_d2(M, p)
        assert holds == (v == 1)
        if holds:
            assert a == verdict.a


def test_disc_exact_divisibility_examples():
    assert disc_exact_divisibility([[0, 0], [0, 1]], 3).kind == "coprime"
    # (x-1)^3 mod 3
    assert disc_exact_divisibility([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3).kind == "square"
    # phi = (x-1)(x-4): disc = 9, so 3^2 divides it
    assert disc_exact_divisibility([[1, 0], [0, 4]], 3).kind == "square"
    # phi = (x-1)(x-4)-3 = x^2-5x+1: disc = 21
    v = disc_exact_divisibility([[1, 1], [3, 4]], 3)
    assert v.kind == "exact" and v.a == 1


def test_p2_is_rejected_for_odd_prime_tests():
    with pytest.raises(ValueError):
        disc_exact_divisibility([[1]], 2)
    with pytest.raises(ValueError):
        condition_d2([[1]], 2)


def test_disc_condition_odd_squarefree():
    per, ok = disc_condition_odd_squarefree([[1, 0], [0, 1]], [2, 3, 5])
    assert not ok and not any(per.values())
    # x^2 - x - 1: disc 5
    per, ok = disc_condition_odd_squarefree([[1, 1], [1, 0]], [2, 3, 5])
    assert ok and per == {2: True, 3: True, 5: True}


def test_condition_d2_random_unique_witness():
    rng = random.Random(5)
    for _ in range(150):
        n = rng.randint(2, 5)
        M = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                M[i][j] = M[j][i] = rng.randint(-2, 2)
        for p in (3, 5, 7):
            holds, a = condition_d2(M, p)  # raises if several witnesses exist
            v = disc_exact_divisibility(M, p)
            assert holds == (v.kind == "exact")


# characteristic matrix


def test_charpoly_mod_matches_sympy():
    x = sympy.Symbol("x")
    M = [[2, 1, 0], [1, 3, 1], [0, 1, 5]]
    coeffs = sympy.Poly(sympy.Matrix(M).charpoly(x).as_expr(), x).all_coeffs()[::-1]
    assert charpoly_mod(M, 49) == [int(c) % 49 for c in coeffs]


def test_char_matrix_factors_multiply_to_charpoly():
    rng = random.Random(9)
    for _ in range(30):
        n = rng.randint(1, 5)
        p = rng.choice([2, 3, 5])
        M = [[rng.randint(0, p - 1) for _ in range(n)] for _ in range(n)]
        prod = None
        for f in char_matrix_invariant_factors(M, p):
            prod = f if prod is None else prod * f
        assert tuple(prod.coeffs) == tuple(c % p for c in charpoly_mod(M, p))


def test_length_identity_examples():
    assert length_identity_check([[2, 0], [0, 2]], 3, (1, 1))  # beta = x - 2
    assert length_identity_check([[1, 0], [0, 1]], 5, (3, 1))  # beta = x - 2 does not divide
    with pytest.raises(ValueError):
        length_identity_check([[1]], 2, (1, 0, 1))  # x^2 + 1 = (x+1)^2 mod 2
