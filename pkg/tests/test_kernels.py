import numpy as np
import pytest

from walkdisc.conditions import walk_matrix
from walkdisc.ensembles import field_of_order, sample_symmetric01
from walkdisc.experiments import disc_success, exact_discriminant, walk_success
from walkdisc.fingerprint import fingerprint_from_codes
from walkdisc.kernels import (
    berkowitz_charpoly,
    capped_valuation,
    derivative_coeffs,
    field_rank,
    gf2_eliminate,
    gf2_rank,
    krylov_columns,
    local_eliminate,
    sylvester_batch,
    table_matmul,
    walk_valuation_p2,
)
from walkdisc.linalg import (
    ExactMatrix,
    charpoly_berkowitz,
    det_integer,
    rank_over_field,
    sylvester_matrix,
    valuation_verdict,
)
from walkdisc.rings import IntegersMod, TruncatedRing


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def test_krylov_matches_walk_matrix(rng):
    M = sample_symmetric01(7, rng, 50)
    z = rng.integers(0, 2, size=(50, 7))
    for mod in (4, 9, 121):
        W = krylov_columns(M, z, mod)
        for b in range(5):
            assert W[b].tolist() == [list(r) for r in walk_matrix(M[b], z[b], mod).entries]


def test_gf2_left_kernel(rng):
    X = rng.integers(0, 2, size=(200, 6, 6))
    X[:, 5] = X[:, 4] ^ X[:, 3]
    rank, left = gf2_eliminate(X.astype(np.uint8))
    for b in range(200):
        F2 = IntegersMod(2)
        assert rank[b] == rank_over_field(ExactMatrix.from_rows(F2, X[b].tolist()))
        for u in left[b, rank[b] :]:
            assert not (u @ X[b] % 2).any() and u.any()


def test_walk_valuation_p2_matches_exact(rng):
    M = sample_symmetric01(7, rng, 300)
    z = rng.integers(0, 2, size=(300, 7))
    W4 = krylov_columns(M, z, 4)
    got = walk_valuation_p2(W4)
    for b in range(300):
        Wz = [list(r) for r in walk_matrix(M[b], z[b]).entries]
        assert got[b] == valuation_verdict(det_integer(Wz), 2, 2)


@pytest.mark.parametrize("p", [3, 5, 11])
def test_capped_valuation_matches_exact(rng, p):
    A = rng.integers(0, p * p, size=(300, 6, 6))
    A[:100, 0] = p * A[:100, 1]  # force some high valuations
    for cap in (1, 2):
        got = capped_valuation(A, p, cap)
        for b in range(300):
            assert got[b] == valuation_verdict(det_integer(A[b].tolist()), p, cap)


@pytest.mark.parametrize("mod", [4, 9, 25])
def test_berkowitz_batch_matches_scalar(rng, mod):
    A = rng.integers(0, mod, size=(40, 5, 5))
    polys = berkowitz_charpoly(A, mod)
    for b in range(40):
        ref = charpoly_berkowitz(ExactMatrix.from_rows(IntegersMod(mod), A[b].tolist()))
        assert polys[b].tolist() == [int(c) for c in ref]


def test_sylvester_batch_matches_scalar(rng):
    phi = np.concatenate([rng.integers(0, 4, size=(10, 4)), np.ones((10, 1), dtype=np.int64)], axis=1)
    psi = derivative_coeffs(phi, 10**6)
    S = sylvester_batch(phi, psi)
    for b in range(10):
        ref = sylvester_matrix(phi[b].tolist(), (phi[b, 1:] * np.arange(1, 5)).tolist())
        assert S[b].tolist() == ref.rows()


@pytest.mark.parametrize("q", [2, 3, 9, 25])
def test_disc_success_matches_exact(rng, q):
    M = sample_symmetric01(5, rng, 200)
    got = disc_success(M, q)
    for b in range(200):
        assert bool(got[b]) == (exact_discriminant(M[b].tolist()) % q != 0)


@pytest.mark.parametrize("p", [2, 3])
def test_walk_success_matches_exact(rng, p):
    M = sample_symmetric01(6, rng, 200)
    z = rng.integers(0, 2, size=(200, 6))
    got = walk_success(M, z, p)
    for b in range(200):
        det = det_integer([list(r) for r in walk_matrix(M[b], z[b]).entries])
        assert bool(got[b]) == (det % (p * p) != 0)


@pytest.mark.parametrize("q", [3, 4, 9])
def test_field_rank_matches_scalar(rng, q):
    F = field_of_order(q)
    A = rng.integers(0, q, size=(100, 5, 6))
    A[:30, 4] = A[:30, 3]
    ranks = field_rank(A, F.tables)
    for b in range(100):
        E = ExactMatrix.from_rows(F, [[F.element(int(c)) for c in r] for r in A[b]], 6)
        assert ranks[b] == rank_over_field(E)


def test_gf2_rank_matches_field_rank(rng):
    A = rng.integers(0, 2, size=(100, 8, 8))
    assert np.array_equal(gf2_rank(A.astype(np.uint8)), field_rank(A, field_of_order(2).tables))


@pytest.mark.parametrize("p, beta", [(2, (0, 1)), (3, (0, 1))])
def test_local_elimination_preserves_cokernel(rng, p, beta):
    T = TruncatedRing(p, beta, 3)
    tab = T.tables
    # mostly non-units, so residual blocks are nontrivial
    maximal = np.flatnonzero(~tab.unit)
    A = rng.choice(maximal, size=(60, 3, 4))
    A[:, 0, 0] = rng.integers(0, T.size, size=60)
    stop, R = local_eliminate(A, tab)
    for b in range(60):
        full = fingerprint_from_codes(T, A[b]).classes()
        s = stop[b]
        if s == 3:
            assert full[0] == 0
            continue
        res = fingerprint_from_codes(T, R[b, s:, s:]).classes()
        assert res == full
        assert not tab.unit[R[b, s:, s:]].any()


def test_table_matmul(rng):
    T = TruncatedRing(2, (0, 1), 2)
    X = rng.integers(0, T.size, size=(5, 3, 2))
    Y = rng.integers(0, T.size, size=(2, 4))
    out = table_matmul(X, Y, T.tables)
    for b in range(5):
        for i in range(3):
            for j in range(4):
                acc = T.zero()
                for t in range(2):
                    acc = acc + T.from_index(int(X[b, i, t])) * T.from_index(int(Y[t, j]))
                assert T.index(acc) == out[b, i, j]
