import itertools
from collections import Counter

import numpy as np
import pytest
from scipy import stats

from walkdisc.ensembles import (
    DEFAULT_SEED,
    EnsembleSpec,
    Seed,
    VectorSpec,
    field_of_order,
    sample_asymmetric01,
    sample_batch,
    sample_symmetric01,
    sample_symmetric_Fq,
    sample_truncated,
    sample_truncated_codes,
    sample_vector,
)
from walkdisc.fingerprint import fingerprint_from_codes
from walkdisc.kernels import field_rank, local_eliminate, table_matmul
from walkdisc.predictor import rank_limit_symmetric

CRIT = 1e-3  # reject below the 99.9% level


def test_seed_streams_are_deterministic_and_distinct():
    a = Seed(5, 0).rng().integers(0, 2**32, size=8)
    b = Seed(5, 0).rng().integers(0, 2**32, size=8)
    c = Seed(5, 1).rng().integers(0, 2**32, size=8)
    assert (a == b).all() and not (a == c).all()
    assert Seed().master == DEFAULT_SEED


def test_vector_spec_parse_and_labels():
    assert VectorSpec.parse("uniform") == VectorSpec("uniform01")
    assert VectorSpec.parse("ones").label == "ones"
    assert VectorSpec.parse("indicator:3") == VectorSpec("indicator", 3)
    assert VectorSpec.parse("indicator").index == 0
    assert VectorSpec("all_ones").deterministic and not VectorSpec().deterministic
    with pytest.raises(ValueError):
        VectorSpec.parse("gaussian")
    with pytest.raises(ValueError):
        VectorSpec("indicator", -1)


def test_vector_examples():
    rng = Seed(1).rng()
    assert sample_vector(VectorSpec("all_ones"), 3, rng).tolist() == [1, 1, 1]
    assert sample_vector(VectorSpec("indicator", 0), 3, rng).tolist() == [1, 0, 0]
    bits = sample_vector(VectorSpec(), 10, rng, size=10_000)
    assert abs(bits.mean() - 0.5) < 3 * 0.5 / np.sqrt(bits.size)
    with pytest.raises(ValueError):
        sample_vector(VectorSpec("indicator", 3), 3, rng)


def test_symmetric01_small_cases():
    rng = Seed(2).rng()
    one = sample_symmetric01(1, rng, size=20_000)
    assert set(one.reshape(-1).tolist()) == {0, 1}
    assert abs(one.mean() - 0.5) < 0.02
    two = sample_symmetric01(2, rng, size=40_000)
    assert (two == two.transpose(0, 2, 1)).all()
    codes = Counter(map(tuple, two.reshape(-1, 4)[:, [0, 1, 3]].tolist()))
    assert len(codes) == 8
    assert stats.chisquare(list(codes.values())).pvalue > CRIT


def test_symmetric01_diagonal_mean():
    M = sample_symmetric01(6, Seed(3).rng(), size=100_000 // 6 + 1)
    diag = np.diagonal(M, axis1=1, axis2=2)
    assert abs(diag.mean() - 0.5) < 0.005


def test_asymmetric01_is_not_symmetric():
    M = sample_asymmetric01(5, Seed(4).rng(), size=100)
    assert not (M == M.transpose(0, 2, 1)).all()


def test_batches_are_reproducible():
    spec = EnsembleSpec("sym_truncated", 4, p=3, beta=(0, 1))
    a = sample_batch(spec, Seed(9, 2).rng(), 50)
    b = sample_batch(spec, Seed(9, 2).rng(), 50)
    assert (a == b).all()


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(kind="sym01_loops", n=0),
        dict(kind="nope", n=2),
        dict(kind="sym_Fq", n=2, q=6),
        dict(kind="rect_Fq", n=2, q=4, m=-1),
        dict(kind="sym_truncated", n=2, p=4),
        dict(kind="sym_truncated", n=2, p=2, beta=(1, 0, 1)),
        dict(kind="sym_truncated_maximal_ideal", n=2, p=2, k=3),
        dict(kind="sym_truncated", n=2, p=2, beta_power=0),
    ],
)
def test_invalid_specs(kwargs):
    with pytest.raises(ValueError):
        EnsembleSpec(**kwargs)


def test_spec_shapes():
    s = EnsembleSpec("rect_Fq", 5, q=4, m=2)
    assert (s.rows, s.cols, s.residue_q) == (5, 7, 4)
    s = EnsembleSpec("sym_truncated_maximal_ideal", 6, p=3, beta=[1, 0, 1], k=2, beta_power=2)
    assert s.beta == (1, 0, 1) and s.rows == 2 and s.residue_q == 9
    assert sample_batch(s, Seed().rng(), 3).shape == (3, 2, 2)
    too_big = EnsembleSpec("sym_truncated_maximal_ideal", 2, p=3, beta=[1, 0, 1], beta_power=3, k=1)
    with pytest.raises(ValueError):
        sample_batch(too_big, Seed().rng(), 1)


def test_field_of_order():
    F = field_of_order(9)
    assert F.q == 9 and F.p == 3
    with pytest.raises(ValueError):
        field_of_order(12)


def test_symmetric_fq_small_cases():
    rng = Seed(5).rng()
    outcomes = Counter()
    for _ in range(4000):
        outcomes[sample_symmetric_Fq(1, 2, rng).entries[0][0].rep.coeffs] += 1
    assert len(outcomes) == 2 and stats.chisquare(list(outcomes.values())).pvalue > CRIT
    codes = sample_batch(EnsembleSpec("sym_Fq", 2, q=2), rng, 40_000)
    c = Counter(map(tuple, codes.reshape(-1, 4)[:, [0, 1, 3]].tolist()))
    assert len(c) == 8 and stats.chisquare(list(c.values())).pvalue > CRIT
    M = sample_symmetric_Fq(4, field_of_order(4), rng)
    assert M == M.transpose()


def test_symmetric_fq_rank_distribution_n20():
    q, n, N = 2, 20, 20_000
    codes = sample_batch(EnsembleSpec("sym_Fq", n, q=q), Seed(6).rng(), N)
    corank = n - field_rank(codes, field_of_order(q).tables)
    for k in range(3):
        freq = np.mean(corank == k)
        limit = rank_limit_symmetric(q, k)
        sigma = np.sqrt(limit.value * (1 - limit.value) / N)
        assert abs(freq - limit.value) <= 3 / q**n + 4 * sigma


def test_truncated_single_entry_uniform():
    spec = EnsembleSpec("sym_truncated", 1, p=2, beta=(0, 1), beta_power=2)
    codes = sample_truncated_codes(spec, Seed(7).rng(), 32_000).reshape(-1)
    counts = np.bincount(codes, minlength=16)
    assert (counts > 0).all() and len(counts) == 16
    assert stats.chisquare(counts).pvalue > CRIT


def test_truncated_residue_pushforward_uniform():
    spec = EnsembleSpec("sym_truncated", 3, p=3, beta=(2, 1))
    T = spec.ring
    codes = sample_truncated_codes(spec, Seed(8).rng(), 100_000 // 6 + 1)
    iu = np.triu_indices(3)
    res = T.tables.residue[codes[:, iu[0], iu[1]]].reshape(-1)
    assert stats.chisquare(np.bincount(res, minlength=T.q)).pvalue > CRIT


def test_truncated_symmetry_and_exact_matrix():
    spec = EnsembleSpec("sym_truncated", 4, p=2, beta=(1, 1, 1))
    A = sample_truncated(spec, Seed(9).rng())
    assert A == A.transpose() and A.ring == spec.ring
    asym = EnsembleSpec("asym_truncated", 4, p=2, beta=(1, 1, 1))
    B = sample_batch(asym, Seed(9).rng(), 50)
    assert not (B == B.transpose(0, 2, 1)).all()
    with pytest.raises(ValueError):
        sample_truncated(EnsembleSpec("sym01_loops", 2), Seed().rng())


def test_maximal_ideal_kind():
    spec = EnsembleSpec("sym_truncated_maximal_ideal", 5, p=3, beta=(0, 1), k=3)
    T = spec.ring
    codes = sample_batch(spec, Seed(10).rng(), 20_000)
    assert (T.tables.residue[codes] == 0).all()
    assert (codes == codes.transpose(0, 2, 1)).all()
    ideal = np.flatnonzero(T.tables.residue == 0)
    counts = np.bincount(codes[:, 0, 0], minlength=T.size)[ideal]
    assert stats.chisquare(counts).pvalue > CRIT


# distributional checks on the fingerprint


def _classes(T, codes, cache):
    key = codes.tobytes()
    if key not in cache:
        cache[key] = fingerprint_from_codes(T, codes).classes()
    return cache[key]


def _pooled(counts_a: Counter, expected: dict, total: int, floor: float = 5.0):
    """Observed and expected counts with small bins merged."""
    obs, exp, rest_o, rest_e = [], [], 0, 0.0
    for key, pr in expected.items():
        e = pr * total
        if e < floor:
            rest_o += counts_a.get(key, 0)
            rest_e += e
        else:
            obs.append(counts_a.get(key, 0))
            exp.append(e)
    if rest_e > 0:
        obs.append(rest_o)
        exp.append(rest_e)
    assert sum(counts_a.values()) == total and set(counts_a) <= set(expected)
    return np.array(obs), np.array(exp)


def test_invariance_law_under_congruence():
    spec = EnsembleSpec("sym_truncated", 2, p=2, beta=(0, 1), beta_power=2)
    T = spec.ring
    N = 100_000
    rng = Seed(11).rng()
    while True:
        G = rng.integers(0, T.size, size=(1, 2, 2))
        if field_rank(G, T.tables)[0] == 2:
            break
    A = sample_batch(spec, rng, N)
    B = table_matmul(table_matmul(np.swapaxes(G, 1, 2).repeat(N, 0), A, T.tables), G[0], T.tables)
    cache = {}
    ha = Counter(_classes(T, a, cache) for a in A)
    hb = Counter(_classes(T, b, cache) for b in B)
    keys = sorted(set(ha) | set(hb))
    table = np.array([[ha.get(k, 0) for k in keys], [hb.get(k, 0) for k in keys]])
    assert stats.chi2_contingency(table).pvalue > CRIT


@pytest.mark.parametrize("n,k,draws", [(3, 1, 3000), (3, 2, 1500), (4, 2, 800)])
def test_reduction_law_matches_maximal_ideal_block(n, k, draws):
    # conditional on residue corank k, coker(A) is distributed as the
    # cokernel of a k x k symmetric matrix with entries in the maximal ideal
    spec = EnsembleSpec("sym_truncated", n, p=2, beta=(0, 1), beta_power=2)
    T = spec.ring
    ideal = np.flatnonzero(T.tables.residue == 0)
    iu = list(zip(*np.triu_indices(k)))
    expected = Counter()
    for vals in itertools.product(ideal, repeat=len(iu)):
        R = np.zeros((k, k), dtype=np.int64)
        for (i, j), v in zip(iu, vals):
            R[i, j] = R[j, i] = v
        c = fingerprint_from_codes(T, R).classes()
        expected[c[1:]] += 1
    total = sum(expected.values())
    expected = {key: v / total for key, v in expected.items()}

    rng = Seed(12, n * 10 + k).rng()
    observed = Counter()
    got = 0
    while got < draws:
        A = sample_batch(spec, rng, 20_000)
        stop, _ = local_eliminate(A, T.tables)
        for a in A[n - stop == k][: draws - got]:
            fp = fingerprint_from_codes(T, a).classes()
            assert fp[0] == k
            observed[fp[1:]] += 1
            got += 1
    obs, exp = _pooled(observed, expected, draws)
    assert stats.chisquare(obs, exp).pvalue > CRIT
