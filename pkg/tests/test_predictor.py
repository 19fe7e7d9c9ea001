import math

import pytest

from walkdisc.predictor import (
    ASSEMBLY_FAMILIES,
    EVENT_TAGS,
    CertifiedValue,
    assemble_over_beta,
    assembly_closed_form,
    asymmetric_walk_limit,
    disc_limit_global,
    disc_limit_p,
    disc_limit_psquare,
    event_band,
    event_limit,
    predictor_identities,
    qpochhammer_even,
    rank_limit_rectangular,
    rank_limit_symmetric,
    walk_limit_global,
    walk_limit_p,
)

# reference constants, printed to 11 decimals (truncated, not rounded)
WALK_DIGITS = {
    2: 0.47336955677,
    3: 0.75752129361,
    5: 0.91393033780,
    7: 0.95674525798,
    11: 0.98279431682,
}
DISC_DIGITS = {
    2: 0.34426876856,
    3: 0.68176916425,
    5: 0.86894942632,
    7: 0.92921742127,
    11: 0.96981231057,
}


def brute_product(terms):
    return math.prod(1 - t for t in terms)


def test_certified_value_arithmetic():
    a = CertifiedValue(2.0, 0.1)
    b = CertifiedValue(3.0, 0.2)
    c = a * b
    assert c.value == 6.0 and c.error >= 0.1 * 3 + 0.2 * 2
    assert (a * 2).value == 4.0 and (2 * a).error >= 0.2
    assert (a / 4).value == 0.5
    assert a.contains(2.05) and not a.contains(2.2) and a.contains(2.2, slack=0.11)
    assert float(a) == 2.0 and "+/-" in str(a)


def test_qpochhammer_even_examples():
    assert abs(qpochhammer_even(2).value - brute_product(2.0 ** (-2 * k) for k in range(1, 80))) < 1e-15
    assert qpochhammer_even(2).contains(0.688537537, slack=1e-9)
    assert qpochhammer_even(3).contains(0.876560354, slack=1e-9)
    assert abs(qpochhammer_even(3).value - brute_product(3.0 ** (-2 * k) for k in range(1, 60))) < 1e-15
    assert abs(qpochhammer_even(1e9).value - 1) < 1e-15
    with pytest.raises(ValueError):
        qpochhammer_even(1)


@pytest.mark.parametrize("p", sorted(WALK_DIGITS))
def test_walk_limit_digits(p):
    v = walk_limit_p(p)
    assert abs(v.value - WALK_DIGITS[p]) < 1e-11
    assert v.error < 1e-12


def test_walk_limit_p11_is_truncated_not_rounded():
    v = walk_limit_p(11).value
    assert round(v, 11) != WALK_DIGITS[11]
    assert math.floor(v * 1e11) / 1e11 == pytest.approx(WALK_DIGITS[11], abs=1e-15)


@pytest.mark.parametrize("p", sorted(DISC_DIGITS))
def test_disc_limit_digits(p):
    v = disc_limit_p(2) if p == 2 else disc_limit_psquare(p)
    assert abs(v.value - DISC_DIGITS[p]) < 1e-11


def test_disc_psquare_needs_odd_prime():
    with pytest.raises(ValueError):
        disc_limit_psquare(2)
    with pytest.raises(ValueError):
        walk_limit_p(4)


def test_global_products():
    w = walk_limit_global()
    d = disc_limit_global()
    assert round(w.value, 4) == 0.2943 and w.error <= 1e-6
    assert round(d.value, 4) == 0.1686 and d.error <= 1e-6


def test_global_refinement_is_consistent():
    coarse = walk_limit_global(10_000)
    fine = walk_limit_global(1_000_000)
    assert fine.error < coarse.error
    assert abs(coarse.value - fine.value) <= coarse.error + fine.error
    assert fine.value < coarse.value  # every extra factor is below 1
    # only the factor at 2
    assert walk_limit_global(2).value == pytest.approx(walk_limit_p(2).value, rel=1e-14)
    dc, df = disc_limit_global(10_000), disc_limit_global(1_000_000)
    assert abs(dc.value - df.value) <= dc.error + df.error


def test_rank_limits():
    s0 = rank_limit_symmetric(2, 0)
    assert s0.contains(0.4194224418, slack=1e-10)
    assert rank_limit_symmetric(2, 1).value == pytest.approx(s0.value, rel=1e-15)
    assert rank_limit_symmetric(1e12, 0).value == pytest.approx(1.0)
    assert rank_limit_rectangular(2, 0, 0).contains(0.288788095, slack=1e-9)
    assert rank_limit_rectangular(2, 0, 1).contains(0.577576190, slack=1e-9)
    assert rank_limit_rectangular(1e12, 0, 0).value == pytest.approx(1.0)
    with pytest.raises(ValueError):
        rank_limit_symmetric(2, -1)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 9])
def test_rank_limits_sum_to_one(q):
    assert sum(rank_limit_symmetric(q, k).value for k in range(40)) == pytest.approx(1.0, abs=1e-12)
    for m in (0, 1, 2):
        assert sum(rank_limit_rectangular(q, k, m).value for k in range(40)) == pytest.approx(1.0, abs=1e-12)


def test_event_limit_examples():
    w = event_limit("W-trivial", 2)
    assert w.contains(0.629134, slack=1e-6)
    assert abs(w.value - 0.75 * brute_product(2.0 ** -(2 * i + 1) for i in range(1, 80))) < 1e-15
    assert event_limit("D-trivial", 2).value == pytest.approx(rank_limit_symmetric(2, 0).value, rel=1e-15)
    ratio = event_limit("W-Fq", 3).value / event_limit("W-trivial", 3).value
    assert ratio == pytest.approx(3**-2 * (1 - 3**-2), rel=1e-14)
    expected = (1 - 4**-2) * brute_product(4.0 ** -(2 * i + 1) for i in range(1, 40))
    assert event_limit("W-trivial", 2, 2).value == pytest.approx(expected, rel=1e-14)


def test_event_limits_are_probabilities():
    for tag in EVENT_TAGS:
        for p in (2, 3, 5):
            v = event_limit(tag, p).value
            assert 0 < v < 1
    # disjoint symmetric events never exceed 1 together
    for p in (2, 3):
        total = sum(event_limit(t, p).value for t in ("D-trivial", "D-Fq", "D-pair"))
        assert total < 1


def test_event_errors_and_bands():
    with pytest.raises(ValueError):
        event_limit("nope", 2)
    with pytest.raises(ValueError):
        event_limit("W-trivial", 2, 0)
    assert event_band("W-trivial", 2, 16) == 6 / 2**16
    assert event_band("D-pair", 3, 12) == 3 / 3**12
    assert event_band("W-trivial", 4, 10) == 6 / 4**10


@pytest.mark.parametrize("family", ASSEMBLY_FAMILIES)
def test_assembly_converges_to_closed_form(family):
    for p in (2, 3):
        assembled = assemble_over_beta(p, family, 14 if p == 2 else 10)
        closed = assembly_closed_form(p, family)
        assert abs(assembled.value - closed.value) <= assembled.error + closed.error
        assert abs(assembled.value - closed.value) < 1e-4


def test_assembly_refines():
    errs = [assemble_over_beta(2, "walk", d).error for d in (4, 8, 12)]
    assert errs[0] > errs[1] > errs[2]


def test_zeta_identity():
    z = assemble_over_beta(2, "zeta", 20, s=2)
    assert abs(z.value - 0.5) <= z.error and z.error < 1e-5
    z = assemble_over_beta(3, "zeta", 12, s=3)
    assert abs(z.value - 8 / 9) < 1e-5
    with pytest.raises(ValueError):
        assemble_over_beta(2, "zeta", 5, s=1)
    with pytest.raises(ValueError):
        assemble_over_beta(2, "other", 5)


def test_asymmetric_walk_limit():
    assert asymmetric_walk_limit(2).contains(0.433182, slack=1e-6)
    assert asymmetric_walk_limit(2).value == pytest.approx(1.5 * rank_limit_rectangular(2, 0, 0).value, rel=1e-14)
    assert asymmetric_walk_limit(3).contains(0.746835, slack=1e-6)
    assert asymmetric_walk_limit(1_000_003).value == pytest.approx(1.0, abs=1e-11)


def test_identities_hold():
    ids = predictor_identities()
    assert len(ids) >= 20
    for name, lhs, rhs in ids:
        assert abs(lhs - rhs) < 1e-12, name
