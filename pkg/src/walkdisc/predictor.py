"""Closed-form limiting probabilities with certified truncation errors.

Every function returns a CertifiedValue whose error bound covers both the
truncation of infinite products (through explicit tail bounds) and a
rounding allowance of 1e-15 per floating point operation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .polynomials import irreducible_count
from .rings import is_prime

_EPS = 1e-15
# Products are truncated once the next term is below this size.
_CUT = 1e-18


@dataclass(frozen=True)
class CertifiedValue:
    """A real number with a bound on its distance to the true limit."""

    value: float
    error: float

    def __float__(self):
        return self.value

    def __str__(self):
        return f"{self.value:.14f} +/- {self.error:.1e}"

    def contains(self, x: float, slack: float = 0.0) -> bool:
        return abs(self.value - x) <= self.error + slack

    def __mul__(self, other):
        if isinstance(other, CertifiedValue):
            v = self.value * other.value
            e = abs(self.value) * other.error + abs(other.value) * self.error + self.error * other.error
            return CertifiedValue(v, e + _EPS * abs(v))
        return CertifiedValue(self.value * other, self.error * abs(other) + _EPS * abs(self.value * other))

    __rmul__ = __mul__

    def __truediv__(self, c: float):
        return CertifiedValue(self.value / c, self.error / abs(c) + _EPS * abs(self.value / c))


def _product(q: float, start: int, step: int = 1) -> CertifiedValue:
    """prod_{j >= 0} (1 - q^-(start + j*step)) for q > 1 and start >= 1."""
    if q <= 1:
        raise ValueError("base must exceed 1")
    logs = []
    e = start
    while True:
        t = q ** (-e)
        if t < _CUT:
            break
        logs.append(math.log1p(-t))
        e += step
    # remaining terms: |sum log(1 - t)| <= sum t / (1 - t) <= 2 t_first / (1 - q^-step)
    tail = 2 * q ** (-e) / (1 - q ** (-step))
    v = math.exp(math.fsum(logs))
    return CertifiedValue(v, v * (tail + _EPS * (len(logs) + 2)))


def qpochhammer_even(p: float) -> CertifiedValue:
    """prod_{k >= 1} (1 - p^(-2k))."""
    if p < 2:
        raise ValueError("p must be >= 2")
    return _product(p, 2, 2)


def _check_prime(p: int):
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def walk_limit_p(p: int) -> CertifiedValue:
    """Limit of P(p^2 does not divide det W) for random symmetric 0/1 M and uniform zeta."""
    _check_prime(p)
    return (1 - p**-2 - p**-3 + p**-4) * qpochhammer_even(p)


def disc_limit_p(p: int) -> CertifiedValue:
    """Limit of P(p does not divide the discriminant of the characteristic polynomial)."""
    _check_prime(p)
    return (1 - 1 / p) * qpochhammer_even(p)


def disc_limit_psquare(p: int) -> CertifiedValue:
    """Limit of P(p^2 does not divide the discriminant), p odd."""
    _check_prime(p)
    if p == 2:
        raise ValueError("the p^2 formula needs an odd prime")
    return _disc_psquare_factor(p) * qpochhammer_even(p)


def _disc_psquare_factor(p: int) -> float:
    return 1 - (3 * p - 1) / (p * p * (p + 1))


@lru_cache(maxsize=4)
def _primes_upto(P: int) -> np.ndarray:
    sieve = np.ones(P + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, math.isqrt(P) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    return np.flatnonzero(sieve).astype(np.float64)


def _log_qpoch_even(ps: np.ndarray, K: int = 30) -> np.ndarray:
    out = np.zeros_like(ps)
    inv2 = ps**-2.0
    t = np.ones_like(ps)
    for _ in range(K):
        t = t * inv2
        out += np.log1p(-t)
    return out


def _prime_product(log_factor, P: int, tail_const: float) -> CertifiedValue:
    """exp(sum_{p <= P} log f(p)) with 1 - f(p) < tail_const / p^2 for p > P.

    Since sum_{p > P} p^-2 < 1/P, the omitted factors change the log by at
    most tail_const * (1 + tail_const / P^2) / P.
    """
    ps = _primes_upto(P)
    logs = log_factor(ps)
    s = math.fsum(logs.tolist())
    v = math.exp(s)
    tail = tail_const * (1 + tail_const / P**2) / P
    return CertifiedValue(v, v * tail + v * _EPS * (40 * ps.size))


def walk_limit_global(P: int = 3_000_000) -> CertifiedValue:
    """Limit of P(det W square-free): the product of walk_limit_p over all primes."""

    def log_factor(ps):
        return np.log1p(-(ps**-2.0) - ps**-3.0 + ps**-4.0) + _log_qpoch_even(ps)

    # 1 - f(p) <= p^-2 + p^-3 + p^-2 / (1 - p^-2) < 3 p^-2
    return _prime_product(log_factor, P, 3.0)


def disc_limit_global(P: int = 5_000_000) -> CertifiedValue:
    """Limit of P(discriminant is odd and square-free)."""

    def log_factor(ps):
        return np.log1p(-(3 * ps - 1) / (ps * ps * (ps + 1))) + _log_qpoch_even(ps)

    # 2 does not divide it with probability (6/7) times the p^2 factor at 2;
    # 1 - f(p) <= 3 p^-2 + p^-2 / (1 - p^-2) < 4.34 p^-2
    return (6 / 7) * _prime_product(log_factor, P, 4.34)


def rank_limit_symmetric(q: float, k: int) -> CertifiedValue:
    """Limit of P(corank k) for a uniform symmetric n x n matrix over F_q."""
    if k < 0:
        raise ValueError("k must be >= 0")
    v = _product(q, 1, 2)
    den = math.prod(float(q) ** i - 1 for i in range(1, k + 1))
    return v / den


def rank_limit_rectangular(q: float, k: int, m: int) -> CertifiedValue:
    """Limit of P(corank k) for a uniform n x (n + m) matrix over F_q."""
    if k < 0 or m < 0:
        raise ValueError("k and m must be >= 0")
    num = _product(q, k + 1)
    den = math.prod(1 - q ** (-i) for i in range(1, k + m + 1))
    return num * (q ** (-k * (m + k)) / den)


EVENT_TAGS = ("W-trivial", "W-Fq", "D-trivial", "D-Fq", "D-pair", "N-trivial", "N-Fq")

# numerator c of the finite-n band c / q^n
EVENT_BANDS = {
    "W-trivial": 6,
    "W-Fq": 6,
    "D-trivial": 3,
    "D-Fq": 3,
    "D-pair": 3,
    "N-trivial": 3,
    "N-Fq": 6,
}


def _event_q(event: str, q: float) -> CertifiedValue:
    if event == "W-trivial":
        return (1 - q**-2) * _product(q, 3, 2)
    if event == "W-Fq":
        return (q**-2 * (1 - q**-2) ** 2) * _product(q, 3, 2)
    if event == "D-trivial":
        return _product(q, 1, 2)
    if event == "D-Fq":
        return _product(q, 1, 2) / q
    if event == "D-pair":
        return (q**-2 * (1 - 1 / q)) * _product(q, 1, 2)
    if event == "N-trivial":
        return _product(q, 2)
    if event == "N-Fq":
        return q**-2 * _product(q, 2)
    raise ValueError(f"unknown event {event!r}; expected one of {EVENT_TAGS}")


def event_limit(event: str, p: int, beta_degree: int = 1) -> CertifiedValue:
    """Large-n limit of a per-beta event probability, with q = p^deg(beta)."""
    _check_prime(p)
    if beta_degree < 1:
        raise ValueError("beta_degree must be >= 1")
    return _event_q(event, float(p**beta_degree))


def event_band(event: str, q: int, n: int) -> float:
    """Finite-n distance bound c / q^n between the event frequency and its limit."""
    return EVENT_BANDS[event] / float(q) ** n


ASSEMBLY_FAMILIES = ("W-trivial", "walk", "D1", "D12", "zeta", "N-walk")


def assemble_over_beta(p: int, family: str, max_degree: int, s: int = 2) -> CertifiedValue:
    """Product over monic irreducible beta with deg beta <= D of per-beta limits.

    Families:
        W-trivial, D1: every piece trivial / every piece 0 or F_q.
        walk: W-trivial everywhere except possibly one linear beta with an F_q piece.
        D12: D1, or D1 everywhere except one linear beta carrying an F_p[x]/beta^2 pair.
        zeta: prod (1 - q^-s).
        N-walk: the walk family for non-symmetric matrices.

    The omitted factors f(q) with deg beta > D satisfy 1 - f(q) <= c q^-e,
    and there are at most p^d / d of them in degree d.
    """
    _check_prime(p)
    if max_degree < 1:
        raise ValueError("max_degree must be >= 1")

    if family in ("W-trivial", "walk", "D1", "D12"):
        base = "W-trivial" if family in ("W-trivial", "walk") else None

        def factor(q):
            if base:
                return _event_q(base, q)
            return CertifiedValue(
                _event_q("D-trivial", q).value + _event_q("D-Fq", q).value,
                _event_q("D-trivial", q).error + _event_q("D-Fq", q).error,
            )

        c, e = 2.0, 2
    elif family == "N-walk":

        def factor(q):
            return _event_q("N-trivial", q)

        c, e = 2.0, 2
    elif family == "zeta":
        if s < 2:
            raise ValueError("zeta family needs s >= 2")

        def factor(q):
            return CertifiedValue(1 - q ** (-s), _EPS)

        c, e = 1.0, s
    else:
        raise ValueError(f"unknown family {family!r}; expected one of {ASSEMBLY_FAMILIES}")

    logs, err = [], 0.0
    for d in range(1, max_degree + 1):
        q = float(p) ** d
        f = factor(q)
        cnt = irreducible_count(p, d)
        logs.append(cnt * math.log(f.value))
        err += cnt * f.error / f.value
    v = math.exp(math.fsum(logs))

    # linear pieces may instead carry the second event
    if family in ("walk", "D12", "N-walk"):
        q = float(p)
        if family == "walk":
            ratio = _event_q("W-Fq", q).value / _event_q("W-trivial", q).value
        elif family == "N-walk":
            ratio = _event_q("N-Fq", q).value / _event_q("N-trivial", q).value
        else:
            d1 = _event_q("D-trivial", q).value + _event_q("D-Fq", q).value
            ratio = _event_q("D-pair", q).value / d1
        v *= 1 + p * ratio

    # omitted degrees: sum_{d > D} (p^d / d) * c' p^(-d e), c' = c / (1 - c p^(-(D+1) e))
    c1 = c / (1 - c * float(p) ** (-(max_degree + 1) * e))
    r = float(p) ** (1 - e)
    if r >= 1:
        raise ValueError("tail does not converge")
    tail = c1 * r ** (max_degree + 1) / ((max_degree + 1) * (1 - r))
    return CertifiedValue(v, v * (tail + err + _EPS * (4 * max_degree + 8)))


def assembly_closed_form(p: int, family: str, s: int = 2) -> CertifiedValue:
    """The exact value the assembly over beta converges to."""
    if family in ("W-trivial", "D1"):
        return disc_limit_p(p)
    if family == "walk":
        return walk_limit_p(p)
    if family == "D12":
        return (1 + (1 - 1 / p) / (p * (1 + 1 / p))) * disc_limit_p(p)
    if family == "zeta":
        return CertifiedValue(1 - float(p) ** (1 - s), _EPS)
    if family == "N-walk":
        return asymmetric_walk_limit(p)
    raise ValueError(f"unknown family {family!r}")


def asymmetric_walk_limit(p: int) -> CertifiedValue:
    """Limit of P(p^2 does not divide det W) for non-symmetric 0/1 M."""
    _check_prime(p)
    return (1 + 1 / p) * _product(p, 1)


def predictor_identities() -> list[tuple[str, float, float]]:
    """Algebraic identities linking the formulas, as (name, lhs, rhs) triples."""
    out = []
    for p in (2, 3, 5, 7, 11):
        lhs = (1 + (1 - p**-2) / p) * (1 - 1 / p)
        out.append((f"walk factor p={p}", lhs, 1 - p**-2 - p**-3 + p**-4))
        w0 = _event_q("W-trivial", p).value
        w1 = _event_q("W-Fq", p).value
        out.append((f"W-Fq/W-trivial p={p}", w1 / w0, p**-2 * (1 - p**-2)))
        out.append((f"D-trivial = rank law p={p}", _event_q("D-trivial", p).value, rank_limit_symmetric(p, 0).value))
    for p in (3, 5, 7, 11):
        lhs = disc_limit_psquare(p).value
        rhs = (1 + (1 - 1 / p) / (p * (1 + 1 / p))) * disc_limit_p(p).value
        out.append((f"disc p^2 factor p={p}", lhs, rhs))
    out.append(("6/7 at p=2", 1 - 1 / 2, (6 / 7) * _disc_psquare_factor(2)))
    return out
