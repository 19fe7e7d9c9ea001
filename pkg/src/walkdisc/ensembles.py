"""Seeded random matrix and vector ensembles.

Batched samplers return integer arrays with a leading batch axis. Matrices
over finite rings are returned as element codes (see ``FiniteField.index``
and ``TruncatedRing.index``); the single-sample helpers wrap them as
ExactMatrix values.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .linalg import ExactMatrix
from .polynomials import as_poly, enumerate_irreducibles, is_irreducible
from .rings import FiniteField, TruncatedRing, is_prime, prime_power

DEFAULT_SEED = 20240917


@dataclass(frozen=True)
class Seed:
    """A master seed and a stream index.

    Each (master, stream) pair drives its own Philox counter-based
    generator keyed through SeedSequence, so streams are independent and
    the draws of a stream never depend on how work is scheduled.
    """

    master: int = DEFAULT_SEED
    stream: int = 0

    def rng(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(np.random.SeedSequence([self.master, self.stream])))


VECTOR_KINDS = ("uniform01", "all_ones", "indicator")


@dataclass(frozen=True)
class VectorSpec:
    """Law of the vector zeta."""

    kind: str = "uniform01"
    index: int = 0

    def __post_init__(self):
        if self.kind not in VECTOR_KINDS:
            raise ValueError(f"unknown vector kind {self.kind!r}")
        if self.index < 0:
            raise ValueError("indicator index must be >= 0")

    @classmethod
    def parse(cls, text: str) -> "VectorSpec":
        """Parse "uniform", "ones" or "indicator:i"."""
        t = text.strip().lower()
        if t in ("uniform", "uniform01"):
            return cls("uniform01")
        if t in ("ones", "all_ones"):
            return cls("all_ones")
        if t.startswith("indicator"):
            _, _, idx = t.partition(":")
            return cls("indicator", int(idx) if idx else 0)
        raise ValueError(f"cannot parse vector spec {text!r}")

    @property
    def label(self) -> str:
        if self.kind == "uniform01":
            return "uniform"
        if self.kind == "all_ones":
            return "ones"
        return f"indicator:{self.index}"

    @property
    def deterministic(self) -> bool:
        return self.kind != "uniform01"


ENSEMBLE_KINDS = (
    "sym01_loops",
    "asym01",
    "sym_Fq",
    "rect_Fq",
    "sym_truncated",
    "asym_truncated",
    "sym_truncated_maximal_ideal",
)
TRUNCATED_KINDS = ("sym_truncated", "asym_truncated", "sym_truncated_maximal_ideal")
FIELD_KINDS = ("sym_Fq", "rect_Fq")
ZERO_ONE_KINDS = ("sym01_loops", "asym01")


@lru_cache(maxsize=None)
def field_of_order(q: int) -> FiniteField:
    """F_q realized as F_p[x]/beta with beta the first monic irreducible in enumeration order."""
    pp = prime_power(q)
    if pp is None:
        raise ValueError(f"{q} is not a prime power")
    p, d = pp
    if d == 1:
        return FiniteField(p)
    beta = next(b for b in enumerate_irreducibles(p, d) if b.degree == d)
    return FiniteField(p, beta)


@lru_cache(maxsize=None)
def truncated_ring_for(p: int, beta: tuple, beta_power: int) -> TruncatedRing:
    return TruncatedRing(p, beta, beta_power)


@dataclass(frozen=True)
class EnsembleSpec:
    """A matrix law and its size.

    Attributes:
        kind: One of ENSEMBLE_KINDS.
        n: Number of rows.
        q: Field order for the F_q kinds.
        m: Extra columns for rect_Fq.
        p, beta, beta_power: Truncated ring Z[x]/(p^2, beta^beta_power).
        k: Size of the maximal-ideal block (overrides n for that kind).
    """

    kind: str
    n: int
    q: int | None = None
    m: int = 0
    p: int | None = None
    beta: tuple = (0, 1)
    beta_power: int = 3
    k: int | None = None

    def __post_init__(self):
        if self.kind not in ENSEMBLE_KINDS:
            raise ValueError(f"unknown ensemble kind {self.kind!r}; expected one of {ENSEMBLE_KINDS}")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.kind in FIELD_KINDS:
            if self.q is None or prime_power(self.q) is None:
                raise ValueError(f"{self.kind} needs q a prime power, got {self.q}")
        if self.m < 0:
            raise ValueError("m must be >= 0")
        if self.kind in TRUNCATED_KINDS:
            if self.p is None or not is_prime(self.p):
                raise ValueError(f"{self.kind} needs a prime p, got {self.p}")
            b = as_poly(tuple(self.beta), self.p)
            if not b.is_monic() or b.degree < 1 or not is_irreducible(b):
                raise ValueError(f"beta {self.beta} is not monic irreducible mod {self.p}")
            object.__setattr__(self, "beta", tuple(b.coeffs))
            if self.beta_power < 1:
                raise ValueError("beta_power must be >= 1")
        if self.kind == "sym_truncated_maximal_ideal":
            if self.k is None or not 0 <= self.k <= self.n:
                raise ValueError("maximal-ideal kind needs 0 <= k <= n")

    @property
    def rows(self) -> int:
        return self.k if self.kind == "sym_truncated_maximal_ideal" else self.n

    @property
    def cols(self) -> int:
        return self.rows + (self.m if self.kind == "rect_Fq" else 0)

    @property
    def field(self) -> FiniteField:
        return field_of_order(self.q)

    @property
    def ring(self) -> TruncatedRing:
        return truncated_ring_for(self.p, tuple(self.beta), self.beta_power)

    @property
    def symmetric(self) -> bool:
        return self.kind.startswith("sym")

    @property
    def residue_q(self) -> int:
        """Order of the residue field."""
        if self.kind in FIELD_KINDS:
            return self.q
        if self.kind in TRUNCATED_KINDS:
            return self.p ** (len(self.beta) - 1)
        return 2


def _symmetrize(R: np.ndarray) -> np.ndarray:
    """Keep the upper triangle (with diagonal) and mirror it."""
    n = R.shape[-1]
    upper = np.triu(np.ones((n, n), dtype=bool))
    return np.where(upper, R, np.swapaxes(R, -1, -2))


def sample_symmetric01(n: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Symmetric 0/1 matrices with i.i.d. fair bits on and above the diagonal.

    Returns an (n, n) array, or (size, n, n) when size is given.
    """
    shape = (n, n) if size is None else (size, n, n)
    return _symmetrize(rng.integers(0, 2, size=shape, dtype=np.int64))


def sample_asymmetric01(n: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    shape = (n, n) if size is None else (size, n, n)
    return rng.integers(0, 2, size=shape, dtype=np.int64)


def sample_vector(spec: VectorSpec, n: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Vector zeta of length n (or a (size, n) batch) following spec."""
    shape = (n,) if size is None else (size, n)
    if spec.kind == "uniform01":
        return rng.integers(0, 2, size=shape, dtype=np.int64)
    if spec.kind == "all_ones":
        return np.ones(shape, dtype=np.int64)
    if spec.index >= n:
        raise ValueError(f"indicator index {spec.index} out of range for n={n}")
    out = np.zeros(shape, dtype=np.int64)
    out[..., spec.index] = 1
    return out


def _field_codes(F: FiniteField, shape, rng: np.random.Generator) -> np.ndarray:
    return rng.integers(0, F.q, size=shape, dtype=np.int64)


def sample_symmetric_Fq_codes(n: int, F: FiniteField, rng: np.random.Generator, size: int) -> np.ndarray:
    return _symmetrize(_field_codes(F, (size, n, n), rng))


def sample_symmetric_Fq(n: int, F: FiniteField | int, rng: np.random.Generator) -> ExactMatrix:
    """Uniform symmetric n x n matrix over F_q."""
    if isinstance(F, int):
        F = field_of_order(F)
    codes = sample_symmetric_Fq_codes(n, F, rng, 1)[0]
    return ExactMatrix.from_rows(F, [[F.element(int(c)) for c in r] for r in codes], n)


def sample_truncated_codes(spec: EnsembleSpec, rng: np.random.Generator, size: int) -> np.ndarray:
    """Batch of matrices over the truncated ring, as element codes.

    Codes enumerate coefficient vectors in base p^2, so uniform codes are
    uniform ring elements. The maximal-ideal kind draws p*u + beta*v with
    u, v uniform.
    """
    T = spec.ring
    r = spec.rows
    shape = (size, r, r)
    if spec.kind == "sym_truncated_maximal_ideal":
        tab = T.tables
        pc = T.index(T.from_int(T.p))
        bc = T.index(T.element(T.beta.coeffs))
        u = rng.integers(0, T.size, size=shape, dtype=np.int64)
        v = rng.integers(0, T.size, size=shape, dtype=np.int64)
        A = tab.add[tab.mul[pc, u], tab.mul[bc, v]].astype(np.int64)
    else:
        A = rng.integers(0, T.size, size=shape, dtype=np.int64)
    return _symmetrize(A) if spec.symmetric else A


def sample_truncated(spec: EnsembleSpec, rng: np.random.Generator) -> ExactMatrix:
    """One matrix over the truncated ring following spec."""
    if spec.kind not in TRUNCATED_KINDS:
        raise ValueError(f"{spec.kind} is not a truncated-ring ensemble")
    T = spec.ring
    codes = sample_truncated_codes(spec, rng, 1)[0]
    return ExactMatrix.from_rows(T, [[T.from_index(int(c)) for c in r] for r in codes], spec.rows)


def sample_batch(spec: EnsembleSpec, rng: np.random.Generator, size: int) -> np.ndarray:
    """A batch of matrices from any ensemble: 0/1 integers or element codes."""
    if spec.kind == "sym01_loops":
        return sample_symmetric01(spec.n, rng, size)
    if spec.kind == "asym01":
        return sample_asymmetric01(spec.n, rng, size)
    if spec.kind == "sym_Fq":
        return sample_symmetric_Fq_codes(spec.n, spec.field, rng, size)
    if spec.kind == "rect_Fq":
        return _field_codes(spec.field, (size, spec.n, spec.n + spec.m), rng)
    return sample_truncated_codes(spec, rng, size)
