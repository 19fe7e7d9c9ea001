"""Ring descriptors and element types.

A ring descriptor bundles the arithmetic that the generic matrix
algorithms need (add, mul, units, inverses, and for Euclidean rings
division with remainder). Integer-like rings use plain Python ints as
elements; polynomial and extension rings use small immutable classes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .polynomials import FieldPolynomial, as_poly, is_irreducible, poly_gcdex

# operation tables are size x size, so keep them within a few hundred MB
MAX_TABLE_SIZE = 2**13


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_power(m: int) -> tuple[int, int] | None:
    """Return (p, c) with m = p**c, or None if m is not a prime power."""
    if m < 2:
        return None
    d = 2
    while d * d <= m and m % d:
        d += 1
    p = d if m % d == 0 else m
    c = 0
    while m % p == 0:
        m //= p
        c += 1
    return (p, c) if m == 1 else None


def valuation(a: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if a == 0:
        raise ValueError("valuation of zero is infinite")
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


@dataclass(frozen=True)
class ResidueElement:
    """An integer residue modulo ``modulus``, always stored in [0, modulus)."""

    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        object.__setattr__(self, "value", int(self.value) % self.modulus)

    def _other(self, other) -> int:
        if isinstance(other, ResidueElement):
            if other.modulus != self.modulus:
                raise ValueError("mismatched moduli")
            return other.value
        return int(other)

    def __add__(self, other):
        return ResidueElement(self.value + self._other(other), self.modulus)

    def __sub__(self, other):
        return ResidueElement(self.value - self._other(other), self.modulus)

    def __mul__(self, other):
        return ResidueElement(self.value * self._other(other), self.modulus)

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return ResidueElement(self._other(other) - self.value, self.modulus)

    def __neg__(self):
        return ResidueElement(-self.value, self.modulus)

    def __pow__(self, e: int):
        return ResidueElement(pow(self.value, e, self.modulus), self.modulus)

    def inverse(self) -> "ResidueElement":
        return ResidueElement(pow(self.value, -1, self.modulus), self.modulus)

    def __int__(self):
        return self.value


class Ring:
    """Base descriptor; subclasses override what differs from Python operators."""

    is_field = False
    is_euclidean = False
    name = "ring"

    def zero(self):
        return self.from_int(0)

    def one(self):
        return self.from_int(1)

    def from_int(self, k: int):
        raise NotImplementedError

    def coerce(self, x):
        return self.from_int(x) if isinstance(x, (int, np.integer)) else x

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a) -> bool:
        return a == self.zero()

    def is_unit(self, a) -> bool:
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def __repr__(self):
        return self.name


class IntegerRing(Ring):
    """The integers, with Python ints as elements."""

    is_euclidean = True
    name = "ZZ"

    def from_int(self, k):
        return int(k)

    def is_zero(self, a):
        return a == 0

    def is_unit(self, a):
        return a in (1, -1)

    def inv(self, a):
        if a not in (1, -1):
            raise ZeroDivisionError(f"{a} is not a unit in ZZ")
        return a

    def norm(self, a) -> int:
        return abs(a)

    def divmod(self, a, b):
        # Round to nearest so remainders shrink fastest.
        q = (2 * a + b) // (2 * b) if b > 0 else -((2 * a - b) // (-2 * b))
        return q, a - q * b

    def gcdex(self, a, b):
        r0, r1, s0, s1, t0, t1 = a, b, 1, 0, 0, 1
        while r1:
            q = r0 // r1
            r0, r1 = r1, r0 - q * r1
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if r0 < 0:
            r0, s0, t0 = -r0, -s0, -t0
        return r0, s0, t0

    def normalize(self, a):
        """Return (canonical associate, unit u) with a * u = canonical."""
        return (-a, -1) if a < 0 else (a, 1)

    def divides(self, a, b) -> bool:
        return b == 0 if a == 0 else b % a == 0


ZZ = IntegerRing()


class IntegersMod(Ring):
    """The residue ring Z/mZ with ints in [0, m) as elements."""

    def __init__(self, modulus: int):
        if modulus < 2:
            raise ValueError("modulus must be >= 2")
        self.modulus = modulus
        self.is_field = is_prime(modulus)
        self.prime_power = prime_power(modulus)
        self.name = f"Z/{modulus}"

    def __eq__(self, other):
        return isinstance(other, IntegersMod) and other.modulus == self.modulus

    def __hash__(self):
        return hash(("Zmod", self.modulus))

    def from_int(self, k):
        return int(k) % self.modulus

    def add(self, a, b):
        return (a + b) % self.modulus

    def sub(self, a, b):
        return (a - b) % self.modulus

    def mul(self, a, b):
        return a * b % self.modulus

    def neg(self, a):
        return -a % self.modulus

    def is_zero(self, a):
        return a % self.modulus == 0

    def is_unit(self, a):
        from math import gcd

        return gcd(a, self.modulus) == 1

    def inv(self, a):
        return pow(a, -1, self.modulus)

    def element(self, a) -> ResidueElement:
        return ResidueElement(a, self.modulus)


class PolynomialRing(Ring):
    """F_p[x], a Euclidean domain with FieldPolynomial elements."""

    is_euclidean = True

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"F_{p}[x]"

    def __eq__(self, other):
        return isinstance(other, PolynomialRing) and other.p == self.p

    def __hash__(self):
        return hash(("Fpx", self.p))

    def from_int(self, k):
        return FieldPolynomial(self.p, (k,))

    def coerce(self, x):
        if isinstance(x, (int, np.integer)):
            return self.from_int(int(x))
        return as_poly(x, self.p)

    def is_zero(self, a):
        return a.is_zero()

    def is_unit(self, a):
        return a.degree == 0

    def inv(self, a):
        if a.degree != 0:
            raise ZeroDivisionError("only nonzero constants are units")
        return FieldPolynomial(self.p, (pow(a.leading, -1, self.p),))

    def norm(self, a) -> int:
        return a.degree

    def divmod(self, a, b):
        return divmod(a, b)

    def gcdex(self, a, b):
        return poly_gcdex(a, b)

    def normalize(self, a):
        if a.is_zero():
            return a, self.one()
        u = pow(a.leading, -1, self.p)
        return a.scale(u), FieldPolynomial(self.p, (u,))

    def divides(self, a, b) -> bool:
        return b.is_zero() if a.is_zero() else (b % a).is_zero()


@dataclass(frozen=True)
class ExtensionFieldElement:
    """An element of F_q = F_p[x]/beta, stored as a reduced representative."""

    beta: FieldPolynomial
    rep: FieldPolynomial

    def __post_init__(self):
        if not self.beta.is_monic() or self.beta.degree < 1 or not is_irreducible(self.beta):
            raise ValueError(f"{self.beta!r} is not monic irreducible")
        if self.rep.degree >= self.beta.degree:
            object.__setattr__(self, "rep", self.rep % self.beta)

    def _wrap(self, rep):
        return ExtensionFieldElement(self.beta, rep % self.beta)

    def __add__(self, other):
        return self._wrap(self.rep + other.rep)

    def __sub__(self, other):
        return self._wrap(self.rep - other.rep)

    def __mul__(self, other):
        return self._wrap(self.rep * other.rep)

    def __neg__(self):
        return self._wrap(-self.rep)

    def is_zero(self) -> bool:
        return self.rep.is_zero()

    def inverse(self) -> "ExtensionFieldElement":
        if self.rep.is_zero():
            raise ZeroDivisionError("zero has no inverse")
        d, s, _ = poly_gcdex(self.rep, self.beta)
        return self._wrap(s)


class FiniteField(Ring):
    """F_q realised as F_p[x]/beta for a monic irreducible beta."""

    is_field = True

    def __init__(self, p: int, beta=(0, 1)):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        beta = as_poly(beta, p)
        if not beta.is_monic() or not is_irreducible(beta):
            raise ValueError(f"{beta!r} is not monic irreducible")
        self.p, self.beta = p, beta
        self.degree = beta.degree
        self.q = p**self.degree
        self.name = f"F_{self.q}"

    def __eq__(self, other):
        return isinstance(other, FiniteField) and other.beta == self.beta

    def __hash__(self):
        return hash(("Fq", self.beta))

    def from_int(self, k):
        return ExtensionFieldElement(self.beta, FieldPolynomial(self.p, (k,)))

    def coerce(self, x):
        if isinstance(x, ExtensionFieldElement):
            return x
        if isinstance(x, (int, np.integer)):
            return self.from_int(int(x))
        return ExtensionFieldElement(self.beta, as_poly(x, self.p))

    def is_zero(self, a):
        return a.is_zero()

    def is_unit(self, a):
        return not a.is_zero()

    def inv(self, a):
        return a.inverse()

    def index(self, a: ExtensionFieldElement) -> int:
        """Integer code sum(c_k p**k) of an element."""
        return sum(c * self.p**k for k, c in enumerate(a.rep.coeffs))

    def element(self, idx: int) -> ExtensionFieldElement:
        digits = []
        for _ in range(self.degree):
            idx, r = divmod(idx, self.p)
            digits.append(r)
        return ExtensionFieldElement(self.beta, FieldPolynomial(self.p, tuple(digits)))

    @cached_property
    def tables(self) -> "RingTables":
        d, p = self.degree, self.p
        digits = _digits(np.arange(self.q), p, d)
        red = _power_reductions(p, [c for c in self.beta.coeffs], d)
        return _build_tables(digits, p, red, residue=np.arange(self.q), residue_size=self.q)


@dataclass(frozen=True)
class TruncatedLocalElement:
    """An element of Z[x]/(p^2, beta^e), as coefficients mod p^2 of degree < e*deg(beta)."""

    ring: "TruncatedRing" = field(repr=False, compare=False)
    coeffs: tuple[int, ...]

    def __add__(self, other):
        return self.ring.add(self, other)

    def __sub__(self, other):
        return self.ring.sub(self, other)

    def __mul__(self, other):
        return self.ring.mul(self, other)

    def __neg__(self):
        return self.ring.neg(self)

    def __hash__(self):
        return hash(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, TruncatedLocalElement) and self.coeffs == other.coeffs


class TruncatedRing(Ring):
    """The finite local ring T = Z[x]/(p^2, beta(x)^e).

    beta is a monic irreducible polynomial over F_p, lifted to Z with
    coefficients in [0, p). The default e = 2 is the smallest truncation
    that sees the maximal ideal modulo its square; fingerprint events that
    must tell F_p[x]/beta^2 apart from deeper quotients need e = 3.

    Args:
        p: Prime.
        beta: Monic irreducible polynomial mod p (FieldPolynomial or coefficient list).
        beta_power: Exponent e of beta in the truncation.
    """

    def __init__(self, p: int, beta=(0, 1), beta_power: int = 2):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        beta = as_poly(beta, p)
        if not beta.is_monic() or beta.degree < 1 or not is_irreducible(beta):
            raise ValueError(f"{beta!r} is not monic irreducible over F_{p}")
        if beta_power < 1:
            raise ValueError("beta_power must be >= 1")
        self.p, self.beta, self.beta_power = p, beta, beta_power
        self.m = p * p
        self.degree = beta.degree
        self.q = p**self.degree
        self.length = beta_power * self.degree
        self.size = self.m**self.length
        lift = list(beta.coeffs)
        mod = [1]
        for _ in range(beta_power):
            mod = _int_poly_mul(mod, lift)
        self.modulus_poly = tuple(c % self.m for c in mod)
        self.residue_field = FiniteField(p, beta)
        self.name = f"Z[x]/({self.m}, ({beta.coeffs})^{beta_power})"

    def __eq__(self, other):
        return isinstance(other, TruncatedRing) and (other.beta, other.beta_power) == (self.beta, self.beta_power)

    def __hash__(self):
        return hash(("T", self.beta, self.beta_power))

    def _reduce(self, coeffs: Sequence[int]) -> tuple[int, ...]:
        m, L, mod = self.m, self.length, self.modulus_poly
        c = [int(a) % m for a in coeffs]
        for k in range(len(c) - 1, L - 1, -1):
            t = c[k]
            if t:
                for j in range(L + 1):
                    c[k - L + j] = (c[k - L + j] - t * mod[j]) % m
        c = c[:L] + [0] * (L - len(c))
        return tuple(c)

    def element(self, coeffs) -> TruncatedLocalElement:
        return TruncatedLocalElement(self, self._reduce(coeffs))

    def from_int(self, k):
        return self.element([k])

    def coerce(self, x):
        if isinstance(x, TruncatedLocalElement):
            return x
        if isinstance(x, (int, np.integer)):
            return self.from_int(int(x))
        return self.element(x)

    def add(self, a, b):
        return TruncatedLocalElement(self, tuple((x + y) % self.m for x, y in zip(a.coeffs, b.coeffs)))

    def sub(self, a, b):
        return TruncatedLocalElement(self, tuple((x - y) % self.m for x, y in zip(a.coeffs, b.coeffs)))

    def neg(self, a):
        return TruncatedLocalElement(self, tuple(-x % self.m for x in a.coeffs))

    def mul(self, a, b):
        return self.element(_int_poly_mul(a.coeffs, b.coeffs))

    def is_zero(self, a):
        return not any(a.coeffs)

    def residue(self, a) -> ExtensionFieldElement:
        """Image in the residue field F_q."""
        return ExtensionFieldElement(self.beta, FieldPolynomial(self.p, a.coeffs))

    def is_maximal(self, a) -> bool:
        """Membership in the maximal ideal (p, beta)."""
        return self.residue(a).is_zero()

    def is_unit(self, a):
        return not self.is_maximal(a)

    def inv(self, a):
        if self.is_maximal(a):
            raise ZeroDivisionError("element lies in the maximal ideal")
        # Newton iteration from a residue-field inverse doubles precision each step.
        r = self.residue(a).inverse()
        y = self.element(r.rep.coeffs)
        two = self.from_int(2)
        for _ in range(2 * self.length.bit_length() + 2):
            y = y * (two - a * y)
        return y

    def index(self, a: TruncatedLocalElement) -> int:
        return sum(c * self.m**k for k, c in enumerate(a.coeffs))

    def from_index(self, idx: int) -> TruncatedLocalElement:
        digits = []
        for _ in range(self.length):
            idx, r = divmod(idx, self.m)
            digits.append(r)
        return TruncatedLocalElement(self, tuple(digits))

    def sample(self, rng: np.random.Generator, maximal: bool = False) -> TruncatedLocalElement:
        """Uniform element, or uniform on the maximal ideal p*u + beta*v."""
        if not maximal:
            return self.element(rng.integers(0, self.m, size=self.length).tolist())
        u = self.element(rng.integers(0, self.m, size=self.length).tolist())
        v = self.element(rng.integers(0, self.m, size=self.length).tolist())
        return self.from_int(self.p) * u + self.element(self.beta.coeffs) * v

    @cached_property
    def tables(self) -> "RingTables":
        if self.size > MAX_TABLE_SIZE:
            raise ValueError(f"{self.name} has {self.size} elements; lookup tables stop at {MAX_TABLE_SIZE}")
        digits = _digits(np.arange(self.size), self.m, self.length)
        red = _power_reductions(self.m, list(self.modulus_poly), self.length)
        # residue-field code: coefficients mod p, reduced mod beta
        fp = digits % self.p
        rf_red = _power_reductions(self.p, list(self.beta.coeffs), self.degree, self.length)
        res = np.zeros((self.size, self.degree), dtype=np.int64)
        for k in range(self.length):
            res = (res + fp[:, k : k + 1] * rf_red[k][None, :]) % self.p
        residue = res @ (self.p ** np.arange(self.degree))
        return _build_tables(digits, self.m, red, residue=residue, residue_size=self.q)


@dataclass
class RingTables:
    """Lookup tables for a finite ring whose elements are coded as ints.

    Attributes:
        size: Number of elements.
        add, sub, mul: size x size operation tables.
        neg: Negation table.
        unit: Boolean mask of units.
        inv: Inverse of each unit (-1 for non-units).
        residue: Code of the image in the residue field.
        residue_size: Size of the residue field.
    """

    size: int
    add: np.ndarray
    sub: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    unit: np.ndarray
    inv: np.ndarray
    residue: np.ndarray
    residue_size: int


def _int_poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _digits(idx: np.ndarray, base: int, length: int) -> np.ndarray:
    out = np.zeros((idx.size, length), dtype=np.int64)
    x = idx.astype(np.int64).copy()
    for k in range(length):
        out[:, k] = x % base
        x //= base
    return out


def _power_reductions(m: int, modulus: list[int], length: int, count: int | None = None) -> np.ndarray:
    """Coefficient vectors of x^t reduced mod a monic polynomial of degree length.

    Rows t = 0 .. count-1, where count defaults to 2*length - 1.
    """
    count = 2 * length - 1 if count is None else count
    red = np.zeros((count, length), dtype=np.int64)
    cur = np.zeros(length, dtype=np.int64)
    cur[0] = 1
    low = np.array(modulus[:length], dtype=np.int64)
    for t in range(count):
        red[t] = cur
        top = cur[-1]
        cur = np.concatenate(([0], cur[:-1]))
        cur = (cur - top * low) % m
    return red


def _build_tables(digits: np.ndarray, base: int, red: np.ndarray, residue, residue_size: int) -> RingTables:
    S, L = digits.shape
    weights = base ** np.arange(L, dtype=np.int64)
    dtype = np.int16 if S <= 2**15 else np.int32
    add = np.empty((S, S), dtype=dtype)
    sub = np.empty((S, S), dtype=dtype)
    mul = np.empty((S, S), dtype=dtype)
    # multiplication-by-a matrices: column j of mulmat[a] is a * x^j
    conv = np.zeros((L, L, L), dtype=np.int64)
    for i in range(L):
        for j in range(L):
            conv[i, j] = red[i + j]
    mulmat = np.einsum("si,ijk->skj", digits, conv) % base
    chunk = max(1, 2**22 // (S * L))
    for s0 in range(0, S, chunk):
        d = digits[s0 : s0 + chunk]
        add[s0 : s0 + chunk] = ((d[:, None, :] + digits[None, :, :]) % base) @ weights
        sub[s0 : s0 + chunk] = ((d[:, None, :] - digits[None, :, :]) % base) @ weights
        prod = np.einsum("tj,skj->stk", digits, mulmat[s0 : s0 + chunk]) % base
        mul[s0 : s0 + chunk] = prod @ weights
    neg = sub[0].copy()
    one = 1
    is_one = mul == one
    unit = is_one.any(axis=1)
    inv = np.where(unit, is_one.argmax(axis=1), -1).astype(dtype)
    return RingTables(S, add, sub, mul, neg, unit, inv, np.asarray(residue, dtype=np.int64), residue_size)


def truncated_ring(p: int, beta=(0, 1), beta_power: int = 2) -> TruncatedRing:
    return TruncatedRing(p, beta, beta_power)


def zmod_tables(m: int) -> RingTables:
    """Tables for Z/mZ; codes are the residues themselves."""
    pp = prime_power(m)
    p = pp[0] if pp else m
    digits = np.arange(m, dtype=np.int64)[:, None]
    red = np.ones((1, 1), dtype=np.int64)
    return _build_tables(digits, m, red, residue=np.arange(m) % p, residue_size=p)
