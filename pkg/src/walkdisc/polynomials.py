"""Polynomials over a prime field F_p.

Coefficients are stored low degree first, so ``coeffs[k]`` is the
coefficient of x**k. The zero polynomial has an empty coefficient tuple.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence


@dataclass(frozen=True)
class FieldPolynomial:
    """Polynomial with coefficients in F_p.

    Attributes:
        p: The prime modulus.
        coeffs: Coefficients in [0, p), low degree first, no trailing zeros.
    """

    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = [int(a) % self.p for a in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def from_ints(cls, coeffs: Iterable[int], p: int) -> "FieldPolynomial":
        return cls(p, tuple(coeffs))

    @classmethod
    def x(cls, p: int) -> "FieldPolynomial":
        return cls(p, (0, 1))

    @classmethod
    def constant(cls, c: int, p: int) -> "FieldPolynomial":
        return cls(p, (c,))

    @classmethod
    def linear(cls, a: int, p: int) -> "FieldPolynomial":
        """The monic polynomial x - a."""
        return cls(p, (-a, 1))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_monic(self) -> bool:
        return self.leading == 1

    def monic(self) -> "FieldPolynomial":
        if not self.coeffs or self.leading == 1:
            return self
        return self.scale(pow(self.leading, -1, self.p))

    def scale(self, c: int) -> "FieldPolynomial":
        return FieldPolynomial(self.p, tuple(a * c for a in self.coeffs))

    def _check(self, other: "FieldPolynomial"):
        if self.p != other.p:
            raise ValueError(f"mismatched primes {self.p} and {other.p}")

    def __add__(self, other: "FieldPolynomial") -> "FieldPolynomial":
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return FieldPolynomial(self.p, tuple(a[i] + (b[i] if i < len(b) else 0) for i in range(len(a))))

    def __neg__(self) -> "FieldPolynomial":
        return FieldPolynomial(self.p, tuple(-a for a in self.coeffs))

    def __sub__(self, other: "FieldPolynomial") -> "FieldPolynomial":
        return self + (-other)

    def __mul__(self, other: "FieldPolynomial") -> "FieldPolynomial":
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return FieldPolynomial(self.p, ())
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return FieldPolynomial(self.p, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "FieldPolynomial":
        out = FieldPolynomial(self.p, (1,))
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __divmod__(self, other: "FieldPolynomial"):
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        rem = list(self.coeffs)
        db = other.degree
        inv = pow(other.leading, -1, p)
        quot = [0] * max(len(rem) - db, 0)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k] % p
            if c:
                c = c * inv % p
                quot[k - db] = c
                for j, bj in enumerate(other.coeffs):
                    rem[k - db + j] -= c * bj
        return FieldPolynomial(p, tuple(quot)), FieldPolynomial(p, tuple(rem[:db]))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, a: int) -> int:
        """Evaluate at an integer point, result in [0, p)."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * a + c) % self.p
        return acc

    def derivative(self) -> "FieldPolynomial":
        return FieldPolynomial(self.p, tuple(k * c for k, c in enumerate(self.coeffs))[1:])

    def divides(self, other: "FieldPolynomial") -> bool:
        return (other % self).is_zero()

    def __repr__(self):
        return f"{self} (mod {self.p})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            terms.append(f"{c if c != 1 or k == 0 else ''}{mono}")
        return "+".join(terms)


def poly_gcd(f: FieldPolynomial, g: FieldPolynomial) -> FieldPolynomial:
    """Monic greatest common divisor; gcd(0, 0) is 0."""
    f._check(g)
    while not g.is_zero():
        f, g = g, f % g
    return f.monic()


def poly_gcdex(f: FieldPolynomial, g: FieldPolynomial):
    """Extended gcd: returns (d, s, t) with s*f + t*g = d and d monic."""
    f._check(g)
    p = f.p
    r0, r1 = f, g
    s0, s1 = FieldPolynomial(p, (1,)), FieldPolynomial(p, ())
    t0, t1 = FieldPolynomial(p, ()), FieldPolynomial(p, (1,))
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    u = pow(r0.leading, -1, p)
    return r0.scale(u), s0.scale(u), t0.scale(u)


def poly_derivative(f: FieldPolynomial) -> FieldPolynomial:
    return f.derivative()


def squarefree_mod_p(f: FieldPolynomial) -> bool:
    """True iff no nonconstant polynomial squared divides f.

    A nonconstant f with vanishing derivative is a p-th power and is
    reported as not square-free.
    """
    if f.is_zero():
        raise ValueError("square-freeness of the zero polynomial is undefined")
    if f.degree == 0:
        return True
    d = f.derivative()
    if d.is_zero():
        return False
    return poly_gcd(f, d).degree == 0


def multiplicity(f: FieldPolynomial, beta: FieldPolynomial) -> int:
    """Largest e with beta**e dividing f (f nonzero, beta nonconstant)."""
    if f.is_zero() or beta.degree < 1:
        raise ValueError("multiplicity needs nonzero f and nonconstant beta")
    e = 0
    while True:
        q, r = divmod(f, beta)
        if not r.is_zero():
            return e
        f, e = q, e + 1


def _require_monic(f: FieldPolynomial):
    if f.degree < 1 or not f.is_monic():
        raise ValueError(f"expected a monic polynomial of degree >= 1, got {f!r}")


def all_monic(p: int, d: int):
    """Yield every monic polynomial of degree d over F_p."""
    for low in product(range(p), repeat=d):
        yield FieldPolynomial(p, low + (1,))


@lru_cache(maxsize=None)
def _irreducibles_by_degree(p: int, max_degree: int) -> tuple[tuple[FieldPolynomial, ...], ...]:
    # Sieve: a monic polynomial of degree d is reducible iff it is a product of an
    # irreducible of degree i <= d/2 and some monic polynomial of degree d - i.
    out: list[tuple[FieldPolynomial, ...]] = [()]
    for d in range(1, max_degree + 1):
        reducible = set()
        for i in range(1, d // 2 + 1):
            for a in out[i]:
                for b in all_monic(p, d - i):
                    reducible.add((a * b).coeffs)
        out.append(tuple(f for f in all_monic(p, d) if f.coeffs not in reducible))
    return tuple(out)


def enumerate_irreducibles(p: int, max_degree: int) -> list[FieldPolynomial]:
    """All monic irreducible polynomials over F_p of degree 1..max_degree."""
    if max_degree < 1:
        raise ValueError("max_degree must be >= 1")
    by_deg = _irreducibles_by_degree(p, max_degree)
    return [f for d in range(1, max_degree + 1) for f in by_deg[d]]


def _pow_x_mod(p: int, e: int, f: FieldPolynomial) -> FieldPolynomial:
    out = FieldPolynomial(p, (1,))
    base = FieldPolynomial.x(p) % f
    while e:
        if e & 1:
            out = out * base % f
        base = base * base % f
        e >>= 1
    return out


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=4096)
def is_irreducible(f: FieldPolynomial) -> bool:
    """Irreducibility over F_p of a monic polynomial of degree >= 1."""
    _require_monic(f)
    d, p = f.degree, f.p
    if d == 1:
        return True
    if d <= 8:
        for g in enumerate_irreducibles(p, d // 2):
            if g.divides(f):
                return False
        return True
    # Rabin: x^(p^d) = x mod f, and gcd(x^(p^(d/r)) - x, f) = 1 for primes r | d.
    x = FieldPolynomial.x(p)
    if not ((_pow_x_mod(p, p**d, f) - x) % f).is_zero():
        return False
    for r in _prime_factors(d):
        h = _pow_x_mod(p, p ** (d // r), f) - x
        if poly_gcd(f, h).degree != 0:
            return False
    return True


def mobius(n: int) -> int:
    result, d = 1, 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            result = -result
        d += 1
    return -result if n > 1 else result


def irreducible_count(p: int, d: int) -> int:
    """Number of monic irreducible polynomials of degree d over F_p."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    total = sum(mobius(e) * p ** (d // e) for e in range(1, d + 1) if d % e == 0)
    return total // d


def as_poly(f, p: int) -> FieldPolynomial:
    """Coerce an int sequence (low degree first) or a FieldPolynomial."""
    if isinstance(f, FieldPolynomial):
        if f.p != p:
            raise ValueError(f"polynomial is over F_{f.p}, expected F_{p}")
        return f
    return FieldPolynomial(p, tuple(int(c) for c in f))


def integer_poly_eval(coeffs: Sequence[int], a: int, modulus: int) -> int:
    """Horner evaluation of an integer coefficient list modulo ``modulus``."""
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * a + c) % modulus
    return acc
