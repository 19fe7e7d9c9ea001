"""Dense exact linear algebra over pluggable rings.

Everything here is plain Python on small matrices. The batched numpy
kernels used by the Monte Carlo harness live in ``kernels``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .polynomials import FieldPolynomial
from .rings import ZZ, IntegersMod, Ring, prime_power


@dataclass(frozen=True)
class ExactMatrix:
    """Dense matrix over a ring descriptor.

    Attributes:
        ring: Entry ring.
        nrows: Row count.
        ncols: Column count.
        entries: Row-major tuple of rows.
    """

    ring: Ring
    nrows: int
    ncols: int
    entries: tuple

    @classmethod
    def from_rows(cls, ring: Ring, rows, ncols: int | None = None) -> "ExactMatrix":
        rows = [[ring.coerce(x) for x in row] for row in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(ring, len(rows), ncols, tuple(tuple(r) for r in rows))

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "ExactMatrix":
        return cls.from_rows(ring, [[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, ring: Ring, nrows: int, ncols: int) -> "ExactMatrix":
        return cls.from_rows(ring, [[0] * ncols for _ in range(nrows)], ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def rows(self) -> list[list]:
        """Mutable copy of the entries."""
        return [list(r) for r in self.entries]

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def transpose(self) -> "ExactMatrix":
        cols = [[self.entries[i][j] for i in range(self.nrows)] for j in range(self.ncols)]
        return ExactMatrix(self.ring, self.ncols, self.nrows, tuple(tuple(c) for c in cols))

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch")
        R = self.ring
        out = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = R.zero()
                for k in range(self.ncols):
                    acc = R.add(acc, R.mul(self.entries[i][k], other.entries[k][j]))
                row.append(acc)
            out.append(tuple(row))
        return ExactMatrix(R, self.nrows, other.ncols, tuple(out))

    def hstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.nrows != other.nrows:
            raise ValueError("row counts differ")
        rows = tuple(a + b for a, b in zip(self.entries, other.entries))
        return ExactMatrix(self.ring, self.nrows, self.ncols + other.ncols, rows)

    def map(self, ring: Ring, f) -> "ExactMatrix":
        """Apply f entrywise and reinterpret over ``ring``."""
        return ExactMatrix.from_rows(ring, [[f(x) for x in r] for r in self.entries], self.ncols)

    def __eq__(self, other):
        return (
            isinstance(other, ExactMatrix)
            and self.shape == other.shape
            and all(
                self.ring.is_zero(self.ring.sub(a, b))
                for ra, rb in zip(self.entries, other.entries)
                for a, b in zip(ra, rb)
            )
        )

    def __repr__(self):
        return f"ExactMatrix({self.ring}, {[list(r) for r in self.entries]})"


def as_matrix(A, ring: Ring = ZZ) -> ExactMatrix:
    """Coerce nested lists / numpy arrays to an ExactMatrix over ``ring``."""
    if isinstance(A, ExactMatrix):
        return A
    rows = [[int(x) if hasattr(x, "__index__") else x for x in row] for row in A]
    return ExactMatrix.from_rows(ring, rows)


def _require_field(R: Ring):
    if not R.is_field:
        raise ValueError(f"{R} is not a field")


def row_echelon_over_field(A: ExactMatrix):
    """Reduced row echelon form. Returns (rows, pivot columns)."""
    R = A.ring
    _require_field(R)
    M = A.rows()
    pivots = []
    r = 0
    for c in range(A.ncols):
        i = next((i for i in range(r, A.nrows) if not R.is_zero(M[i][c])), None)
        if i is None:
            continue
        M[r], M[i] = M[i], M[r]
        inv = R.inv(M[r][c])
        M[r] = [R.mul(inv, x) for x in M[r]]
        for k in range(A.nrows):
            if k != r and not R.is_zero(M[k][c]):
                f = M[k][c]
                M[k] = [R.sub(x, R.mul(f, y)) for x, y in zip(M[k], M[r])]
        pivots.append(c)
        r += 1
        if r == A.nrows:
            break
    return M, pivots


def rank_over_field(A: ExactMatrix) -> int:
    """Rank of a matrix over a field."""
    return len(row_echelon_over_field(A)[1])


def nullspace_over_field(A: ExactMatrix) -> list[list]:
    """Basis of the right kernel {v : A v = 0}."""
    R = A.ring
    M, pivots = row_echelon_over_field(A)
    free = [c for c in range(A.ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [R.zero()] * A.ncols
        v[f] = R.one()
        for r, c in enumerate(pivots):
            v[c] = R.neg(M[r][f])
        basis.append(v)
    return basis


def left_kernel_over_field(A: ExactMatrix) -> list[list]:
    """Basis of {u : u^T A = 0}."""
    return nullspace_over_field(A.transpose())


def det_over_field(A: ExactMatrix):
    R = A.ring
    _require_field(R)
    if not A.is_square():
        raise ValueError("determinant of a non-square matrix")
    M = A.rows()
    n = A.nrows
    det = R.one()
    for c in range(n):
        i = next((i for i in range(c, n) if not R.is_zero(M[i][c])), None)
        if i is None:
            return R.zero()
        if i != c:
            M[c], M[i] = M[i], M[c]
            det = R.neg(det)
        det = R.mul(det, M[c][c])
        inv = R.inv(M[c][c])
        for k in range(c + 1, n):
            if not R.is_zero(M[k][c]):
                f = R.mul(M[k][c], inv)
                M[k] = [R.sub(x, R.mul(f, y)) for x, y in zip(M[k], M[c])]
    return det


def det_integer(A) -> int:
    """Exact integer determinant by fraction-free (Bareiss) elimination."""
    M = [list(map(int, r)) for r in (A.entries if isinstance(A, ExactMatrix) else A)]
    n = len(M)
    if any(len(r) != n for r in M):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            i = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if i is None:
                return 0
            M[k], M[i] = M[i], M[k]
            sign = -sign
        pk = M[k][k]
        for i in range(k + 1, n):
            mik = M[i][k]
            Mi, Mk = M[i], M[k]
            for j in range(k + 1, n):
                Mi[j] = (Mi[j] * pk - mik * Mk[j]) // prev
        prev = pk
    return sign * M[n - 1][n - 1]


def charpoly_berkowitz(A: ExactMatrix) -> list:
    """Characteristic polynomial det(xI - A) by Berkowitz's division-free method.

    Returns:
        Coefficients low degree first; the last one is 1.
    """
    if not A.is_square():
        raise ValueError("characteristic polynomial of a non-square matrix")
    R = A.ring
    M = A.entries
    n = A.nrows
    poly = [R.one()]  # high degree first while building
    for r in range(1, n + 1):
        a = M[r - 1][r - 1]
        row = M[r - 1][: r - 1]
        v = [M[i][r - 1] for i in range(r - 1)]
        t = [R.one(), R.neg(a)]
        for _ in range(r - 1):
            acc = R.zero()
            for x, y in zip(row, v):
                acc = R.add(acc, R.mul(x, y))
            t.append(R.neg(acc))
            nv = []
            for i in range(r - 1):
                acc = R.zero()
                for j in range(r - 1):
                    acc = R.add(acc, R.mul(M[i][j], v[j]))
                nv.append(acc)
            v = nv
        new = []
        for i in range(r + 1):
            acc = R.zero()
            for j in range(min(i, r - 1) + 1):
                acc = R.add(acc, R.mul(t[i - j], poly[j]))
            new.append(acc)
        poly = new
    return poly[::-1]


@dataclass(frozen=True)
class CappedDet:
    """Result of a valuation-capped determinant.

    Attributes:
        valuation: v_p(det) when below the cap, else the cap itself.
        capped: True when the determinant is divisible by p**cap.
        unit: det / p**v modulo p**(cap - v), or None when capped.
    """

    valuation: int
    capped: bool
    unit: int | None

    def __str__(self):
        return f">= {self.valuation}" if self.capped else f"v = {self.valuation}"


def det_valuation_capped(A, p: int, cap: int = 2) -> CappedDet:
    """p-adic valuation of det(A) for a square matrix known modulo p**cap.

    Pivots on an entry of minimal valuation. When every remaining entry is
    divisible by p**w the active block is divided by p**w, which adds
    w * (block size) to the valuation and costs w digits of precision.
    """
    rows = A.entries if isinstance(A, ExactMatrix) else A
    mod = p**cap
    M = [[int(x) % mod for x in r] for r in rows]
    n = len(M)
    if any(len(r) != n for r in M):
        raise ValueError("determinant of a non-square matrix")
    v, prec, sign, unit = 0, cap, 1, 1
    for s in range(n):
        pm = p**prec
        best, bi, bj = prec, -1, -1
        for i in range(s, n):
            for j in range(s, n):
                x = M[i][j] % pm
                if x:
                    w = 0
                    while x % p == 0:
                        x //= p
                        w += 1
                    if w < best:
                        best, bi, bj = w, i, j
                        if w == 0:
                            break
            if best == 0:
                break
        k = n - s
        if bi < 0 or v + best * k >= cap:
            return CappedDet(cap, True, None)
        if best:
            d = p**best
            for i in range(s, n):
                for j in range(s, n):
                    M[i][j] = (M[i][j] % pm) // d
            v += best * k
            prec -= best
            pm = p**prec
        if bi != s:
            M[s], M[bi] = M[bi], M[s]
            sign = -sign
        if bj != s:
            for r in M:
                r[s], r[bj] = r[bj], r[s]
            sign = -sign
        piv = M[s][s] % pm
        unit = unit * piv % pm
        inv = pow(piv, -1, pm)
        for i in range(s + 1, n):
            f = M[i][s] * inv % pm
            if f:
                Mi, Ms = M[i], M[s]
                for j in range(s + 1, n):
                    Mi[j] = (Mi[j] - f * Ms[j]) % pm
    out = p ** (cap - v)
    return CappedDet(v, False, sign * unit % out)


def valuation_verdict(det: int, p: int, cap: int = 2) -> int:
    """min(v_p(det), cap) for an exact integer determinant."""
    if det == 0:
        return cap
    v = 0
    while v < cap and det % p == 0:
        det //= p
        v += 1
    return v


@dataclass(frozen=True)
class SmithForm:
    """Smith normal form U A V = D.

    Attributes:
        factors: Nonzero invariant factors d_1 | d_2 | ... as canonical associates.
        rank: Number of nonzero invariant factors.
        shape: Shape of the input matrix.
        U: Left transform (unimodular) or None.
        V: Right transform (unimodular) or None.
    """

    factors: tuple
    rank: int
    shape: tuple[int, int]
    U: ExactMatrix | None = None
    V: ExactMatrix | None = None

    def diagonal(self, ring: Ring) -> ExactMatrix:
        m, n = self.shape
        rows = [[ring.zero()] * n for _ in range(m)]
        for i, d in enumerate(self.factors):
            rows[i][i] = d
        return ExactMatrix.from_rows(ring, rows, n)


def _exquo(R: Ring, a, b):
    q, r = R.divmod(a, b)
    if not R.is_zero(r):
        raise ArithmeticError("inexact division")
    return q


def smith_normal_form(A: ExactMatrix, transforms: bool = False) -> SmithForm:
    """Smith normal form over a Euclidean domain (ZZ or F_p[x]).

    Uses Bezout row and column combinations, so every pivot step is
    unimodular and the pivot becomes the gcd in one stroke.
    """
    R = A.ring
    if not getattr(R, "is_euclidean", False):
        raise ValueError(f"Smith form needs a Euclidean ring, got {R}")
    m, n = A.shape
    M = A.rows()
    U = ExactMatrix.identity(R, m).rows() if transforms else None
    V = ExactMatrix.identity(R, n).rows() if transforms else None

    def row_combine(i, j, a, b, c, d):
        # rows (i, j) <- (a*row_i + b*row_j, c*row_i + d*row_j)
        for X in (M, U) if transforms else (M,):
            ri, rj = X[i], X[j]
            X[i] = [R.add(R.mul(a, x), R.mul(b, y)) for x, y in zip(ri, rj)]
            X[j] = [R.add(R.mul(c, x), R.mul(d, y)) for x, y in zip(ri, rj)]

    def col_combine(i, j, a, b, c, d):
        for X in (M, V) if transforms else (M,):
            for r in X:
                x, y = r[i], r[j]
                r[i] = R.add(R.mul(a, x), R.mul(b, y))
                r[j] = R.add(R.mul(c, x), R.mul(d, y))

    def swap_rows(i, j):
        for X in (M, U) if transforms else (M,):
            X[i], X[j] = X[j], X[i]

    def swap_cols(i, j):
        for X in (M, V) if transforms else (M,):
            for r in X:
                r[i], r[j] = r[j], r[i]

    factors = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if not R.is_zero(M[i][j]):
                    nm = R.norm(M[i][j])
                    if best is None or nm < best[0]:
                        best = (nm, i, j)
        if best is None:
            break
        _, bi, bj = best
        if bi != t:
            swap_rows(t, bi)
        if bj != t:
            swap_cols(t, bj)
        while True:
            for i in range(t + 1, m):
                b = M[i][t]
                if R.is_zero(b):
                    continue
                a = M[t][t]
                if R.divides(a, b):
                    row_combine(t, i, R.one(), R.zero(), R.neg(_exquo(R, b, a)), R.one())
                    continue
                g, s, u = R.gcdex(a, b)
                row_combine(t, i, s, u, R.neg(_exquo(R, b, g)), _exquo(R, a, g))
            for j in range(t + 1, n):
                b = M[t][j]
                if R.is_zero(b):
                    continue
                a = M[t][t]
                if R.divides(a, b):
                    col_combine(t, j, R.one(), R.zero(), R.neg(_exquo(R, b, a)), R.one())
                    continue
                g, s, u = R.gcdex(a, b)
                col_combine(t, j, s, u, R.neg(_exquo(R, b, g)), _exquo(R, a, g))
            if any(not R.is_zero(M[i][t]) for i in range(t + 1, m)):
                continue
            # divisibility: fold an offending row into the pivot row and repeat
            piv = M[t][t]
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if not R.divides(piv, M[i][j])),
                None,
            )
            if bad is None:
                break
            row_combine(t, bad, R.one(), R.one(), R.zero(), R.one())
        canon, unit = R.normalize(M[t][t])
        if transforms:
            U[t] = [R.mul(unit, x) for x in U[t]]
        M[t][t] = canon
        factors.append(canon)
        t += 1
    return SmithForm(
        tuple(factors),
        len(factors),
        (m, n),
        ExactMatrix.from_rows(R, U, m) if transforms else None,
        ExactMatrix.from_rows(R, V, n) if transforms else None,
    )


def local_cokernel_exponents(A, p: int, c: int) -> list[int]:
    """Cokernel of a matrix over Z/p^c as a list of exponents e_i > 0.

    The cokernel of the column span is the sum of Z/p^{e_i}; an exponent
    equal to c means "a Z/p^c summand or larger" in the truncation.
    """
    rows = A.entries if isinstance(A, ExactMatrix) else A
    mod = p**c
    M = [[int(x) % mod for x in r] for r in rows]
    m = len(M)
    n = len(M[0]) if m else 0
    exps = []
    t = 0
    while t < min(m, n):
        best, bi, bj = c, -1, -1
        for i in range(t, m):
            for j in range(t, n):
                x = M[i][j]
                if x:
                    w = 0
                    while x % p == 0:
                        x //= p
                        w += 1
                    if w < best:
                        best, bi, bj = w, i, j
        if bi < 0:
            break
        M[t], M[bi] = M[bi], M[t]
        for r in M:
            r[t], r[bj] = r[bj], r[t]
        d = p**best
        u_inv = pow(M[t][t] // d, -1, mod)
        # every active entry is divisible by d, so these eliminations are exact
        for i in range(t + 1, m):
            f = (M[i][t] // d) * u_inv % mod
            if f:
                M[i] = [(x - f * y) % mod for x, y in zip(M[i], M[t])]
        for j in range(t + 1, n):
            f = (M[t][j] // d) * u_inv % mod
            if f:
                for r in M:
                    r[j] = (r[j] - f * r[t]) % mod
        if best:
            exps.append(best)
        t += 1
    exps.extend([c] * (m - t))
    return sorted(exps)


@dataclass(frozen=True)
class HowellForm:
    """Howell form of the column span of a matrix over Z/N.

    Attributes:
        modulus: N.
        rows: Nonzero rows of the canonical form (a basis of the span, as row vectors).
        cokernel: Exponents e_i of the cokernel sum of Z/p^{e_i} (N = p^c).
    """

    modulus: int
    rows: tuple[tuple[int, ...], ...]
    cokernel: tuple[int, ...]

    def span_size(self) -> int:
        size = 1
        for r in self.rows:
            lead = next(x for x in r if x)
            size *= self.modulus // lead
        return size


def _unit_normalizer(a: int, N: int) -> int:
    """A unit u mod N with a*u = gcd(a, N) mod N."""
    from math import gcd

    g = gcd(a, N)
    n1 = N // g
    u = pow(a // g, -1, n1) if n1 > 1 else 1
    while gcd(u, N) != 1:
        u += n1
    return u


def _echelon_mod(rows: list[list[int]], N: int, ncols: int) -> list[list[int]]:
    M = [[x % N for x in r] for r in rows if any(x % N for x in r)]
    r = 0
    for c in range(ncols):
        if r >= len(M):
            break
        for i in range(r + 1, len(M)):
            b = M[i][c]
            if not b:
                continue
            a = M[r][c]
            g, s, t = ZZ.gcdex(a, b)
            x, y = M[r], M[i]
            M[r] = [(s * u + t * w) % N for u, w in zip(x, y)]
            M[i] = [((a // g) * w - (b // g) * u) % N for u, w in zip(x, y)]
        if M[r][c]:
            u = _unit_normalizer(M[r][c], N)
            M[r] = [x * u % N for x in M[r]]
            g = M[r][c]
            for k in range(r):
                q = M[k][c] // g
                if q:
                    M[k] = [(x - q * y) % N for x, y in zip(M[k], M[r])]
            r += 1
    return M[:r]


def _howell_rows(rows: list[list[int]], N: int) -> list[list[int]]:
    from math import gcd

    ncols = len(rows[0]) if rows else 0
    M = _echelon_mod(rows, N, ncols)
    while True:
        # Howell property: multiples of a row that kill its pivot must stay in the span
        extra = []
        for row in M:
            lead = next(x for x in row if x)
            prod = [x * (N // gcd(lead, N)) % N for x in row]
            if any(prod):
                extra.append(prod)
        new = _echelon_mod(M + extra, N, ncols)
        if new == M:
            return M
        M = new


def howell_form(A, modulus: int | None = None) -> HowellForm:
    """Howell form of the column span of A over Z/p^c, with its cokernel type."""
    if isinstance(A, ExactMatrix):
        if modulus is None:
            if not isinstance(A.ring, IntegersMod):
                raise ValueError("modulus required")
            modulus = A.ring.modulus
        rows = [list(r) for r in A.entries]
    else:
        rows = [list(map(int, r)) for r in A]
    pp = prime_power(modulus)
    if pp is None:
        raise ValueError("Howell cokernel types are implemented for prime-power moduli")
    cols = [[rows[i][j] % modulus for i in range(len(rows))] for j in range(len(rows[0]) if rows else 0)]
    H = _howell_rows(cols, modulus) if cols else []
    exps = local_cokernel_exponents(rows, *pp)
    return HowellForm(modulus, tuple(tuple(r) for r in H), tuple(exps))


def sylvester_matrix(phi: Sequence, psi: Sequence, ring: Ring = ZZ) -> ExactMatrix:
    """Matrix of (f, g) -> f*phi + g*psi with deg f < deg psi, deg g < deg phi.

    Domain and codomain use the ascending monomial basis 1, x, x^2, ...;
    the first deg(psi) columns hold x^i * phi, the rest x^j * psi.
    """
    phi, psi = _int_coeffs(phi), _int_coeffs(psi)
    dphi, dpsi = len(phi) - 1, len(psi) - 1
    N = dphi + dpsi
    rows = [[0] * N for _ in range(N)]
    for i in range(dpsi):
        for k, c in enumerate(phi):
            rows[i + k][i] = c
    for j in range(dphi):
        for k, c in enumerate(psi):
            rows[j + k][dpsi + j] = c
    return ExactMatrix.from_rows(ring, rows, N)


def _int_coeffs(f) -> list[int]:
    if isinstance(f, FieldPolynomial):
        c = list(f.coeffs)
    else:
        c = [int(x) for x in f]
    while c and c[-1] == 0:
        c.pop()
    return c


def resultant(phi, psi, ring: Ring = ZZ):
    """Res(phi, psi) as the Sylvester determinant.

    Over ZZ the value is exact. Over a prime field the residue is returned.
    Over Z/p^c the answer is a CappedDet valuation verdict.
    """
    phi, psi = _int_coeffs(phi), _int_coeffs(psi)
    if len(phi) <= 1 and len(psi) <= 1:
        raise ValueError("resultant of two constants is undefined")
    if not phi or not psi:
        zero = ring.zero()
        if isinstance(ring, IntegersMod) and not ring.is_field:
            p, c = ring.prime_power
            return CappedDet(c, True, None)
        return zero
    S = sylvester_matrix(phi, psi, ZZ)
    if ring is ZZ:
        return det_integer(S)
    if isinstance(ring, IntegersMod):
        if ring.is_field:
            return det_over_field(ExactMatrix.from_rows(ring, S.entries, S.ncols))
        p, c = ring.prime_power
        return det_valuation_capped(S, p, c)
    raise ValueError(f"unsupported ring {ring}")


def discriminant(phi) -> int:
    """Discriminant of a monic integer polynomial.

    Equal to (-1)^(n(n-1)/2) Res(phi, phi'), so x^2 + bx + c gives b^2 - 4c.
    """
    c = _int_coeffs(phi)
    n = len(c) - 1
    if n < 1 or c[-1] != 1:
        raise ValueError("discriminant needs a monic polynomial of degree >= 1")
    if n == 1:
        return 1
    dphi = [k * a for k, a in enumerate(c)][1:]
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * det_integer(sylvester_matrix(c, dphi, ZZ))
