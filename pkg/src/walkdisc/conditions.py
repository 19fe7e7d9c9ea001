"""Walk-matrix and discriminant conditions on integer matrices.

Each condition has a fast route (capped determinants, characteristic
polynomials mod p) and a module route (cokernels via Smith forms), so
the two can be checked against each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import sympy

from .linalg import (
    ExactMatrix,
    charpoly_berkowitz,
    det_valuation_capped,
    left_kernel_over_field,
    local_cokernel_exponents,
    nullspace_over_field,
    smith_normal_form,
)
from .polynomials import (
    FieldPolynomial,
    as_poly,
    integer_poly_eval,
    is_irreducible,
    multiplicity,
    poly_gcd,
    squarefree_mod_p,
)
from .rings import ZZ, IntegersMod, PolynomialRing, valuation


def _int_rows(M) -> list[list[int]]:
    if isinstance(M, ExactMatrix):
        return [list(map(int, r)) for r in M.entries]
    return [list(map(int, r)) for r in np.asarray(M).tolist()]


def walk_matrix(M, zeta, modulus: int | None = None) -> ExactMatrix:
    """The walk matrix [zeta, M zeta, ..., M^{n-1} zeta].

    Args:
        M: Square integer matrix.
        zeta: Integer vector of matching length.
        modulus: Reduce entries mod this; None keeps exact integers.
    """
    rows = _int_rows(M)
    z = [int(x) for x in zeta]
    n = len(rows)
    if any(len(r) != n for r in rows) or len(z) != n:
        raise ValueError("walk matrix needs a square M and a vector of matching length")
    cols = [z]
    for _ in range(n - 1):
        v = cols[-1]
        w = [sum(a * b for a, b in zip(r, v)) for r in rows]
        cols.append([x % modulus for x in w] if modulus else w)
    ring = ZZ if modulus is None else IntegersMod(modulus)
    return ExactMatrix.from_rows(ring, [[cols[k][i] for k in range(n)] for i in range(n)], n)


@dataclass(frozen=True)
class WalkVerdict:
    """p-divisibility of det W.

    Attributes:
        p: The prime.
        kind: "V0" (p does not divide det W), "V1" (exactly p divides it),
            or "V2" (p**2 divides it).
        a: For V1, the scalar by which M acts on the one-dimensional
            cokernel of W mod p, as a residue in [0, p). None otherwise.
    """

    p: int
    kind: str
    a: int | None = None

    @property
    def squarefree_at_p(self) -> bool:
        return self.kind != "V2"


def _left_kernel_eigenvalue(M_rows, W: ExactMatrix, p: int) -> int:
    """Eigenvalue of M^T on the one-dimensional left kernel of W mod p."""
    F = IntegersMod(p)
    Wp = W.map(F, lambda x: x % p)
    ker = left_kernel_over_field(Wp)
    if len(ker) != 1:
        raise ValueError("left kernel is not one-dimensional")
    u = ker[0]
    n = len(u)
    Mtu = [sum(M_rows[j][i] * u[j] for j in range(n)) % p for i in range(n)]
    i = next(i for i in range(n) if u[i] % p)
    return Mtu[i] * pow(u[i], -1, p) % p


def walk_condition(M, zeta, p: int) -> WalkVerdict:
    """Classify v_p(det W) in {0, 1, >=2} with a capped determinant mod p**2."""
    rows = _int_rows(M)
    W = walk_matrix(rows, zeta, p * p)
    d = det_valuation_capped(W, p, 2)
    if d.capped:
        return WalkVerdict(p, "V2")
    if d.valuation == 0:
        return WalkVerdict(p, "V0")
    return WalkVerdict(p, "V1", _left_kernel_eigenvalue(rows, W, p))


@dataclass(frozen=True)
class AbelianGroupType:
    """Isomorphism type of a finitely generated abelian group.

    Attributes:
        free_rank: Rank of the free part.
        torsion: Sorted (prime, exponent) pairs, one per cyclic summand Z/p^e.
    """

    free_rank: int
    torsion: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_invariant_factors(cls, factors: Iterable[int], free_rank: int = 0) -> "AbelianGroupType":
        parts = []
        for d in factors:
            d = abs(int(d))
            if d == 0:
                free_rank += 1
                continue
            for q, e in sympy.factorint(d).items():
                parts.append((int(q), int(e)))
        return cls(free_rank, tuple(sorted(parts)))

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for q, e in self.torsion:
            out *= q**e
        return out

    def __str__(self):
        parts = ["Z"] * self.free_rank + [f"Z/{q}^{e}" if e > 1 else f"Z/{q}" for q, e in self.torsion]
        return " + ".join(parts) if parts else "0"


def localize_group(G: AbelianGroupType, p: int) -> AbelianGroupType:
    """Keep the p-primary torsion; the free rank becomes the Z_p-rank."""
    return AbelianGroupType(G.free_rank, tuple(t for t in G.torsion if t[0] == p))


def cokernel_type(A) -> AbelianGroupType:
    """Cokernel of an integer matrix (columns span the relations)."""
    A = A if isinstance(A, ExactMatrix) else ExactMatrix.from_rows(ZZ, _int_rows(A))
    snf = smith_normal_form(A)
    return AbelianGroupType.from_invariant_factors(snf.factors, A.nrows - snf.rank)


def local_invariant_exponents(factors: Sequence[int], p: int) -> list[int]:
    """p-adic valuations of nonzero invariant factors, dropping zeros."""
    out = []
    for d in factors:
        e = valuation(d, p)
        if e:
            out.append(e)
    return out


def walk_condition_module_oracle(M, zeta, p: int) -> WalkVerdict:
    """Walk verdict from the cokernel of W over Z, localized at p.

    The scalar a for a Z/p cokernel is read off the Smith transforms: if
    U W V = D and the Z/p summand sits at index i, M acts on it as
    (U M U^{-1})_{ii} mod p.
    """
    rows = _int_rows(M)
    n = len(rows)
    if n > 12:
        raise ValueError("exact module route is limited to n <= 12")
    W = walk_matrix(rows, zeta)
    snf = smith_normal_form(W, transforms=True)
    if snf.rank < n:
        return WalkVerdict(p, "V2")
    exps = [valuation(d, p) for d in snf.factors]
    local = sorted(e for e in exps if e)
    if not local:
        return WalkVerdict(p, "V0")
    if local != [1]:
        return WalkVerdict(p, "V2")
    i = exps.index(1)
    F = IntegersMod(p)
    U = snf.U
    # y = U^{-1} e_i mod p, from the kernel of [U | -e_i]
    aug = ExactMatrix.from_rows(F, [[x % p for x in U.entries[r]] + [-(1 if r == i else 0) % p] for r in range(n)], n + 1)
    y = nullspace_over_field(aug)[0]
    y = [c * pow(y[n], -1, p) % p for c in y[:n]]
    My = [sum(rows[r][c] * y[c] for c in range(n)) for r in range(n)]
    a = sum(U.entries[i][c] * My[c] for c in range(n)) % p
    return WalkVerdict(p, "V1", a)


def condition_wp(M, zeta, p: int) -> bool:
    """Walk condition at p via the cokernel of W mod p**2.

    Holds when that cokernel is 0 or Z/p; a one-dimensional F_p-module has
    a scalar x-action, so no further shape check is needed.
    """
    W = walk_matrix(_int_rows(M), zeta, p * p)
    return local_cokernel_exponents(W, p, 2) in ([], [1])


def charpoly_mod(M, modulus: int) -> list[int]:
    """Characteristic polynomial of an integer matrix mod ``modulus`` (low degree first)."""
    rows = _int_rows(M)
    A = ExactMatrix.from_rows(IntegersMod(modulus), rows, len(rows))
    return [int(c) for c in charpoly_berkowitz(A)]


def disc_mod_p(M, p: int) -> bool:
    """True iff p divides the discriminant of the characteristic polynomial."""
    phi = FieldPolynomial(p, tuple(charpoly_mod(M, p)))
    return not squarefree_mod_p(phi)


@dataclass(frozen=True)
class DiscVerdict:
    """p-divisibility of the discriminant of the characteristic polynomial.

    Attributes:
        p: The prime.
        kind: "coprime" (p does not divide it), "exact" (p divides it
            exactly once), or "square" (p**2 divides it).
        a: Witness root mod p for the "exact" case.
    """

    p: int
    kind: str
    a: int | None = None


def disc_exact_divisibility(M, p: int) -> DiscVerdict:
    """Decide v_p(disc) in {0, 1, >=2} for an odd prime p.

    v_p = 1 exactly when phi = (x - a)^2 xi mod p with xi square-free,
    xi(a) != 0, and phi(a) = det(aI - M) not divisible by p**2.
    """
    if p == 2:
        raise ValueError("exact divisibility test needs an odd prime")
    phi2 = charpoly_mod(M, p * p)
    phi = FieldPolynomial(p, tuple(phi2))
    if squarefree_mod_p(phi):
        return DiscVerdict(p, "coprime")
    g = poly_gcd(phi, phi.derivative())
    for a in range(p):
        if g(a):
            continue
        sq = FieldPolynomial.linear(a, p) ** 2
        xi, r = divmod(phi, sq)
        if not r.is_zero() or xi(a) == 0 or not squarefree_mod_p(xi):
            continue
        if integer_poly_eval(phi2, a, p * p) != 0:
            return DiscVerdict(p, "exact", a)
    return DiscVerdict(p, "square")


def disc_condition_odd_squarefree(M, primes: Iterable[int]):
    """Per-prime verdicts for "disc is odd and square-free at these primes".

    Returns:
        (dict prime -> bool, conjunction)
    """
    out = {}
    for p in primes:
        if p == 2:
            out[p] = not disc_mod_p(M, 2)
        else:
            out[p] = disc_exact_divisibility(M, p).kind != "square"
    return out, all(out.values())


def _char_matrix_mod_p(M, p: int) -> ExactMatrix:
    """x I - M over F_p[x]."""
    rows = _int_rows(M)
    n = len(rows)
    P = PolynomialRing(p)
    ent = [[FieldPolynomial(p, (-rows[i][j], 1 if i == j else 0)) for j in range(n)] for i in range(n)]
    return ExactMatrix.from_rows(P, ent, n)


def char_matrix_invariant_factors(M, p: int) -> tuple[FieldPolynomial, ...]:
    """Invariant factors of x I - M over F_p[x]; their product is phi_M mod p."""
    return smith_normal_form(_char_matrix_mod_p(M, p)).factors


def length_identity_check(M, p: int, beta) -> bool:
    """The beta-multiplicity of phi_M mod p equals the length of the beta-part
    of the cokernel of x I - M over F_p[x]."""
    beta = as_poly(beta, p)
    if not beta.is_monic() or not is_irreducible(beta):
        raise ValueError(f"{beta!r} is not monic irreducible")
    phi = FieldPolynomial(p, tuple(charpoly_mod(M, p)))
    lhs = multiplicity(phi, beta)
    rhs = sum(multiplicity(d, beta) for d in char_matrix_invariant_factors(M, p))
    return lhs == rhs


def _primary_lengths_at_most_one(factors: Sequence[FieldPolynomial]) -> bool:
    # Every primary component has length <= 1 iff the product of the chain is
    # square-free; with d_i | d_{i+1} that forces all but the last to be units.
    if any(d.degree > 0 for d in factors[:-1]):
        return False
    return squarefree_mod_p(factors[-1]) if factors else True


def condition_d1(M, p: int) -> bool:
    """Module route for "p does not divide the discriminant": every primary
    component of coker(x I - M) over F_p[x] is 0 or F_p[x]/beta."""
    return _primary_lengths_at_most_one(char_matrix_invariant_factors(M, p))


def condition_d2(M, p: int):
    """Module route for "p divides the discriminant exactly once" (p odd).

    Looks for a residue a whose (x - a)-component of coker(x I - M) over
    F_p[x] is F_p[x]/(x - a)^2, with every other component of length <= 1
    and coker(M - aI) over Z_p isomorphic to Z/p.

    Returns:
        (holds, witness a or None)
    """
    if p == 2:
        raise ValueError("condition needs an odd prime")
    factors = char_matrix_invariant_factors(M, p)
    rows = _int_rows(M)
    n = len(rows)
    found = []
    for a in range(p):
        beta = FieldPolynomial.linear(a, p)
        lam = [multiplicity(d, beta) for d in factors]
        if sorted(e for e in lam if e) != [2]:
            continue
        rest = [d // beta ** multiplicity(d, beta) for d in factors]
        if not _primary_lengths_at_most_one([d for d in rest if d.degree > 0] or [FieldPolynomial(p, (1,))]):
            continue
        shifted = [[rows[i][j] - (a if i == j else 0) for j in range(n)] for i in range(n)]
        if local_cokernel_exponents(shifted, p, 2) == [1]:
            found.append(a)
    if len(found) > 1:
        raise AssertionError(f"several witnesses {found} for one matrix")
    return (True, found[0]) if found else (False, None)
