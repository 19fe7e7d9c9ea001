"""Cokernel fingerprints for matrices over the truncated local ring T.

T = Z[x]/(p^2, beta^e) is a free Z/p^2-module with basis 1, x, ..., x^{L-1}
(L = e * deg beta), so a matrix over T expands to a Z/p^2 matrix of
multiplication blocks. The fingerprint records exactly the cokernel data
the per-beta events need.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

import numpy as np

from .linalg import ExactMatrix, local_cokernel_exponents, rank_over_field, smith_normal_form
from .polynomials import FieldPolynomial, multiplicity
from .rings import PolynomialRing, TruncatedRing

MOD_P_CLASSES = ("0", "Fq", "Fq2", "beta2", "larger")
MOD_BETA_CLASSES = ("0", "Fq", "other")


@dataclass(frozen=True)
class ModuleFingerprint:
    """Isomorphism data of coker(A) for A over T.

    Attributes:
        p, beta, beta_power: The truncation Z[x]/(p^2, beta^beta_power).
        nrows, ncols: Shape of the presentation matrix.
        rank: Rank of A mod (p, beta) over F_q.
        mod_p_class: coker(A)/p as an F_p[x]/beta^e-module: "0", "Fq",
            "Fq2" (F_q + F_q), "beta2" (F_p[x]/beta^2) or "larger".
        mod_beta_class: coker(A)/beta as a module over Z/p^2[x]/beta:
            "0", "Fq" or "other".
        killed_by_p: p annihilates the truncated cokernel.
        killed_by_beta: beta annihilates the truncated cokernel.
    """

    p: int
    beta: tuple[int, ...]
    beta_power: int
    nrows: int
    ncols: int
    rank: int
    mod_p_class: str
    mod_beta_class: str
    killed_by_p: bool
    killed_by_beta: bool

    @property
    def corank(self) -> int:
        return self.nrows - self.rank

    def classes(self) -> tuple:
        """The shape-independent part, used to compare cokernels."""
        return (self.corank, self.mod_p_class, self.mod_beta_class, self.killed_by_p, self.killed_by_beta)


def _mult_matrix(coeffs, red: np.ndarray, m: int) -> np.ndarray:
    """Matrix of multiplication by an element acting on the monomial basis."""
    L = red.shape[1]
    out = np.zeros((L, L), dtype=np.int64)
    for j in range(L):
        col = np.zeros(L, dtype=np.int64)
        for i, a in enumerate(coeffs):
            if a:
                col += a * red[i + j]
        out[:, j] = col % m
    return out


@lru_cache(maxsize=None)
def _reductions(p: int, modulus: tuple[int, ...], L: int, count: int) -> np.ndarray:
    from .rings import _power_reductions

    return _power_reductions(p * p, list(modulus), L, count)


def _expand(rows, red: np.ndarray, m: int, L: int) -> np.ndarray:
    """Z/m presentation of a matrix whose entries are coefficient tuples."""
    n, c = len(rows), len(rows[0]) if rows else 0
    P = np.zeros((n * L, c * L), dtype=np.int64)
    for i in range(n):
        for j in range(c):
            P[i * L : (i + 1) * L, j * L : (j + 1) * L] = _mult_matrix(rows[i][j], red, m)
    return P


def _log_size(P: np.ndarray, p: int) -> int:
    return sum(local_cokernel_exponents(P.tolist(), p, 2))


def _mod_p_class(exps: list[int]) -> str:
    if not exps:
        return "0"
    if exps == [1]:
        return "Fq"
    if exps == [1, 1]:
        return "Fq2"
    if exps == [2]:
        return "beta2"
    return "larger"


def truncated_cokernel_fingerprint(A: ExactMatrix, z=None) -> ModuleFingerprint:
    """Fingerprint of coker(A), or of coker([A | z]) when z is given.

    Args:
        A: Matrix over a TruncatedRing.
        z: Optional column appended to A (sequence of ring elements).
    """
    T = A.ring
    if not isinstance(T, TruncatedRing):
        raise ValueError("fingerprints are defined over a truncated local ring")
    rows = [list(r) for r in A.entries]
    if z is not None:
        z = [T.coerce(x) for x in z]
        if len(z) != A.nrows:
            raise ValueError("appended column has the wrong length")
        rows = [r + [zi] for r, zi in zip(rows, z)]
    n = len(rows)
    c = len(rows[0]) if rows else 0
    p, beta, e, d, L, m = T.p, T.beta, T.beta_power, T.degree, T.length, T.m

    # (i) rank over the residue field
    F = T.residue_field
    rank = rank_over_field(ExactMatrix.from_rows(F, [[T.residue(x) for x in r] for r in rows], c)) if n else 0

    # (ii) coker mod p over F_p[x]/beta^e via the Smith form of [A mod p | beta^e I]
    P = PolynomialRing(p)
    be = beta**e
    blk = [
        [FieldPolynomial(p, x.coeffs) for x in r] + [be if k == i else P.zero() for k in range(n)]
        for i, r in enumerate(rows)
    ]
    factors = smith_normal_form(ExactMatrix.from_rows(P, blk, c + n)).factors if n else ()
    exps = sorted(multiplicity(f, beta) for f in factors if f.degree > 0)
    mod_p_class = _mod_p_class(exps)

    # (iii) coker mod beta over Z/p^2[x]/beta
    red_b = _reductions(p, tuple(beta.coeffs), d, L + d - 1)
    Pb = _expand([[x.coeffs for x in r] for r in rows], red_b, m, d)
    bexps = local_cokernel_exponents(Pb.tolist(), p, 2) if n else []
    if not bexps:
        mod_beta_class = "0"
    elif bexps == [1] * d and (n - rank) == 1:
        mod_beta_class = "Fq"
    else:
        mod_beta_class = "other"

    # (iv) annihilators of the full truncated cokernel
    red_t = _reductions(p, T.modulus_poly, L, 2 * L - 1)
    PT = _expand([[x.coeffs for x in r] for r in rows], red_t, m, L)
    base = _log_size(PT, p)

    def killed_by(t_coeffs) -> bool:
        if base == 0:
            return True
        mt = _mult_matrix(t_coeffs, red_t, m)
        diag = np.kron(np.eye(n, dtype=np.int64), mt)
        return _log_size(np.concatenate([PT, diag], axis=1), p) == base

    killed_p = killed_by((p,))
    killed_beta = killed_by(tuple(beta.coeffs))
    return ModuleFingerprint(
        p, tuple(beta.coeffs), e, n, c, rank, mod_p_class, mod_beta_class, killed_p, killed_beta
    )


def w_trivial(fp: ModuleFingerprint) -> bool:
    """coker([A | z]) = 0."""
    return fp.corank == 0


def w_fq(fp: ModuleFingerprint) -> bool:
    """coker([A | z]) is isomorphic to F_q."""
    return fp.corank == 1 and fp.killed_by_p and fp.killed_by_beta


def d_trivial(fp: ModuleFingerprint) -> bool:
    """coker(A)/p = 0."""
    return fp.mod_p_class == "0"


def d_fq(fp: ModuleFingerprint) -> bool:
    """coker(A)/p is isomorphic to F_q."""
    return fp.mod_p_class == "Fq"


def d_pair(fp: ModuleFingerprint) -> bool:
    """coker(A)/p = F_p[x]/beta^2 and coker(A)/beta = F_q."""
    return fp.mod_p_class == "beta2" and fp.mod_beta_class == "Fq"


EVENTS = {
    "W-trivial": w_trivial,
    "W-Fq": w_fq,
    "D-trivial": d_trivial,
    "D-Fq": d_fq,
    "D-pair": d_pair,
}

# events read off [A | z]; the others are read off A alone
WALK_EVENTS = ("W-trivial", "W-Fq")


def condition_wp_pieces(pieces: Mapping[tuple, ModuleFingerprint]) -> bool:
    """Walk condition from per-beta fingerprints of [A | z].

    Holds when every piece is trivial, or exactly one piece is nontrivial,
    sits at a linear beta and is isomorphic to F_p[x]/beta.
    """
    bad = [fp for fp in pieces.values() if not w_trivial(fp)]
    if not bad:
        return True
    return len(bad) == 1 and len(bad[0].beta) == 2 and w_fq(bad[0])


def condition_d1_pieces(pieces: Mapping[tuple, ModuleFingerprint]) -> bool:
    """Every piece of coker(A)/p is 0 or F_q."""
    return all(d_trivial(fp) or d_fq(fp) for fp in pieces.values())


def condition_d2_pieces(pieces: Mapping[tuple, ModuleFingerprint]) -> bool:
    """Exactly one linear piece is an F_p[x]/beta^2 pair; all others are 0 or F_q."""
    if any(fp.p == 2 for fp in pieces.values()):
        raise ValueError("condition needs an odd prime")
    pairs = [fp for fp in pieces.values() if d_pair(fp)]
    others = [fp for fp in pieces.values() if not d_pair(fp)]
    return (
        len(pairs) == 1
        and len(pairs[0].beta) == 2
        and all(d_trivial(fp) or d_fq(fp) for fp in others)
    )


def fingerprint_from_codes(ring: TruncatedRing, codes, z_codes=None) -> ModuleFingerprint:
    """Fingerprint of a matrix given by element codes (see TruncatedRing.index)."""
    codes = np.asarray(codes)
    A = ExactMatrix.from_rows(ring, [[ring.from_index(int(x)) for x in r] for r in codes], codes.shape[1])
    z = None if z_codes is None else [ring.from_index(int(x)) for x in z_codes]
    return truncated_cokernel_fingerprint(A, z)
