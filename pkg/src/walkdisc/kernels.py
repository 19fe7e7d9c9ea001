"""Batched numpy kernels for the Monte Carlo paths.

Every function takes a leading batch axis and processes all samples in
lockstep. Integer matrices hold residues mod p or p**2; finite-ring
matrices hold integer element codes and are driven by the lookup tables
from ``rings.RingTables``.
"""

from __future__ import annotations

import numpy as np

from .rings import RingTables


def krylov_columns(M: np.ndarray, z: np.ndarray, modulus: int) -> np.ndarray:
    """Walk matrices [z, Mz, ..., M^{n-1} z] mod ``modulus`` for a batch.

    Args:
        M: (B, n, n) integer matrices.
        z: (B, n) integer vectors.
        modulus: Reduction modulus.

    Returns:
        (B, n, n) int64 array whose k-th column is M^k z mod modulus.
    """
    B, n, _ = M.shape
    # float32 is exact while every partial sum stays below 2**24
    exact32 = (modulus - 1) ** 2 * n < 2**24
    ftype = np.float32 if exact32 else np.float64
    Mf = (M % modulus).astype(ftype)
    v = (z % modulus).astype(ftype)[:, :, None]
    W = np.empty((B, n, n), dtype=np.int64)
    for k in range(n):
        W[:, :, k] = v[:, :, 0]
        if k + 1 < n:
            v = np.matmul(Mf, v) % modulus
    return W


def _pack_bits(X: np.ndarray) -> np.ndarray:
    B, n, m = X.shape
    by = np.packbits(X.astype(np.uint8), axis=-1, bitorder="little")
    words = -(-m // 64)
    out = np.zeros((B, n, words * 8), dtype=np.uint8)
    out[:, :, : by.shape[-1]] = by
    return out.view(np.uint64)


def gf2_eliminate(X: np.ndarray):
    """Row-reduce a batch of 0/1 matrices over GF(2), tracking row operations.

    Args:
        X: (B, n, m) array with entries in {0, 1}.

    Returns:
        rank: (B,) ranks.
        left_kernel: (B, n, n) 0/1 array; for sample b, rows rank[b]..n-1
            form a basis of {u : u^T X = 0 mod 2}.
    """
    B, n, m = X.shape
    aug = np.concatenate([X & 1, np.broadcast_to(np.eye(n, dtype=X.dtype), (B, n, n))], axis=2)
    R = _pack_bits(aug)
    ar = np.arange(B)
    rows = np.arange(n)
    r = np.zeros(B, dtype=np.int64)
    for c in range(m):
        w, b = divmod(c, 64)
        bit = ((R[:, :, w] >> np.uint64(b)) & np.uint64(1)).astype(bool)
        cand = bit & (rows[None, :] >= r[:, None])
        i = cand.argmax(axis=1)
        has = cand[ar, i]
        sw = np.flatnonzero(has & (i != r))
        if sw.size:
            rs, is_ = r[sw], i[sw]
            tmp = R[sw, rs].copy()
            R[sw, rs] = R[sw, is_]
            R[sw, is_] = tmp
            tmp = bit[sw, rs].copy()
            bit[sw, rs] = bit[sw, is_]
            bit[sw, is_] = tmp
        mask = bit & (rows[None, :] > r[:, None]) & has[:, None]
        pivot_rows = R[ar, np.minimum(r, n - 1)]
        R ^= mask[:, :, None].astype(np.uint64) * pivot_rows[:, None, :]
        r += has
    bits = np.unpackbits(R.view(np.uint8), axis=-1, bitorder="little")
    return r, bits[:, :, m : m + n].astype(np.int64)


def gf2_rank(X: np.ndarray) -> np.ndarray:
    return gf2_eliminate(X)[0]


def walk_valuation_p2(W4: np.ndarray) -> np.ndarray:
    """min(v_2(det W), 2) for a batch of matrices given mod 4.

    Corank 0 mod 2 gives 0 and corank >= 2 gives 2. For corank 1 with
    left and right kernel vectors u, v mod 2, v_2(det W) = 1 exactly when
    u^T W v is nonzero mod 4 (any integer lifts of u and v will do).
    """
    B, n, _ = W4.shape
    rank, left = gf2_eliminate((W4 & 1).astype(np.uint8))
    corank = n - rank
    out = np.where(corank == 0, 0, 2)
    one = np.flatnonzero(corank == 1)
    if one.size:
        Wsub = W4[one]
        u = left[one, n - 1]
        rank_t, left_t = gf2_eliminate((np.swapaxes(Wsub, 1, 2) & 1).astype(np.uint8))
        v = left_t[:, n - 1]
        s = np.einsum("bi,bij,bj->b", u, Wsub, v) % 4
        out[one] = np.where(s != 0, 1, 2)
    return out


def capped_valuation(A: np.ndarray, p: int, cap: int = 2) -> np.ndarray:
    """min(v_p(det A), cap) for a batch of square matrices, cap in {1, 2}.

    Gaussian elimination mod p**cap with unit pivots (partial pivoting,
    full search only when a column has no unit). When no unit remains the
    residual block has all entries divisible by p; its size k contributes
    at least k to the valuation, and a 1x1 residual decides v = 1 exactly.
    """
    if cap not in (1, 2):
        raise ValueError("cap must be 1 or 2")
    m = p**cap
    dtype = np.int16 if (m - 1) * m < 2**15 else np.int64
    A = (A % m).astype(dtype)
    B, n, _ = A.shape
    inv = np.zeros(m, dtype=dtype)
    for u in range(m):
        if u % p:
            inv[u] = pow(u, -1, m)
    stop = np.full(B, n)
    active = np.ones(B, dtype=bool)
    ar = np.arange(B)
    for s in range(n):
        col = A[:, s:, s] % p != 0
        i = col.argmax(axis=1) + s
        has = col[ar, i - s]
        for b in np.flatnonzero(active & ~has):
            sub = A[b, s:, s:] % p != 0
            if not sub.any():
                stop[b] = s
                active[b] = False
                continue
            ii, jj = np.unravel_index(sub.argmax(), sub.shape)
            A[b, :, [s, s + jj]] = A[b, :, [s + jj, s]]
            i[b] = ii + s
        if not active.any():
            break
        sw = np.flatnonzero(active & (i != s))
        if sw.size:
            tmp = A[sw, s].copy()
            A[sw, s] = A[sw, i[sw]]
            A[sw, i[sw]] = tmp
        piv = A[:, s, s]
        f = (A[:, s + 1 :, s] * inv[piv][:, None]) % m
        f[~active] = 0
        A[:, s + 1 :, s + 1 :] -= f[:, :, None] * A[:, s, None, s + 1 :]
        A[:, s + 1 :, s + 1 :] %= m
    k = n - stop
    if cap == 1:
        return np.where(k == 0, 0, 1)
    v = np.where(k == 0, 0, 2)
    last = A[:, n - 1, n - 1].astype(np.int64) % m
    v[(k == 1) & (last != 0)] = 1
    return v


def berkowitz_charpoly(A: np.ndarray, modulus: int) -> np.ndarray:
    """Characteristic polynomials det(xI - A) mod ``modulus`` for a batch.

    Returns:
        (B, n+1) int64 coefficients, low degree first (monic).
    """
    A = (A % modulus).astype(np.int64)
    B, n, _ = A.shape
    poly = np.ones((B, 1), dtype=np.int64)  # high degree first
    for r in range(1, n + 1):
        lead = A[:, : r - 1, : r - 1]
        row = A[:, r - 1, : r - 1]
        v = A[:, : r - 1, r - 1]
        t = np.empty((B, r + 1), dtype=np.int64)
        t[:, 0] = 1
        t[:, 1] = -A[:, r - 1, r - 1] % modulus
        for k in range(r - 1):
            t[:, k + 2] = -np.einsum("bi,bi->b", row, v) % modulus
            if k + 1 < r - 1:
                v = np.einsum("bij,bj->bi", lead, v) % modulus
        new = np.zeros((B, r + 1), dtype=np.int64)
        for j in range(r):
            new[:, j : j + r + 1 - j] += t[:, : r + 1 - j] * poly[:, j : j + 1]
        poly = new % modulus
    return poly[:, ::-1].copy()


def sylvester_batch(phi: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """Sylvester matrices for batches of coefficient rows (low degree first).

    The formal degrees are the row lengths minus one, so leading
    coefficients that vanish modulo a prime are kept in place.
    """
    B, lphi = phi.shape
    _, lpsi = psi.shape
    dphi, dpsi = lphi - 1, lpsi - 1
    N = dphi + dpsi
    S = np.zeros((B, N, N), dtype=np.int64)
    for i in range(dpsi):
        S[:, i : i + lphi, i] = phi
    for j in range(dphi):
        S[:, j : j + lpsi, dpsi + j] = psi
    return S


def derivative_coeffs(phi: np.ndarray, modulus: int) -> np.ndarray:
    n = phi.shape[1] - 1
    return phi[:, 1:] * np.arange(1, n + 1) % modulus


def local_eliminate(A: np.ndarray, tables: RingTables):
    """Unit-pivot elimination over a finite local ring (or field) given by tables.

    Pivots only on units. The cokernel of each sample equals the cokernel
    of its residual block A[b, stop[b]:, stop[b]:], whose entries all lie
    in the maximal ideal.

    Args:
        A: (B, n, c) element codes. Modified copy is returned.
        tables: Lookup tables of the ring.

    Returns:
        stop: (B,) number of unit pivots (the rank over the residue field).
        A: Transformed codes; rows and columns are permuted so that the
           residual block sits in the bottom-right corner.
    """
    A = A.copy()
    B, n, c = A.shape
    unit, inv, mul, sub = tables.unit, tables.inv, tables.mul, tables.sub
    stop = np.full(B, min(n, c))
    active = np.ones(B, dtype=bool)
    ar = np.arange(B)
    for s in range(min(n, c)):
        col = unit[A[:, s:, s]]
        i = col.argmax(axis=1) + s
        has = col[ar, i - s]
        for b in np.flatnonzero(active & ~has):
            blk = unit[A[b, s:, s:]]
            if not blk.any():
                stop[b] = s
                active[b] = False
                continue
            ii, jj = np.unravel_index(blk.argmax(), blk.shape)
            A[b, :, [s, s + jj]] = A[b, :, [s + jj, s]]
            i[b] = ii + s
        if not active.any():
            break
        sw = np.flatnonzero(active & (i != s))
        if sw.size:
            tmp = A[sw, s].copy()
            A[sw, s] = A[sw, i[sw]]
            A[sw, i[sw]] = tmp
        act = np.flatnonzero(active)
        if s + 1 >= n:
            continue
        piv_inv = inv[A[act, s, s]]
        f = mul[A[act, s + 1 :, s], piv_inv[:, None]]
        prod = mul[f[:, :, None], A[act, s, None, s + 1 :]]
        A[act, s + 1 :, s + 1 :] = sub[A[act, s + 1 :, s + 1 :], prod]
        A[act, s + 1 :, s] = 0
    return stop, A


def field_rank(A: np.ndarray, tables: RingTables) -> np.ndarray:
    """Ranks over a finite field given by tables (every nonzero code is a unit)."""
    return local_eliminate(A, tables)[0]


def table_matmul(X: np.ndarray, Y: np.ndarray, tables: RingTables) -> np.ndarray:
    """Batched matrix product of element codes: (B, n, k) x (k, m) or (B, k, m)."""
    B, n, k = X.shape
    Yb = np.broadcast_to(Y, (B,) + Y.shape[-2:])
    m = Yb.shape[2]
    out = np.zeros((B, n, m), dtype=X.dtype)
    for t in range(k):
        out = tables.add[out, tables.mul[X[:, :, t, None], Yb[:, None, t, :]]]
    return out
