"""Dense linear algebra over F_p on int64 numpy arrays."""

from __future__ import annotations

import numpy as np


def as_fp(A, p: int, shape=None) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    if shape is not None and A.size == 0:
        A = A.reshape(shape)
    return A % p


def rref(A, p: int):
    """Reduced row echelon form and pivot columns."""
    R = as_fp(A, p).copy()
    if R.ndim != 2:
        raise ValueError("rref expects a matrix")
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            R[[r, k]] = R[[k, r]]
        inv = pow(int(R[r, c]), -1, p)
        R[r] = (R[r] * inv) % p
        col = R[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            R[nzr] = (R[nzr] - np.outer(col[nzr], R[r])) % p
        pivots.append(c)
        r += 1
    return R, pivots


def rank(A, p: int) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    if A.shape[0] > A.shape[1]:
        A = A.T
    return len(rref(A, p)[1])


def nullspace(A, p: int) -> np.ndarray:
    """Columns spanning {v : A v = 0}."""
    A = np.asarray(A, dtype=np.int64)
    rows, cols = A.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    R, pivots = rref(A, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    N = np.zeros((cols, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        N[f, k] = 1
        for i, pc in enumerate(pivots):
            N[pc, k] = (-R[i, f]) % p
    return N


def left_nullspace(A, p: int) -> np.ndarray:
    """Rows y with y A = 0; the row space is the annihilator of the column space."""
    A = np.asarray(A, dtype=np.int64)
    return nullspace(A.T, p).T


def column_basis(A, p: int) -> np.ndarray:
    """Independent columns of A spanning its column space."""
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0:
        return np.zeros((A.shape[0], 0), dtype=np.int64)
    _, pivots = rref(A, p)
    return A[:, pivots] % p


def extend_to_complement(S, V, p: int) -> np.ndarray:
    """Columns of V (in order) that extend span(S) to span(S) + span(V), one at a time."""
    S = np.asarray(S, dtype=np.int64)
    V = np.asarray(V, dtype=np.int64)
    dim = V.shape[0] if V.ndim == 2 else S.shape[0]
    if S.size == 0:
        S = np.zeros((dim, 0), dtype=np.int64)
    if V.size == 0:
        return np.zeros((dim, 0), dtype=np.int64)
    M = np.concatenate([S, V], axis=1)
    _, pivots = rref(M, p)
    k = S.shape[1]
    chosen = [c - k for c in pivots if c >= k]
    return V[:, chosen] % p


def solve(A, b, p: int):
    """Some x with A x = b (b may be a matrix), or None if inconsistent."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    single = b.ndim == 1
    if single:
        b = b.reshape(-1, 1)
    rows, cols = A.shape
    if cols == 0:
        if np.any(b % p):
            return None
        x = np.zeros((0, b.shape[1]), dtype=np.int64)
        return x[:, 0] if single else x
    R, pivots = rref(np.concatenate([A, b], axis=1), p)
    if any(pc >= cols for pc in pivots):
        return None
    x = np.zeros((cols, b.shape[1]), dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = R[i, cols:]
    return x[:, 0] if single else x


def in_span(S, v, p: int) -> bool:
    return solve(S, v, p) is not None


def matmul(A, B, p: int) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.shape[1] == 0:
        return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    return (A @ B) % p
