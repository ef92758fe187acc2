"""Exact dense linear algebra over a :class:`GroundField`.

Vectors are columns.  Every routine returns fresh arrays in the field's dtype.
"""

from __future__ import annotations

import numpy as np

from .field import GroundField


def rref(F: GroundField, A: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    R = np.array(A, dtype=F.dtype, copy=True)
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    p = F.characteristic
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c] != 0)[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            R[[r, k]] = R[[k, r]]
        inv = F.inv(R[r, c])
        R[r] = F.reduce(R[r] * inv)
        col = R[:, c].copy()
        col[r] = 0
        others = np.nonzero(col != 0)[0]
        if others.size:
            R[others] = R[others] - np.outer(col[others], R[r])
            if p:
                R[others] %= p
        pivots.append(c)
        r += 1
    return R, pivots


def rank(F: GroundField, A: np.ndarray) -> int:
    if A.size == 0:
        return 0
    return len(rref(F, A)[1])


def nullspace(F: GroundField, A: np.ndarray) -> np.ndarray:
    """Columns spanning {x : A x = 0}."""
    n = A.shape[1]
    if A.shape[0] == 0:
        return F.eye(n)
    R, piv = rref(F, A)
    free = [c for c in range(n) if c not in set(piv)]
    N = F.zeros((n, len(free)))
    for j, f in enumerate(free):
        N[f, j] = F.one()
        for i, pc in enumerate(piv):
            N[pc, j] = F.neg(R[i, f])
    return N


def left_nullspace(F: GroundField, A: np.ndarray) -> np.ndarray:
    """Rows spanning {y : y A = 0}."""
    return nullspace(F, A.T).T


def colspace(F: GroundField, A: np.ndarray) -> np.ndarray:
    """An echelon basis (as columns) of the column space of ``A``."""
    if A.shape[1] == 0:
        return F.zeros((A.shape[0], 0))
    R, piv = rref(F, A.T)
    return np.ascontiguousarray(R[: len(piv)].T)


def independent_columns(F: GroundField, A: np.ndarray) -> list[int]:
    """Indices of the first maximal linearly independent set of columns."""
    if A.shape[1] == 0 or A.shape[0] == 0:
        return []
    return rref(F, A)[1]


def solve(F: GroundField, A: np.ndarray, B: np.ndarray) -> np.ndarray | None:
    """Some X with ``A X = B``, or ``None`` when the system is inconsistent."""
    m, n = A.shape
    k = B.shape[1]
    if m == 0:
        return F.zeros((n, k))
    R, piv = rref(F, np.concatenate([A, B], axis=1))
    if any(c >= n for c in piv):
        return None
    X = F.zeros((n, k))
    for i, c in enumerate(piv):
        X[c] = R[i, n:]
    return X


def inverse(F: GroundField, A: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    if n == 0:
        return F.zeros((0, 0))
    R, piv = rref(F, np.concatenate([A, F.eye(n)], axis=1))
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return np.ascontiguousarray(R[:, n:])


def is_invertible(F: GroundField, A: np.ndarray) -> bool:
    return A.shape[0] == A.shape[1] and rank(F, A) == A.shape[0]


def intersect(F: GroundField, U: np.ndarray, V: np.ndarray) -> np.ndarray:
    """Basis columns of colspace(U) ∩ colspace(V)."""
    if U.shape[1] == 0 or V.shape[1] == 0:
        return F.zeros((U.shape[0], 0))
    N = nullspace(F, np.concatenate([U, F.reduce(-V)], axis=1))
    return colspace(F, F.matmul(U, N[: U.shape[1]]))


def preimage(F: GroundField, A: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Basis columns of {x : A x ∈ colspace(W)}."""
    n = A.shape[1]
    if W.shape[1] == 0:
        return nullspace(F, A)
    N = nullspace(F, np.concatenate([A, F.reduce(-W)], axis=1))
    return colspace(F, N[:n])


def complement(F: GroundField, U: np.ndarray, n: int | None = None) -> np.ndarray:
    """Standard basis columns completing colspace(U) to the whole space."""
    n = U.shape[0] if n is None else n
    if U.shape[1] == 0:
        return F.eye(n)
    _, piv = rref(F, np.concatenate([U, F.eye(n)], axis=1))
    extra = [c - U.shape[1] for c in piv if c >= U.shape[1]]
    out = F.zeros((n, len(extra)))
    for j, i in enumerate(extra):
        out[i, j] = F.one()
    return out


def coordinates(F: GroundField, basis: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Coordinates of the columns of ``v`` in a basis given by independent columns."""
    X = solve(F, basis, v)
    if X is None:
        raise ValueError("vector outside the span")
    return X


def contains(F: GroundField, U: np.ndarray, v: np.ndarray) -> bool:
    """Whether every column of ``v`` lies in colspace(U)."""
    if v.shape[1] == 0:
        return True
    if U.shape[1] == 0:
        return not np.any(v != 0)
    return rank(F, np.concatenate([U, v], axis=1)) == rank(F, U)


def block_diag(F: GroundField, blocks: list[np.ndarray]) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = F.zeros((rows, cols))
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def hstack(F: GroundField, mats: list[np.ndarray], rows: int) -> np.ndarray:
    mats = [m for m in mats if m.shape[1]]
    if not mats:
        return F.zeros((rows, 0))
    return np.concatenate(mats, axis=1)


def vstack(F: GroundField, mats: list[np.ndarray], cols: int) -> np.ndarray:
    mats = [m for m in mats if m.shape[0]]
    if not mats:
        return F.zeros((0, cols))
    return np.concatenate(mats, axis=0)


def matpow(F: GroundField, A: np.ndarray, k: int) -> np.ndarray:
    out = F.eye(A.shape[0])
    base = A
    while k:
        if k & 1:
            out = F.matmul(out, base)
        base = F.matmul(base, base)
        k >>= 1
    return out


def is_zero(A: np.ndarray) -> bool:
    return not np.any(A != 0)
