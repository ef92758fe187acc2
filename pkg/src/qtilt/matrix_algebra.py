"""Subalgebras of matrix algebras: coordinates, radical, minimal polynomials.

An algebra is given by a list of square matrices spanning it (closed under
products).  The radical uses the trace criterion in characteristic 0 and the
Cohen-Ivanyos-Wales refinement of it in characteristic p.
"""

from __future__ import annotations

import math

import numpy as np
import sympy

from . import linalg as la
from .field import GroundField


class MatrixAlgebra:
    """Span of linearly independent square matrices, closed under products."""

    def __init__(self, F: GroundField, basis: list[np.ndarray]):
        self.F = F
        self.basis = basis
        self.d = len(basis)
        self.n = basis[0].shape[0] if basis else 0
        if self.d:
            B = np.stack([b.reshape(-1) for b in basis], axis=1)
            rows = la.independent_columns(F, B.T)
            if len(rows) != self.d:
                raise ValueError("basis matrices are dependent")
            self._rows = rows
            self._inv = la.inverse(F, B[rows])
        else:
            self._rows, self._inv = [], F.zeros((0, 0))

    def coords(self, X: np.ndarray) -> np.ndarray:
        return self.F.matmul(self._inv, X.reshape(-1)[self._rows][:, None])[:, 0]

    def element(self, c: np.ndarray) -> np.ndarray:
        F = self.F
        out = F.zeros((self.n, self.n))
        for ci, b in zip(c, self.basis):
            if ci != 0:
                out = F.reduce(out + ci * b)
        return out

    def structure(self) -> np.ndarray:
        """``S[i, j]`` = coordinates of basis[i] @ basis[j]."""
        F = self.F
        S = np.empty((self.d, self.d), dtype=object)
        for i, x in enumerate(self.basis):
            for j, y in enumerate(self.basis):
                S[i, j] = self.coords(F.matmul(x, y))
        return S

    def radical(self) -> np.ndarray:
        """Columns (coordinates) spanning the Jacobson radical."""
        F = self.F
        if self.d == 0:
            return F.zeros((0, 0))
        p = F.characteristic
        if p == 0 or p > self.n:
            # tr(x y) = vec(x) . vec(y^T)
            X = np.stack([b.reshape(-1) for b in self.basis])
            Y = np.stack([np.ascontiguousarray(b.T).reshape(-1) for b in self.basis])
            return la.nullspace(F, F.matmul(X, Y.T))
        return self._radical_modular()

    def _radical_modular(self) -> np.ndarray:
        F = self.F
        p = F.characteristic
        top = int(math.floor(math.log(self.n, p))) if self.n > 1 else 0
        I = F.eye(self.d)  # current ideal, as coordinate columns
        fast = F.dtype is not object and self.n * (p ** (top + 1)) ** 2 < (1 << 62)
        basis = np.stack(self.basis).astype(np.int64) if fast else None
        for i in range(top + 1):
            mod = p ** (i + 1)
            elems = [self.element(I[:, j]) for j in range(I.shape[1])]
            if fast:
                G = _g_batched(np.stack(elems).astype(np.int64), basis, p, i)
            else:
                G = F.zeros((self.d, len(elems)))
                for r, y in enumerate(self.basis):
                    for c, x in enumerate(elems):
                        G[r, c] = _g(F.matmul(x, y), p, i, mod)
            N = la.nullspace(F, G)
            I = F.matmul(I, N)
            if I.shape[1] == 0:
                break
        return I

    def is_nilpotent(self, X: np.ndarray) -> bool:
        return la.is_zero(la.matpow(self.F, X, self.n)) if self.n else True


def _g_batched(elems: np.ndarray, basis: np.ndarray, p: int, i: int) -> np.ndarray:
    """``G[r, c] = _g(elems[c] @ basis[r])`` for int64 stacks of matrices."""
    mod = p ** (i + 1)
    if i == 0:
        # tr(x y) = vec(x) . vec(y^T)
        Y = np.ascontiguousarray(basis.transpose(0, 2, 1)).reshape(len(basis), -1)
        return (Y @ elems.reshape(len(elems), -1).T) % p
    n = basis.shape[1]
    # float64 products are exact while n * mod^2 < 2^53, and go through BLAS
    dtype = np.float64 if n * mod * mod < (1 << 53) else np.int64
    elems, basis = elems.astype(dtype), basis.astype(dtype)
    G = np.zeros((len(basis), len(elems)), dtype=np.int64)
    for r in range(len(basis)):
        X = np.matmul(elems, basis[r]) % mod
        P = None
        e = p ** i
        while e:
            if e & 1:
                P = X.copy() if P is None else np.matmul(P, X) % mod
            e >>= 1
            if e:
                X = np.matmul(X, X) % mod
        t = np.trace(P, axis1=1, axis2=2).astype(np.int64) % mod
        G[r] = (t // p ** i) % p
    return G


def _g(X: np.ndarray, p: int, i: int, mod: int) -> int:
    """(trace of the integer lift of X raised to p^i, mod p^(i+1)) / p^i."""
    n = X.shape[0]
    # int64 is exact while n * mod^2 stays below 2^62
    dtype = np.int64 if n * mod * mod < (1 << 62) else object
    Y = np.array(X, dtype=dtype) % mod
    P = np.eye(n, dtype=dtype)
    e = p**i
    base = Y
    while e:
        if e & 1:
            P = (P @ base) % mod
        base = (base @ base) % mod
        e >>= 1
    t = int(sum(P[k, k] for k in range(P.shape[0]))) % mod
    return (t // p**i) % p


def minimal_polynomial(F: GroundField, X: np.ndarray) -> list:
    """Coefficients c_0..c_k (monic, c_k = 1) of the minimal polynomial of X."""
    n = X.shape[0]
    powers = [F.eye(n).reshape(-1)]
    cur = F.eye(n)
    while True:
        cur = F.matmul(cur, X)
        M = np.stack(powers, axis=1)
        sol = la.solve(F, M, cur.reshape(-1)[:, None])
        if sol is not None:
            return [F.neg(c) for c in sol[:, 0]] + [F.one()]
        powers.append(cur.reshape(-1))


def poly_eval(F: GroundField, coeffs: list, X: np.ndarray) -> np.ndarray:
    n = X.shape[0]
    out = F.zeros((n, n))
    for c in reversed(coeffs):
        out = F.matmul(out, X)
        if c != 0:
            out = F.reduce(out + c * F.eye(n))
    return out


def factor_polynomial(F: GroundField, coeffs: list) -> list[tuple[list, int]]:
    """Irreducible factors (monic coefficient lists, low degree first) with exponents."""
    t = sympy.Symbol("t")
    expr = sum(sympy.Rational(int(c.numerator), int(c.denominator)) * t**k if F.characteristic == 0
               else sympy.Integer(int(c)) * t**k for k, c in enumerate(coeffs))
    if F.characteristic:
        poly = sympy.Poly(expr, t, modulus=F.characteristic)
        _, factors = poly.factor_list()
    else:
        _, factors = sympy.factor_list(sympy.Poly(expr, t, domain="QQ"))
    out = []
    for f, e in factors:
        cs = [F(_to_fraction(c)) for c in reversed(f.all_coeffs())]
        lead = F.inv(cs[-1])
        out.append(([F.mul(c, lead) for c in cs], int(e)))
    return out


def _to_fraction(c):
    from fractions import Fraction

    c = sympy.Rational(c)
    return Fraction(int(c.p), int(c.q))
